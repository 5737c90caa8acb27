#pragma once

#include <json.hpp>

#include "cohere/channels.hpp"
#include "cohere/measures.hpp"
#include "cohere/multilevel.hpp"
#include "cohere/protocols.hpp"
#include "cohere/verify.hpp"

namespace cohere {

using Json = nlohmann::json;

/// {"dims": [...], "re": [[...]], "im": [[...]]}.
Json state_to_json(const DensityMatrix& rho);

/// Accepts the full form above ("im" optional), an object {"amps": [...],
/// "dims": [...]}, a bare array of reals, or an array of [re, im] pairs.
/// Amplitude inputs are normalized and promoted to a pure density matrix.
DensityMatrix state_from_json(const Json& j);

/// Amplitudes from the shorthand forms, without normalization.
std::vector<cplx> amplitudes_from_json(const Json& j);

/// {"dims_in": [...], "dims_out": [...], "operators": [{"re", "im"}, ...]}.
Json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const Json& j);

Json to_json(const MeasureResult& r);
Json to_json(const ConversionReport& r);
Json to_json(const ProtocolTrace& t);
Json to_json(const TheoremReport& r);
Json to_json(const DecomposabilityVerdict& v);
Json to_json(const MultilevelReport& r);

}  // namespace cohere
