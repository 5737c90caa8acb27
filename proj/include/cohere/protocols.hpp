#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cohere/channels.hpp"
#include "cohere/measures.hpp"

namespace cohere {

struct CutMeasures {
  Bipartition cut;
  MeasureResult e_d;
  MeasureResult e_f;
  double residual_d = 0.0;  // |E_d - C_d(input)|
  double residual_f = 0.0;  // |E_f - C_f(input)|
};

struct ConversionReport {
  MeasureResult c_d;
  MeasureResult c_f;
  std::vector<CutMeasures> cuts;
  double max_residual = 0.0;
};

struct Conversion {
  DensityMatrix state;
  ConversionReport report;
};

/// U_mcn applied to rho_A (x) |0...0>. The input must be a single party.
Conversion convert(const DensityMatrix& rho_a, std::size_t n_ancillas,
                   const ConvexRoofOptions& options = {});

struct LiccOutcome {
  DensityMatrix state;  // measured party removed
  std::size_t outcome;
  double probability;
};

/// Measures `measured` with the Fourier instrument, applies U_j to
/// `correction`, and traces out the measured party. Throws NotMCSError.
LiccOutcome licc_step(const DensityMatrix& rho, std::size_t measured,
                      std::size_t correction, std::size_t outcome);
LiccOutcome licc_step(const DensityMatrix& rho, std::size_t measured,
                      std::size_t correction, Rng& rng);

/// Non-selective form of one LICC round: Kraus operators U_j K_j with K_j
/// acting on `measured` and U_j on `correction`. Every operator is incoherent.
KrausChannel licc_channel(const Dims& dims, std::size_t measured, std::size_t correction,
                          const MeasurementInstrument& instrument);

struct ProtocolStep {
  std::string label;
  DensityMatrix state;
  std::optional<std::size_t> outcome;
  std::optional<double> probability;
  std::map<std::string, MeasureResult> measures;
};

struct ProtocolTrace {
  std::vector<ProtocolStep> steps;
  std::uint64_t seed = 0;
  double loss_cd = 0.0;
  double loss_cf = 0.0;
};

/// Single-party coherence -> tripartite MCS -> bipartite MCS -> coherence
/// back on party A. Monogamy indicators are logged for qubit inputs only.
ProtocolTrace cyclic(const DensityMatrix& rho_a, std::uint64_t seed,
                     const ConvexRoofOptions& options = {});

}  // namespace cohere
