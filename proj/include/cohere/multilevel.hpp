#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cohere/measures.hpp"

namespace cohere {

inline constexpr double kDecomposabilityTolerance = 1e-9;

struct DecomposabilityVerdict {
  bool decomposable = false;
  double det_s = 0.0;                  // s0 s3 - s1 s2
  std::vector<double> schmidt_coeffs;  // descending
  double criterion_residual = 0.0;
};

/// Two-ququart pure state (length 16, party 0 most significant). Decomposable
/// into two entangled qubit pairs iff the determinant of [[s0, s1], [s2, s3]]
/// vanishes. Throws NormalizationError or DimensionError.
DecomposabilityVerdict kraft_decomposable(const StateVector& psi,
                                          double tol = kDecomposabilityTolerance);

/// The same test phrased on four coherent amplitudes: |a0 a3| = |a1 a2| with
/// moduli sorted descending.
DecomposabilityVerdict observation1(const CoherentAmplitudes& amps,
                                    double tol = kDecomposabilityTolerance);

enum class CutVerdict { Decomposable, Genuine, NotApplicable };
std::string to_string(CutVerdict verdict);

struct CutReport {
  Bipartition cut;
  std::size_t schmidt_rank = 0;
  std::vector<double> schmidt_coeffs;
  CutVerdict verdict = CutVerdict::NotApplicable;
  std::optional<DecomposabilityVerdict> detail;  // rank-4 cuts only
};

struct MultilevelReport {
  std::vector<CutReport> cuts;
  /// True when at least one cut admits the test and none is decomposable.
  bool genuine_multilevel = false;
};

/// Rank-1 cuts are products (decomposable), rank-4 cuts get the determinant
/// test, every other rank is reported as not applicable.
MultilevelReport multilevel_report(const StateVector& psi, const Dims& dims,
                                   double tol = kDecomposabilityTolerance);

}  // namespace cohere
