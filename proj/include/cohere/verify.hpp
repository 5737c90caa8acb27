#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cohere/measures.hpp"

namespace cohere {

/// Verdict of one inequality under interval semantics: exact values are
/// points, an upper bound pins the quantity into [0, v], a lower bound into
/// [v, inf).
enum class CheckStatus { Certified, Inconclusive, Violated };

struct CheckOutcome {
  CheckStatus status;
  double margin;  // small - big at the refuting corners; > tol means violated
};

/// Checks big >= small.
CheckOutcome check_geq(const MeasureResult& big, const MeasureResult& small, double tol);
/// Checks a == b; both must be equality kinds to certify or refute.
CheckOutcome check_equal(const MeasureResult& a, const MeasureResult& b, double tol);

struct VerifyConfig {
  std::size_t samples = 100;
  std::size_t d = 2;
  std::size_t n = 2;          // ancillas; registers have n + 1 parties
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  std::size_t max_ops = 4;    // Kraus operators per random incoherent channel
  std::size_t threads = 0;    // 0 = hardware concurrency
  std::vector<std::string> only;  // report ids to run; empty runs all
};

struct ViolationRecord {
  std::uint64_t seed;   // substream seed reproducing the sample
  std::size_t index;    // sample index
  std::string check;
  double margin;
};

struct TheoremReport {
  std::string id;
  std::string statement;
  std::size_t samples = 0;
  std::size_t checks = 0;
  std::size_t certified = 0;
  std::size_t inconclusive = 0;
  std::vector<ViolationRecord> violations;
  double max_margin = -std::numeric_limits<double>::infinity();
};

/// Report ids in output order.
const std::vector<std::string>& theorem_ids();

/// Witness checking of the conversion inequalities on sampled states,
/// incoherent channels and LICC circuits. Throws ConfigError unless
/// 2 <= d <= 4, 1 <= n <= 3 and samples > 0.
std::vector<TheoremReport> verify_theorems(const VerifyConfig& config);

}  // namespace cohere
