#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cohere/convex_roof.hpp"
#include "cohere/states.hpp"

namespace cohere {

/// How a reported value relates to the quantity it names. `Exact` is a direct
/// evaluation of the definition, `ClosedForm` an analytic formula for it; both
/// are equalities. Bounds say which side the true value lies on.
enum class MeasureKind { Exact, ClosedForm, UpperBound, LowerBound, HeuristicUpperBound };

std::string to_string(MeasureKind kind);
MeasureKind parse_measure_kind(const std::string& text);

struct MeasureResult {
  double value = 0.0;
  MeasureKind kind = MeasureKind::Exact;
  std::string method;
  std::string warning;  // set when a negative value below -1e-9 was clamped

  bool is_exact() const {
    return kind == MeasureKind::Exact || kind == MeasureKind::ClosedForm;
  }
  /// Smallest and largest value consistent with the kind tag (measures are
  /// nonnegative, so an upper bound pins the quantity into [0, value]).
  double lower() const;
  double upper() const;
};

/// Builds a result, clamping negatives to zero.
MeasureResult make_result(double value, MeasureKind kind, std::string method);

/// A cut alpha|alpha-bar of an N-party register. Parties are written as
/// letters A, B, C, ... in text form, e.g. "A|BC".
class Bipartition {
public:
  /// Throws DimensionError when either side is empty or an index is invalid.
  static Bipartition from_left(std::vector<std::size_t> left, std::size_t n_parties);
  /// Accepts "A|BC" or comma-separated indices "0|1,2".
  static Bipartition parse(const std::string& text, std::size_t n_parties);

  const std::vector<std::size_t>& left() const { return left_; }
  const std::vector<std::size_t>& right() const { return right_; }
  std::size_t n_parties() const { return n_parties_; }
  std::string to_string() const;

  bool operator==(const Bipartition&) const = default;

private:
  Bipartition(std::vector<std::size_t> left, std::vector<std::size_t> right,
              std::size_t n)
      : left_(std::move(left)), right_(std::move(right)), n_parties_(n) {}

  std::vector<std::size_t> left_;
  std::vector<std::size_t> right_;
  std::size_t n_parties_;
};

/// The 2^{N-1} - 1 distinct cuts, each with party 0 on the left.
std::vector<Bipartition> all_bipartitions(std::size_t n_parties);

/// Cut separating party `party` from the rest.
Bipartition one_vs_rest(std::size_t party, std::size_t n_parties);

/// Entropy of entanglement of a pure state across a cut.
double entanglement_entropy(const StateVector& psi, const Dims& dims,
                            const Bipartition& cut);

// Coherence.
MeasureResult c_d(const DensityMatrix& rho);
std::optional<MeasureResult> c_f_exact(const DensityMatrix& rho);
MeasureResult c_f(const DensityMatrix& rho, const ConvexRoofOptions& options = {});

// Bipartite entanglement.
double concurrence(const DensityMatrix& rho);
double log_negativity(const DensityMatrix& rho, const Bipartition& cut);
/// Lower bound on E_f from the partial-transpose trace norm; needs a qubit on
/// one side of the cut.
double e_f_lower_bound(const DensityMatrix& rho, const Bipartition& cut);
std::optional<MeasureResult> e_f_exact(const DensityMatrix& rho, const Bipartition& cut);
MeasureResult e_f(const DensityMatrix& rho, const Bipartition& cut,
                  const ConvexRoofOptions& options = {});
MeasureResult e_d(const DensityMatrix& rho, const Bipartition& cut);

// Genuine multipartite entanglement.
enum class GmeBase { Distillable, Formation };

struct GmeResult {
  MeasureResult result;
  Bipartition argmin;
};

GmeResult e_gme_pure(const StateVector& psi, const Dims& dims, GmeBase base);
/// Throws NotMCSError unless the input is of maximally correlated form.
MeasureResult e_f_gme_mcs(const DensityMatrix& rho);
MeasureResult e_r_m_mcs(const DensityMatrix& rho);

/// Quantum-incoherent relative entropy with the target party dephased.
MeasureResult qi_relative_entropy(const DensityMatrix& rho, std::size_t target_party);

// Monogamy indicators on N-qubit states, with party 0 as the focus qubit.
MeasureResult tau_med(const DensityMatrix& rho);
MeasureResult tau_mef(const DensityMatrix& rho);
/// Log-negativity for the one-vs-rest distillable entanglement.
MeasureResult tau_med_ub(const DensityMatrix& rho);
/// Partial-transpose lower bound for the one-vs-rest entanglement of formation.
MeasureResult tau_mef_lb(const DensityMatrix& rho);

}  // namespace cohere
