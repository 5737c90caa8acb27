#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cohere/states.hpp"

namespace cohere {

inline constexpr double kCompletenessTolerance = 1e-10;
inline constexpr double kIncoherenceTolerance = 1e-12;

/// Quantum channel in Kraus form. Construction checks sum K^dagger K = I.
class KrausChannel {
public:
  KrausChannel(std::vector<ComplexMatrix> operators, Dims input_dims,
               Dims output_dims);
  KrausChannel(std::vector<ComplexMatrix> operators, Dims dims);

  static KrausChannel unitary(ComplexMatrix u, Dims dims);

  const std::vector<ComplexMatrix>& operators() const { return operators_; }
  const Dims& input_dims() const { return input_dims_; }
  const Dims& output_dims() const { return output_dims_; }

  /// max |sum K^dagger K - I|.
  double completeness_residual() const;

private:
  std::vector<ComplexMatrix> operators_;
  Dims input_dims_;
  Dims output_dims_;
};

struct IncoherenceWitness {
  std::size_t op;
  std::size_t column;
  std::size_t row_a;
  std::size_t row_b;
};

struct IncoherenceVerdict {
  bool is_incoherent = true;
  std::optional<IncoherenceWitness> witness;
};

/// Every column of every Kraus operator has at most one entry above 1e-12.
IncoherenceVerdict is_incoherent_kraus(const KrausChannel& ch);
IncoherenceVerdict is_incoherent_operator(const ComplexMatrix& op);

/// Unitary with exactly one unit-modulus entry per column.
bool is_incoherent_unitary(const ComplexMatrix& u, double tol = 1e-10);

/// Multipartite generalized CNOT on n+1 parties of dimension d:
/// |i>|j_1>...|j_n> -> |i>|(i+j_1) mod d>...|(i+j_n) mod d>.
ComplexMatrix u_mcn(std::size_t d, std::size_t n);

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho);
DensityMatrix apply_unitary(const ComplexMatrix& u, const DensityMatrix& rho);

/// Zeroes every entry whose row and column digits differ on a selected party.
DensityMatrix dephase(const DensityMatrix& rho, const std::vector<std::size_t>& parties);
DensityMatrix dephase(const DensityMatrix& rho);

/// p I/d + (1-p) rho on the whole register.
DensityMatrix depolarize(const DensityMatrix& rho, double p);

/// phases[j][k] defines |phi_j> = d^{-1/2} sum_k exp(i phases[j][k]) |k>.
using PhaseTable = std::vector<std::vector<double>>;

PhaseTable fourier_phases(std::size_t d);

/// Incoherent measurement K_j = |j><phi_j| with outcome-conditioned
/// incoherent unitaries U_j = sum_k exp(i phases[j][k]) |k><k|.
struct MeasurementInstrument {
  KrausChannel kraus;
  std::vector<ComplexMatrix> corrections;
  PhaseTable phases;
};

/// Throws OrthogonalityError unless the |phi_j> are orthonormal within 1e-10.
MeasurementInstrument licc_instrument(std::size_t d, const PhaseTable& phases);
/// Fourier phases; for d = 2 this is {|0><+|, |1><-|} with corrections I, Z.
MeasurementInstrument licc_instrument(std::size_t d);

/// Random incoherent channel on a register of the given dims. Each operator
/// sends column c to one uniformly drawn row with a complex amplitude; the
/// amplitude vectors are solved column by column so that the Kraus set is
/// exactly complete. Throws CompletionError after bounded resampling.
KrausChannel random_incoherent_channel(const Dims& dims, std::size_t n_ops, Rng& rng);
KrausChannel random_incoherent_channel(std::size_t d_in, std::size_t n_ops,
                                       std::uint64_t seed);

/// Permutation times diagonal phases on dimension d.
ComplexMatrix random_incoherent_unitary(std::size_t d, Rng& rng);

}  // namespace cohere
