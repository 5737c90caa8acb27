#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cohere/errors.hpp"
#include "cohere/matcore.hpp"

namespace cohere {

inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kAmplitudeNormTolerance = 1e-10;

/// Outcome of checking a candidate density matrix without throwing.
struct DensityCheck {
  bool dims_ok = true;
  std::string dims_message;
  std::vector<Violation> violations;
  bool ok() const { return dims_ok && violations.empty(); }
};

DensityCheck check_density(const ComplexMatrix& m, const Dims& dims);

/// Hermitian, unit-trace, PSD operator on a register with known subsystem
/// dimensions. Only constructible through validation.
class DensityMatrix {
public:
  const ComplexMatrix& matrix() const { return matrix_; }
  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t parties() const { return dims_.size(); }
  cplx operator()(std::size_t r, std::size_t c) const {
    return matrix_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  friend DensityMatrix validate_density(ComplexMatrix m, Dims dims);

private:
  DensityMatrix(ComplexMatrix m, Dims dims)
      : matrix_(std::move(m)), dims_(std::move(dims)) {}

  ComplexMatrix matrix_;
  Dims dims_;
};

/// Throws DimensionError, or the ValidationError subclass of the first failed
/// invariant (non-finite, Hermiticity, trace, positivity) with all failures
/// attached.
DensityMatrix validate_density(ComplexMatrix m, Dims dims);

DensityMatrix from_pure(const StateVector& psi, Dims dims);

/// Normalized amplitudes of a single-party coherent pure state.
class CoherentAmplitudes {
public:
  /// Throws NormalizationError unless sum |a_i|^2 = 1 within 1e-10.
  explicit CoherentAmplitudes(std::vector<cplx> amps);
  static CoherentAmplitudes normalized(std::vector<cplx> amps);

  const std::vector<cplx>& values() const { return amps_; }
  std::size_t dim() const { return amps_.size(); }
  StateVector vector() const;

private:
  std::vector<cplx> amps_;
};

/// sum_{mn} a_m conj(a_n) |m...m><n...n| on `parties` copies of C^d.
DensityMatrix mcs_from_amplitudes(const CoherentAmplitudes& amps,
                                  std::size_t parties);

/// sum_{mn} rho_mn |m...m><n...n| for a single-party density matrix.
DensityMatrix mcs_from_density(const DensityMatrix& rho_a, std::size_t parties);

/// True when every entry off the correlated subspace {|m...m>} is below tol
/// and all parties share one dimension (at least two parties).
bool is_mcs_form(const DensityMatrix& rho, double tol = 1e-12);

/// The d x d block rho_mn = <m...m|rho|n...n>. Throws NotMCSError.
DensityMatrix mcs_core(const DensityMatrix& rho, double tol = 1e-12);

/// Eigenvector of a rank-one density matrix. Throws DomainError otherwise.
StateVector pure_vector(const DensityMatrix& rho, double tol = 1e-10);

bool is_pure(const DensityMatrix& rho, double tol = 1e-10);

double purity(const DensityMatrix& rho);

DensityMatrix reduce(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

// Named states.
DensityMatrix basis_state(std::size_t d, std::size_t i);
DensityMatrix maximally_coherent(std::size_t d);
DensityMatrix bell_phi_plus();
DensityMatrix ghz(std::size_t n);
DensityMatrix w3();

/// Looks up a named state: "basis" (d, i), "max_coherent" (d), "bell",
/// "ghz" (n), "w3", "plus", "maximally_mixed" (d). Throws UnknownStateError.
DensityMatrix standard_state(const std::string& name,
                             const std::vector<std::size_t>& params = {});

// Sampling. The core generator is mt19937_64; batch item i draws from
// substream(seed, i).
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64";
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);
Rng substream(std::uint64_t seed, std::uint64_t index);

cplx complex_gaussian(Rng& rng);
ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

StateVector random_pure(std::size_t d, Rng& rng);
StateVector random_pure(std::size_t d, std::uint64_t seed);
DensityMatrix random_density(std::size_t d, std::size_t rank, Rng& rng);
DensityMatrix random_density(std::size_t d, std::size_t rank, std::uint64_t seed);
CoherentAmplitudes random_coherent_amplitudes(std::size_t d, Rng& rng);
CoherentAmplitudes random_coherent_amplitudes(std::size_t d, std::uint64_t seed);

/// Haar unitary via QR of a Ginibre matrix with phase-fixed R diagonal.
ComplexMatrix random_unitary(std::size_t d, Rng& rng);

}  // namespace cohere
