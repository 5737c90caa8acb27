#pragma once

// Dense complex linear algebra and information-theoretic primitives.
//
// Multipartite operators use the row-major tensor convention: party 0 is the
// most significant digit of a basis index, so |i>|j> on dims {dA, dB} has
// index i*dB + j.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cohere {

using cplx = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

inline constexpr double kEigenClampTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-9;

/// Eigen-decomposition of a Hermitian matrix. Values descend; each column of
/// `vectors` has its first non-negligible component real and positive, which
/// makes the result reproducible for a fixed input.
struct HermitianEig {
  RealVector values;
  ComplexMatrix vectors;
};

/// Schmidt form of a bipartite pure state: psi = sum_i s_i |u_i>|v_i>.
struct SchmidtForm {
  RealVector coefficients;  // descending, nonnegative
  ComplexMatrix left_basis;   // columns u_i
  ComplexMatrix right_basis;  // columns v_i
};

std::size_t total_dim(std::span<const std::size_t> dims);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
StateVector kron(const StateVector& a, const StateVector& b);

ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix outer(const StateVector& psi);
ComplexMatrix identity(std::size_t n);

/// Reduced operator on `keep` (ascending order in the output). Throws
/// DimensionError on inconsistent dims or indices.
ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Transpose on the tensor factors listed in `parties`.
ComplexMatrix partial_transpose(const ComplexMatrix& rho,
                                std::span<const std::size_t> dims,
                                std::span<const std::size_t> parties);
ComplexMatrix partial_transpose(const ComplexMatrix& rho,
                                std::span<const std::size_t> dims,
                                std::size_t party);

/// Reorders tensor factors: output factor k is input factor order[k].
ComplexMatrix permute_parties(const ComplexMatrix& rho,
                              std::span<const std::size_t> dims,
                              std::span<const std::size_t> order);

/// Embeds a single-party operator acting on `party` into the full register.
ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> dims,
                    std::size_t party);

HermitianEig hermitian_eig(const ComplexMatrix& a);
RealVector hermitian_eigenvalues(const ComplexMatrix& a);

double trace_norm(const ComplexMatrix& a);

/// -sum p log2 p over a spectrum; entries below 1e-12 count as zero. Throws
/// PositivityError when an entry is below -1e-9.
double shannon_entropy(const RealVector& probabilities);

/// von Neumann entropy in bits of a Hermitian PSD matrix.
double vn_entropy(const ComplexMatrix& rho);

/// S(rho || sigma) in bits, +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// h(x) in bits; inputs within 1e-12 outside [0,1] are clamped.
double binary_entropy(double x);

/// Throws NormalizationError if | ||psi|| - 1 | > 1e-9.
SchmidtForm schmidt(const StateVector& psi, std::size_t dim_left,
                    std::size_t dim_right);

bool is_hermitian(const ComplexMatrix& a, double tol);
double max_abs(const ComplexMatrix& a);

/// Digits of a flat basis index in the mixed radix given by dims.
std::vector<std::size_t> unflatten(std::size_t index,
                                   std::span<const std::size_t> dims);
std::size_t flatten(std::span<const std::size_t> digits,
                    std::span<const std::size_t> dims);

}  // namespace cohere
