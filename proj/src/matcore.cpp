#include "cohere/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cohere/errors.hpp"

namespace cohere {

namespace {

void check_dims(const ComplexMatrix& rho, std::span<const std::size_t> dims) {
  if (rho.rows() != rho.cols()) {
    throw DimensionError("operator is not square: " +
                         std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()));
  }
  if (dims.empty()) throw DimensionError("empty dims list");
  for (auto d : dims) {
    if (d == 0) throw DimensionError("zero subsystem dimension");
  }
  const auto n = total_dim(dims);
  if (n != static_cast<std::size_t>(rho.rows())) {
    throw DimensionError("dims product " + std::to_string(n) +
                         " does not match matrix dimension " +
                         std::to_string(rho.rows()));
  }
}

std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) {
    strides[k - 1] = strides[k] * dims[k];
  }
  return strides;
}

std::vector<bool> party_mask(std::span<const std::size_t> parties,
                             std::size_t n_parties) {
  std::vector<bool> mask(n_parties, false);
  for (auto p : parties) {
    if (p >= n_parties) {
      throw DimensionError("party index " + std::to_string(p) +
                           " out of range for " + std::to_string(n_parties) +
                           " parties");
    }
    if (mask[p]) {
      throw DimensionError("party index " + std::to_string(p) + " repeated");
    }
    mask[p] = true;
  }
  return mask;
}

}  // namespace

std::size_t total_dim(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

std::vector<std::size_t> unflatten(std::size_t index,
                                   std::span<const std::size_t> dims) {
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
  return digits;
}

std::size_t flatten(std::span<const std::size_t> digits,
                    std::span<const std::size_t> dims) {
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
  return index;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

StateVector kron(const StateVector& a, const StateVector& b) {
  StateVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

ComplexMatrix outer(const StateVector& psi) { return psi * psi.adjoint(); }

ComplexMatrix identity(std::size_t n) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(n),
                                 static_cast<Eigen::Index>(n));
}

ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  check_dims(rho, dims);
  const auto kept = party_mask(keep, dims.size());

  Dims kept_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (kept[k]) kept_dims.push_back(dims[k]);
  }
  const std::size_t n = total_dim(dims);
  const std::size_t m = kept_dims.empty() ? 1 : total_dim(kept_dims);

  // Split each full index into (kept index, traced index).
  std::vector<std::size_t> kept_index(n), traced_index(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto digits = unflatten(i, dims);
    std::size_t ki = 0, ti = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (kept[k]) {
        ki = ki * dims[k] + digits[k];
      } else {
        ti = ti * dims[k] + digits[k];
      }
    }
    kept_index[i] = ki;
    traced_index[i] = ti;
  }

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(m),
                                          static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (traced_index[r] == traced_index[c]) {
        out(static_cast<Eigen::Index>(kept_index[r]),
            static_cast<Eigen::Index>(kept_index[c])) +=
            rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho,
                                std::span<const std::size_t> dims,
                                std::span<const std::size_t> parties) {
  check_dims(rho, dims);
  const auto mask = party_mask(parties, dims.size());
  const auto n = static_cast<std::size_t>(rho.rows());
  const auto strides = strides_of(dims);

  ComplexMatrix out(rho.rows(), rho.cols());
  for (std::size_t r = 0; r < n; ++r) {
    const auto rd = unflatten(r, dims);
    for (std::size_t c = 0; c < n; ++c) {
      const auto cd = unflatten(c, dims);
      std::size_t r2 = r, c2 = c;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (!mask[k] || rd[k] == cd[k]) continue;
        r2 = r2 - rd[k] * strides[k] + cd[k] * strides[k];
        c2 = c2 - cd[k] * strides[k] + rd[k] * strides[k];
      }
      out(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c2)) =
          rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho,
                                std::span<const std::size_t> dims,
                                std::size_t party) {
  const std::size_t parties[] = {party};
  return partial_transpose(rho, dims, parties);
}

ComplexMatrix permute_parties(const ComplexMatrix& rho,
                              std::span<const std::size_t> dims,
                              std::span<const std::size_t> order) {
  check_dims(rho, dims);
  if (order.size() != dims.size()) {
    throw DimensionError("permutation length does not match party count");
  }
  const auto mask = party_mask(order, dims.size());
  (void)mask;
  Dims new_dims(dims.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_dims[k] = dims[order[k]];

  const auto n = static_cast<std::size_t>(rho.rows());
  std::vector<std::size_t> map(n);
  std::vector<std::size_t> nd(dims.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = unflatten(i, dims);
    for (std::size_t k = 0; k < order.size(); ++k) nd[k] = d[order[k]];
    map[i] = flatten(nd, new_dims);
  }
  ComplexMatrix out(rho.rows(), rho.cols());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out(static_cast<Eigen::Index>(map[r]), static_cast<Eigen::Index>(map[c])) =
          rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> dims,
                    std::size_t party) {
  if (party >= dims.size()) throw DimensionError("party index out of range");
  if (op.rows() != op.cols() ||
      static_cast<std::size_t>(op.rows()) != dims[party]) {
    throw DimensionError("local operator does not match party dimension");
  }
  ComplexMatrix out = identity(1);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    out = kron(out, k == party ? op : identity(dims[k]));
  }
  return out;
}

HermitianEig hermitian_eig(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("eigensolve of non-square matrix");
  const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  const auto n = h.rows();
  // Eigen returns ascending values; reverse for descending order.
  HermitianEig out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    Eigen::VectorXcd v = solver.eigenvectors().col(n - 1 - k);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        v *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
    }
    out.vectors.col(k) = v;
  }
  return out;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("eigensolve of non-square matrix");
  const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

double trace_norm(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("trace norm of non-square matrix");
  if (is_hermitian(a, 1e-13)) {
    return hermitian_eigenvalues(a).cwiseAbs().sum();
  }
  const Eigen::MatrixXcd dense = a;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dense);
  return svd.singularValues().sum();
}

double shannon_entropy(const RealVector& probabilities) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities(i);
    if (p < -kPsdTolerance) {
      throw PositivityError("negative weight " + std::to_string(p) +
                                " in entropy argument",
                            {{Violation::Kind::Positivity, -p}});
    }
    if (p > kEigenClampTolerance) s -= p * std::log2(p);
  }
  return s;
}

double vn_entropy(const ComplexMatrix& rho) {
  return shannon_entropy(hermitian_eigenvalues(rho));
}

double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("relative entropy of operators with different shapes");
  }
  const auto es = hermitian_eig(sigma);
  // tr(rho log sigma) = sum_k <k|rho|k> log mu_k in the eigenbasis of sigma.
  const Eigen::MatrixXcd v = es.vectors;
  const Eigen::MatrixXcd rotated = v.adjoint() * Eigen::MatrixXcd(rho) * v;
  double cross = 0.0;
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    const double weight = rotated(k, k).real();
    const double mu = es.values(k);
    if (mu <= kEigenClampTolerance) {
      if (weight > kEigenClampTolerance) {
        return std::numeric_limits<double>::infinity();
      }
      continue;
    }
    if (weight > 0.0) cross += weight * std::log2(mu);
  }
  const double value = -vn_entropy(rho) - cross;
  return std::max(value, 0.0);
}

double binary_entropy(double x) {
  if (x < -kEigenClampTolerance || x > 1.0 + kEigenClampTolerance ||
      std::isnan(x)) {
    throw DomainError("binary entropy argument out of [0,1]: " +
                      std::to_string(x));
  }
  x = std::clamp(x, 0.0, 1.0);
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

SchmidtForm schmidt(const StateVector& psi, std::size_t dim_left,
                    std::size_t dim_right) {
  if (dim_left * dim_right != static_cast<std::size_t>(psi.size())) {
    throw DimensionError("Schmidt dims do not match vector length");
  }
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    throw NormalizationError("state vector norm " + std::to_string(norm) +
                             " differs from 1");
  }
  Eigen::MatrixXcd m(dim_left, dim_right);
  for (std::size_t i = 0; i < dim_left; ++i) {
    for (std::size_t j = 0; j < dim_right; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          psi(static_cast<Eigen::Index>(i * dim_right + j));
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // m = U S V^dagger, so psi = sum_k s_k |u_k> (x) conj(v_k).
  return SchmidtForm{svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate()};
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol;
}

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace cohere
