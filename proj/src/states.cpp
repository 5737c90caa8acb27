#include "cohere/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cohere {

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::NonFinite: return "non-finite";
    case Violation::Kind::Hermiticity: return "hermiticity";
    case Violation::Kind::Trace: return "trace";
    case Violation::Kind::Positivity: return "positivity";
  }
  return "unknown";
}

DensityCheck check_density(const ComplexMatrix& m, const Dims& dims) {
  DensityCheck check;
  if (m.rows() != m.cols()) {
    check.dims_ok = false;
    check.dims_message = "matrix is not square";
    return check;
  }
  if (dims.empty() || total_dim(dims) != static_cast<std::size_t>(m.rows())) {
    check.dims_ok = false;
    check.dims_message = "dims product does not match matrix dimension " +
                         std::to_string(m.rows());
    return check;
  }
  for (auto d : dims) {
    if (d == 0) {
      check.dims_ok = false;
      check.dims_message = "zero subsystem dimension";
      return check;
    }
  }
  if (!m.allFinite()) {
    check.violations.push_back({Violation::Kind::NonFinite, 1.0});
    return check;
  }
  const double herm = max_abs(m - m.adjoint());
  if (herm > kHermiticityTolerance) {
    check.violations.push_back({Violation::Kind::Hermiticity, herm});
  }
  const double trace_dev = std::abs(m.trace() - cplx(1.0, 0.0));
  if (trace_dev > kTraceTolerance) {
    check.violations.push_back({Violation::Kind::Trace, trace_dev});
  }
  const double min_eig = hermitian_eigenvalues(m).minCoeff();
  if (min_eig < -kPsdTolerance) {
    check.violations.push_back({Violation::Kind::Positivity, -min_eig});
  }
  return check;
}

DensityMatrix validate_density(ComplexMatrix m, Dims dims) {
  const auto check = check_density(m, dims);
  if (!check.dims_ok) throw DimensionError(check.dims_message);
  if (!check.violations.empty()) {
    std::ostringstream msg;
    msg << "invalid density matrix:";
    for (const auto& v : check.violations) {
      msg << " " << to_string(v.kind) << "=" << v.magnitude;
    }
    switch (check.violations.front().kind) {
      case Violation::Kind::NonFinite:
        throw NonFiniteError(msg.str(), check.violations);
      case Violation::Kind::Hermiticity:
        throw HermiticityError(msg.str(), check.violations);
      case Violation::Kind::Trace:
        throw TraceError(msg.str(), check.violations);
      case Violation::Kind::Positivity:
        throw PositivityError(msg.str(), check.violations);
    }
  }
  return DensityMatrix(std::move(m), std::move(dims));
}

DensityMatrix from_pure(const StateVector& psi, Dims dims) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    throw NormalizationError("state vector norm " + std::to_string(norm) +
                             " differs from 1");
  }
  return validate_density(outer(psi), std::move(dims));
}

CoherentAmplitudes::CoherentAmplitudes(std::vector<cplx> amps) : amps_(std::move(amps)) {
  if (amps_.empty()) throw DimensionError("empty amplitude list");
  double norm2 = 0.0;
  for (const auto& a : amps_) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > kAmplitudeNormTolerance) {
    throw NormalizationError("amplitudes have squared norm " +
                             std::to_string(norm2));
  }
}

CoherentAmplitudes CoherentAmplitudes::normalized(std::vector<cplx> amps) {
  double norm2 = 0.0;
  for (const auto& a : amps) norm2 += std::norm(a);
  if (norm2 <= 0.0 || !std::isfinite(norm2)) {
    throw NormalizationError("amplitudes cannot be normalized");
  }
  const double s = 1.0 / std::sqrt(norm2);
  for (auto& a : amps) a *= s;
  return CoherentAmplitudes(std::move(amps));
}

StateVector CoherentAmplitudes::vector() const {
  StateVector v(static_cast<Eigen::Index>(amps_.size()));
  for (std::size_t i = 0; i < amps_.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps_[i];
  return v;
}

namespace {

// Flat index of |m m ... m> on `parties` copies of C^d.
std::size_t correlated_index(std::size_t m, std::size_t d, std::size_t parties) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < parties; ++k) idx = idx * d + m;
  return idx;
}

}  // namespace

DensityMatrix mcs_from_density(const DensityMatrix& rho_a, std::size_t parties) {
  if (rho_a.parties() != 1) throw DimensionError("MCS source must be a single party");
  if (parties < 2) throw DimensionError("MCS needs at least two parties");
  const std::size_t d = rho_a.dim();
  Dims dims(parties, d);
  const std::size_t n = total_dim(dims);
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      m(static_cast<Eigen::Index>(correlated_index(a, d, parties)),
        static_cast<Eigen::Index>(correlated_index(b, d, parties))) = rho_a(a, b);
    }
  }
  return validate_density(std::move(m), std::move(dims));
}

DensityMatrix mcs_from_amplitudes(const CoherentAmplitudes& amps,
                                  std::size_t parties) {
  return mcs_from_density(from_pure(amps.vector(), {amps.dim()}), parties);
}

bool is_mcs_form(const DensityMatrix& rho, double tol) {
  const auto& dims = rho.dims();
  if (dims.size() < 2) return false;
  const std::size_t d = dims.front();
  for (auto x : dims) {
    if (x != d) return false;
  }
  const std::size_t n = rho.dim();
  std::vector<bool> correlated(n, false);
  for (std::size_t m = 0; m < d; ++m) correlated[correlated_index(m, d, dims.size())] = true;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (correlated[r] && correlated[c]) continue;
      if (std::abs(rho(r, c)) > tol) return false;
    }
  }
  return true;
}

DensityMatrix mcs_core(const DensityMatrix& rho, double tol) {
  if (!is_mcs_form(rho, tol)) {
    throw NotMCSError("state is not of maximally correlated form");
  }
  const std::size_t d = rho.dims().front();
  const std::size_t parties = rho.parties();
  ComplexMatrix core(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      core(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          rho(correlated_index(a, d, parties), correlated_index(b, d, parties));
    }
  }
  return validate_density(std::move(core), {d});
}

bool is_pure(const DensityMatrix& rho, double tol) {
  const auto values = hermitian_eigenvalues(rho.matrix());
  return values(0) >= 1.0 - tol;
}

StateVector pure_vector(const DensityMatrix& rho, double tol) {
  const auto eig = hermitian_eig(rho.matrix());
  if (eig.values(0) < 1.0 - tol) {
    throw DomainError("state is not pure (largest eigenvalue " +
                      std::to_string(eig.values(0)) + ")");
  }
  StateVector v = eig.vectors.col(0);
  return v / v.norm();
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

DensityMatrix reduce(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
  Dims kept;
  auto sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  for (auto k : sorted) {
    if (k >= rho.parties()) throw DimensionError("party index out of range");
    kept.push_back(rho.dims()[k]);
  }
  if (kept.empty()) throw DimensionError("cannot trace out every party");
  auto m = partial_trace(rho.matrix(), rho.dims(), sorted);
  return validate_density(std::move(m), std::move(kept));
}

DensityMatrix basis_state(std::size_t d, std::size_t i) {
  if (d < 1 || i >= d) throw DomainError("basis index out of range");
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return from_pure(v, {d});
}

DensityMatrix maximally_coherent(std::size_t d) {
  if (d < 1) throw DomainError("dimension must be positive");
  StateVector v = StateVector::Constant(static_cast<Eigen::Index>(d),
                                        1.0 / std::sqrt(static_cast<double>(d)));
  return from_pure(v, {d});
}

DensityMatrix bell_phi_plus() {
  StateVector v = StateVector::Zero(4);
  v(0) = v(3) = std::numbers::sqrt2 / 2.0;
  return from_pure(v, {2, 2});
}

DensityMatrix ghz(std::size_t n) {
  if (n < 2) throw DomainError("GHZ needs at least two qubits");
  const auto amps = CoherentAmplitudes::normalized({1.0, 1.0});
  return mcs_from_amplitudes(amps, n);
}

DensityMatrix w3() {
  StateVector v = StateVector::Zero(8);
  v(4) = v(2) = v(1) = 1.0 / std::sqrt(3.0);  // |100>, |010>, |001>
  return from_pure(v, {2, 2, 2});
}

DensityMatrix standard_state(const std::string& name,
                             const std::vector<std::size_t>& params) {
  auto param = [&](std::size_t k, std::size_t fallback) {
    return k < params.size() ? params[k] : fallback;
  };
  if (name == "basis") return basis_state(param(0, 2), param(1, 0));
  if (name == "max_coherent") return maximally_coherent(param(0, 2));
  if (name == "plus") return maximally_coherent(2);
  if (name == "bell") return bell_phi_plus();
  if (name == "ghz") return ghz(param(0, 3));
  if (name == "w3") return w3();
  if (name == "maximally_mixed") {
    const std::size_t d = param(0, 2);
    return validate_density(identity(d) / static_cast<double>(d), {d});
  }
  throw UnknownStateError("unknown state name: " + name);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ (kGoldenGamma * index);
}

Rng substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(substream_seed(seed, index));
}

cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = complex_gaussian(rng);
  }
  return g;
}

StateVector random_pure(std::size_t d, Rng& rng) {
  if (d < 1) throw DomainError("dimension must be positive");
  StateVector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_gaussian(rng);
  return v / v.norm();
}

StateVector random_pure(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(d, rng);
}

DensityMatrix random_density(std::size_t d, std::size_t rank, Rng& rng) {
  if (d < 1 || rank < 1 || rank > d) {
    throw DomainError("random_density needs 1 <= rank <= d");
  }
  const ComplexMatrix g = ginibre(d, rank, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint()).eval();
  return validate_density(std::move(m), {d});
}

DensityMatrix random_density(std::size_t d, std::size_t rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(d, rank, rng);
}

CoherentAmplitudes random_coherent_amplitudes(std::size_t d, Rng& rng) {
  const auto v = random_pure(d, rng);
  std::vector<cplx> amps(v.data(), v.data() + v.size());
  return CoherentAmplitudes::normalized(std::move(amps));
}

CoherentAmplitudes random_coherent_amplitudes(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  return random_coherent_amplitudes(d, rng);
}

ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  const Eigen::MatrixXcd g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const cplx diag = r(k, k);
    if (std::abs(diag) > 0.0) q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

}  // namespace cohere
