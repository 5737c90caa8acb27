#pragma once

// Reference implementations used only by tests. They take deliberately
// different routes from the library: explicit index loops instead of tensor
// reshapes, the general (non-Hermitian) eigensolver instead of the
// self-adjoint one, and sampling for statistical quantities.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline double h2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

inline double shannon(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) {
    if (x > 0.0) s -= x * std::log2(x);
  }
  return s;
}

inline std::vector<double> eigenvalues(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> es(m, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline double entropy(const Mat& rho) {
  auto ev = eigenvalues(rho);
  for (auto& x : ev) x = std::max(0.0, x);
  return shannon(ev);
}

inline std::vector<std::size_t> digits_of(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

inline std::size_t index_of(const std::vector<std::size_t>& digits,
                            const std::vector<std::size_t>& dims) {
  std::size_t i = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) i = i * dims[k] + digits[k];
  return i;
}

/// Partial trace by summing matrix elements whose traced digits agree.
inline Mat partial_trace(const Mat& rho, const std::vector<std::size_t>& dims,
                         const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> kdims;
  for (auto k : keep) kdims.push_back(dims[k]);
  std::size_t dk = 1;
  for (auto d : kdims) dk *= d;
  Mat out = Mat::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  const auto n = static_cast<std::size_t>(rho.rows());
  for (std::size_t r = 0; r < n; ++r) {
    const auto dr = digits_of(r, dims);
    for (std::size_t c = 0; c < n; ++c) {
      const auto dc = digits_of(c, dims);
      bool traced_equal = true;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (std::find(keep.begin(), keep.end(), k) == keep.end() && dr[k] != dc[k]) {
          traced_equal = false;
          break;
        }
      }
      if (!traced_equal) continue;
      std::vector<std::size_t> kr, kc;
      for (auto k : keep) {
        kr.push_back(dr[k]);
        kc.push_back(dc[k]);
      }
      out(static_cast<Eigen::Index>(index_of(kr, kdims)), static_cast<Eigen::Index>(index_of(kc, kdims))) +=
          rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

/// Partial transpose of one party by swapping its row and column digits.
inline Mat partial_transpose(const Mat& rho, const std::vector<std::size_t>& dims,
                             std::size_t party) {
  Mat out(rho.rows(), rho.cols());
  const auto n = static_cast<std::size_t>(rho.rows());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      auto dr = digits_of(r, dims);
      auto dc = digits_of(c, dims);
      std::swap(dr[party], dc[party]);
      out(static_cast<Eigen::Index>(index_of(dr, dims)), static_cast<Eigen::Index>(index_of(dc, dims))) =
          rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

inline double trace_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

inline Mat dephase_all(const Mat& rho) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < rho.rows(); ++i) out(i, i) = rho(i, i);
  return out;
}

inline double c_d(const Mat& rho) { return entropy(dephase_all(rho)) - entropy(rho); }

/// Coherence of formation of a qubit, via the known closed form.
inline double c_f_qubit(const Mat& rho) {
  const double off = std::abs(rho(0, 1));
  return h2((1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * off * off))) / 2.0);
}

/// Concurrence from the non-Hermitian product rho * rho~, whose eigenvalues
/// are the squares of the usual lambda_i.
inline double concurrence(const Mat& rho) {
  Mat yy = Mat::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Mat tilde = yy * rho.conjugate() * yy;
  auto ev = eigenvalues(rho * tilde);
  std::vector<double> lam;
  // Squared lambdas at rounding level belong to exact zeros of rank-deficient
  // states.
  for (double x : ev) lam.push_back(x > 1e-14 ? std::sqrt(x) : 0.0);
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

inline double e_f_from_concurrence(double c) {
  return h2((1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0);
}

/// Reduced-state entropy of party set `keep` for a pure state.
inline double reduced_entropy(const Vec& psi, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& keep) {
  const Mat rho = psi * psi.adjoint();
  return entropy(partial_trace(rho, dims, keep));
}

inline Vec mcs_vector(const std::vector<cplx>& amps, std::size_t parties) {
  const std::size_t d = amps.size();
  std::size_t dim = 1;
  for (std::size_t k = 0; k < parties; ++k) dim *= d;
  Vec v = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t m = 0; m < d; ++m) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < parties; ++k) idx = idx * d + m;
    v(static_cast<Eigen::Index>(idx)) = amps[m];
  }
  return v;
}

inline std::vector<cplx> random_amplitudes(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> a(d);
  double n2 = 0.0;
  for (auto& x : a) {
    x = cplx(g(rng), g(rng));
    n2 += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(n2);
  return a;
}

/// Mean purity (1 + r^2)/2 of qubit states drawn uniformly from the Bloch ball.
inline double bloch_ball_mean_purity(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double acc = 0.0;
  std::size_t kept = 0;
  while (kept < samples) {
    const double x = u(rng), y = u(rng), z = u(rng);
    const double r2 = x * x + y * y + z * z;
    if (r2 > 1.0) continue;
    acc += (1.0 + r2) / 2.0;
    ++kept;
  }
  return acc / static_cast<double>(samples);
}

inline Mat log2m(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  Mat out = Mat::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double v = std::max(es.eigenvalues()(i), 1e-300);
    out += std::log2(v) * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  return out;
}

/// min S(rho || chi) over chi = sum_i |i><i|_A (x) sigma_i for a two-qubit rho
/// (party A = 0), by stochastic hill climbing on the unnormalized blocks.
inline double qi_relative_entropy_search(const Mat& rho, std::uint64_t seed,
                                         int iterations = 20000) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const double s_rho = -entropy(rho);  // tr rho log rho
  auto cost = [&](const std::vector<Mat>& blocks) {
    Mat chi = Mat::Zero(4, 4);
    double tr = 0.0;
    for (int i = 0; i < 2; ++i) {
      const Mat s = blocks[static_cast<std::size_t>(i)] * blocks[static_cast<std::size_t>(i)].adjoint();
      chi.block(2 * i, 2 * i, 2, 2) = s;
      tr += s.trace().real();
    }
    chi /= tr;
    chi += 1e-14 * Mat::Identity(4, 4);
    return s_rho - (rho * log2m(chi)).trace().real();
  };
  // Start from the maximally mixed state, far from the optimum.
  std::vector<Mat> blocks(2, Mat::Identity(2, 2));
  double best = cost(blocks);
  double step = 0.05;
  for (int it = 0; it < iterations; ++it) {
    auto trial = blocks;
    for (auto& b : trial) {
      for (Eigen::Index r = 0; r < 2; ++r) {
        for (Eigen::Index c = 0; c < 2; ++c) b(r, c) += step * cplx(g(rng), g(rng));
      }
    }
    const double v = cost(trial);
    if (v < best) {
      best = v;
      blocks = trial;
    } else if (it % 500 == 499) {
      step *= 0.7;
    }
  }
  return best;
}

}  // namespace oracle
