#include "cohere/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace cohere {

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators, Dims input_dims,
                           Dims output_dims)
    : operators_(std::move(operators)),
      input_dims_(std::move(input_dims)),
      output_dims_(std::move(output_dims)) {
  if (operators_.empty()) throw DimensionError("channel without Kraus operators");
  const auto n_in = static_cast<Eigen::Index>(total_dim(input_dims_));
  const auto n_out = static_cast<Eigen::Index>(total_dim(output_dims_));
  for (const auto& k : operators_) {
    if (k.rows() != n_out || k.cols() != n_in) {
      throw DimensionError("Kraus operator shape does not match channel dims");
    }
    if (!k.allFinite()) throw DomainError("non-finite Kraus operator entry");
  }
  const double residual = completeness_residual();
  if (residual > kCompletenessTolerance) {
    throw CompletenessError("Kraus operators are not complete (residual " +
                            std::to_string(residual) + ")");
  }
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators, Dims dims)
    : KrausChannel(std::move(operators), dims, dims) {}

KrausChannel KrausChannel::unitary(ComplexMatrix u, Dims dims) {
  std::vector<ComplexMatrix> ops;
  ops.push_back(std::move(u));
  return KrausChannel(std::move(ops), std::move(dims));
}

double KrausChannel::completeness_residual() const {
  const auto n_in = operators_.front().cols();
  ComplexMatrix sum = ComplexMatrix::Zero(n_in, n_in);
  for (const auto& k : operators_) sum.noalias() += k.adjoint() * k;
  return max_abs(sum - ComplexMatrix::Identity(n_in, n_in));
}

IncoherenceVerdict is_incoherent_operator(const ComplexMatrix& op) {
  for (Eigen::Index c = 0; c < op.cols(); ++c) {
    std::optional<Eigen::Index> first;
    for (Eigen::Index r = 0; r < op.rows(); ++r) {
      if (std::abs(op(r, c)) <= kIncoherenceTolerance) continue;
      if (first) {
        return {false, IncoherenceWitness{0, static_cast<std::size_t>(c),
                                          static_cast<std::size_t>(*first),
                                          static_cast<std::size_t>(r)}};
      }
      first = r;
    }
  }
  return {};
}

IncoherenceVerdict is_incoherent_kraus(const KrausChannel& ch) {
  for (std::size_t l = 0; l < ch.operators().size(); ++l) {
    auto verdict = is_incoherent_operator(ch.operators()[l]);
    if (!verdict.is_incoherent) {
      verdict.witness->op = l;
      return verdict;
    }
  }
  return {};
}

bool is_incoherent_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  if (max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())) > tol) {
    return false;
  }
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    int nonzero = 0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      if (std::abs(u(r, c)) > tol) {
        ++nonzero;
        if (std::abs(std::abs(u(r, c)) - 1.0) > tol) return false;
      }
    }
    if (nonzero != 1) return false;
  }
  return true;
}

ComplexMatrix u_mcn(std::size_t d, std::size_t n) {
  if (d < 2 || n < 1) throw DomainError("u_mcn needs d >= 2 and n >= 1");
  const Dims dims(n + 1, d);
  const std::size_t size = total_dim(dims);
  ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(size),
                                        static_cast<Eigen::Index>(size));
  for (std::size_t in = 0; in < size; ++in) {
    auto digits = unflatten(in, dims);
    const std::size_t control = digits[0];
    for (std::size_t k = 1; k < digits.size(); ++k) digits[k] = (control + digits[k]) % d;
    u(static_cast<Eigen::Index>(flatten(digits, dims)), static_cast<Eigen::Index>(in)) = 1.0;
  }
  return u;
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  if (ch.input_dims() != rho.dims()) {
    throw DimensionError("channel input dims do not match state dims");
  }
  const auto n_out = ch.operators().front().rows();
  ComplexMatrix out = ComplexMatrix::Zero(n_out, n_out);
  for (const auto& k : ch.operators()) {
    out.noalias() += k * rho.matrix() * k.adjoint();
  }
  return validate_density(std::move(out), ch.output_dims());
}

DensityMatrix apply_unitary(const ComplexMatrix& u, const DensityMatrix& rho) {
  if (static_cast<std::size_t>(u.cols()) != rho.dim() || u.rows() != u.cols()) {
    throw DimensionError("unitary does not match state dimension");
  }
  return validate_density(u * rho.matrix() * u.adjoint(), rho.dims());
}

DensityMatrix dephase(const DensityMatrix& rho, const std::vector<std::size_t>& parties) {
  const auto& dims = rho.dims();
  std::vector<bool> selected(dims.size(), false);
  for (auto p : parties) {
    if (p >= dims.size()) throw DimensionError("dephase party index out of range");
    selected[p] = true;
  }
  const std::size_t n = rho.dim();
  std::vector<std::vector<std::size_t>> digits(n);
  for (std::size_t i = 0; i < n; ++i) digits[i] = unflatten(i, dims);

  ComplexMatrix out = rho.matrix();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (selected[k] && digits[r][k] != digits[c][k]) {
          out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = 0.0;
          break;
        }
      }
    }
  }
  return validate_density(std::move(out), dims);
}

DensityMatrix dephase(const DensityMatrix& rho) {
  ComplexMatrix out = rho.matrix().diagonal().asDiagonal();
  return validate_density(std::move(out), rho.dims());
}

DensityMatrix depolarize(const DensityMatrix& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("depolarizing probability out of [0,1]: " + std::to_string(p));
  }
  const auto n = static_cast<double>(rho.dim());
  ComplexMatrix out = (1.0 - p) * rho.matrix() + (p / n) * identity(rho.dim());
  return validate_density(std::move(out), rho.dims());
}

namespace {

// exp(i angle), exact at multiples of pi/2.
cplx unit_phase(double angle) {
  const double quarter = angle / (std::numbers::pi / 2.0);
  const double nearest = std::round(quarter);
  if (std::abs(quarter - nearest) < 1e-14) {
    switch (((static_cast<long long>(nearest) % 4) + 4) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, angle);
}

}  // namespace

PhaseTable fourier_phases(std::size_t d) {
  PhaseTable phases(d, std::vector<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      phases[j][k] = 2.0 * std::numbers::pi * static_cast<double>((j * k) % d) /
                     static_cast<double>(d);
    }
  }
  return phases;
}

MeasurementInstrument licc_instrument(std::size_t d, const PhaseTable& phases) {
  if (d < 2) throw DomainError("instrument dimension must be at least 2");
  if (phases.size() != d) throw DimensionError("phase table needs d rows");
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  const auto di = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd vectors(di, di);  // column j is |phi_j>
  for (std::size_t j = 0; j < d; ++j) {
    if (phases[j].size() != d) throw DimensionError("phase table needs d columns");
    for (std::size_t k = 0; k < d; ++k) {
      vectors(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          amp * unit_phase(phases[j][k]);
    }
  }
  const Eigen::MatrixXcd gram = vectors.adjoint() * vectors;
  const double deviation = (gram - Eigen::MatrixXcd::Identity(di, di)).cwiseAbs().maxCoeff();
  if (deviation > 1e-10) {
    throw OrthogonalityError("measurement vectors are not orthonormal (Gram deviation " +
                             std::to_string(deviation) + ")");
  }

  std::vector<ComplexMatrix> ops;
  std::vector<ComplexMatrix> corrections;
  for (std::size_t j = 0; j < d; ++j) {
    ComplexMatrix k = ComplexMatrix::Zero(di, di);
    k.row(static_cast<Eigen::Index>(j)) = vectors.col(static_cast<Eigen::Index>(j)).adjoint();
    ops.push_back(std::move(k));
    ComplexMatrix u = ComplexMatrix::Zero(di, di);
    for (std::size_t m = 0; m < d; ++m) {
      u(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) = unit_phase(phases[j][m]);
    }
    corrections.push_back(std::move(u));
  }
  return MeasurementInstrument{KrausChannel(std::move(ops), {d}), std::move(corrections),
                               phases};
}

MeasurementInstrument licc_instrument(std::size_t d) {
  return licc_instrument(d, fourier_phases(d));
}

namespace {

constexpr int kChannelRetries = 16;

struct ColumnPlan {
  std::vector<std::size_t> targets;  // per operator
  Eigen::VectorXcd weights;          // per operator, unit norm
};

// Unit vector w in C^n_ops, orthogonal to every earlier column's weights
// restricted to the operators where both columns hit the same row.
std::optional<Eigen::VectorXcd> solve_column(const std::vector<ColumnPlan>& done,
                                             const std::vector<std::size_t>& targets,
                                             Rng& rng) {
  const auto n_ops = static_cast<Eigen::Index>(targets.size());
  std::vector<Eigen::VectorXcd> rows;
  for (const auto& prev : done) {
    Eigen::VectorXcd row = Eigen::VectorXcd::Zero(n_ops);
    bool any = false;
    for (Eigen::Index l = 0; l < n_ops; ++l) {
      if (prev.targets[static_cast<std::size_t>(l)] == targets[static_cast<std::size_t>(l)] &&
          std::abs(prev.weights(l)) > 0.0) {
        row(l) = std::conj(prev.weights(l));
        any = true;
      }
    }
    if (any) rows.push_back(std::move(row));
  }

  Eigen::MatrixXcd null_basis;
  if (rows.empty()) {
    null_basis = Eigen::MatrixXcd::Identity(n_ops, n_ops);
  } else {
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows.size()), n_ops);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      a.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
      if (svd.singularValues()(i) > 1e-10) ++rank;
    }
    if (rank >= n_ops) return std::nullopt;
    null_basis = svd.matrixV().rightCols(n_ops - rank);
  }
  Eigen::VectorXcd mix(null_basis.cols());
  for (Eigen::Index i = 0; i < mix.size(); ++i) mix(i) = complex_gaussian(rng);
  Eigen::VectorXcd w = null_basis * mix;
  const double norm = w.norm();
  if (norm < 1e-12) return std::nullopt;
  return Eigen::VectorXcd(w / norm);
}

}  // namespace

KrausChannel random_incoherent_channel(const Dims& dims, std::size_t n_ops, Rng& rng) {
  if (n_ops < 1) throw DomainError("random incoherent channel needs n_ops >= 1");
  const std::size_t n = total_dim(dims);
  std::uniform_int_distribution<std::size_t> pick_row(0, n - 1);

  for (int attempt = 0; attempt < kChannelRetries; ++attempt) {
    std::vector<ColumnPlan> plan;
    plan.reserve(n);
    bool failed = false;
    for (std::size_t c = 0; c < n && !failed; ++c) {
      bool placed = false;
      for (std::size_t tries = 0; tries < std::max<std::size_t>(64, 8 * n); ++tries) {
        std::vector<std::size_t> targets(n_ops);
        for (auto& t : targets) t = pick_row(rng);
        auto w = solve_column(plan, targets, rng);
        if (w) {
          plan.push_back({std::move(targets), std::move(*w)});
          placed = true;
          break;
        }
      }
      failed = !placed;
    }
    if (failed) continue;

    const auto ni = static_cast<Eigen::Index>(n);
    std::vector<ComplexMatrix> ops(n_ops, ComplexMatrix::Zero(ni, ni));
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t l = 0; l < n_ops; ++l) {
        ops[l](static_cast<Eigen::Index>(plan[c].targets[l]), static_cast<Eigen::Index>(c)) =
            plan[c].weights(static_cast<Eigen::Index>(l));
      }
    }
    KrausChannel ch(std::move(ops), dims);
    if (!is_incoherent_kraus(ch).is_incoherent) {
      throw CompletionError("sampled channel failed the incoherence re-check");
    }
    return ch;
  }
  throw CompletionError("could not complete a random incoherent channel with " +
                        std::to_string(n_ops) + " operators on dimension " +
                        std::to_string(n));
}

KrausChannel random_incoherent_channel(std::size_t d_in, std::size_t n_ops,
                                       std::uint64_t seed) {
  Rng rng(seed);
  return random_incoherent_channel(Dims{d_in}, n_ops, rng);
}

ComplexMatrix random_incoherent_unitary(std::size_t d, Rng& rng) {
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const auto di = static_cast<Eigen::Index>(d);
  ComplexMatrix u = ComplexMatrix::Zero(di, di);
  for (std::size_t c = 0; c < d; ++c) {
    u(static_cast<Eigen::Index>(perm[c]), static_cast<Eigen::Index>(c)) = std::polar(1.0, phase(rng));
  }
  return u;
}

}  // namespace cohere
