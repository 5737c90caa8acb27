#include "cohere/convex_roof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cohere {

namespace {

class Ensemble {
public:
  Ensemble(const Eigen::MatrixXcd& scaled_vectors, const PureStateCost& cost)
      : a_(scaled_vectors), cost_(cost) {}

  void reset(Eigen::MatrixXcd isometry) {
    u_ = std::move(isometry);
    terms_.resize(u_.rows());
    for (Eigen::Index i = 0; i < u_.rows(); ++i) terms_(i) = term(u_.row(i));
  }

  double total() const { return terms_.sum(); }
  const Eigen::MatrixXcd& isometry() const { return u_; }

  // Mixes rows i and j by a 2x2 unitary; keeps the change only if the cost drops.
  bool try_mix(Eigen::Index i, Eigen::Index j, const Eigen::Matrix2cd& w) {
    const Eigen::RowVectorXcd ri = w(0, 0) * u_.row(i) + w(0, 1) * u_.row(j);
    const Eigen::RowVectorXcd rj = w(1, 0) * u_.row(i) + w(1, 1) * u_.row(j);
    const double ti = term(ri);
    const double tj = term(rj);
    if (ti + tj < terms_(i) + terms_(j) - 1e-15) {
      u_.row(i) = ri;
      u_.row(j) = rj;
      terms_(i) = ti;
      terms_(j) = tj;
      return true;
    }
    return false;
  }

private:
  double term(const Eigen::RowVectorXcd& row) const {
    const StateVector psi = a_ * row.transpose();
    const double p = psi.squaredNorm();
    if (p < 1e-15) return 0.0;
    return p * cost_(psi / std::sqrt(p));
  }

  const Eigen::MatrixXcd& a_;
  const PureStateCost& cost_;
  Eigen::MatrixXcd u_;
  Eigen::VectorXd terms_;
};

Eigen::MatrixXcd random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const Eigen::MatrixXcd g = ginibre(static_cast<std::size_t>(rows),
                                     static_cast<std::size_t>(cols), rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
}

}  // namespace

double convex_roof_search(const DensityMatrix& rho, const PureStateCost& cost,
                          const ConvexRoofOptions& options) {
  const auto eig = hermitian_eig(rho.matrix());
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > kEigenClampTolerance) ++rank;
  }
  Eigen::MatrixXcd scaled(eig.vectors.rows(), rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    scaled.col(k) = std::sqrt(eig.values(k)) * eig.vectors.col(k);
  }
  // Renormalize the kept weight so clamped eigenvalues do not leak trace.
  scaled /= std::sqrt(scaled.squaredNorm());

  Ensemble ensemble(scaled, cost);
  ensemble.reset(Eigen::MatrixXcd::Identity(rank, rank));
  double best = ensemble.total();
  if (rank <= 1) return best;

  Rng rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto refine = [&](std::size_t steps) {
    const Eigen::Index m = ensemble.isometry().rows();
    std::uniform_int_distribution<Eigen::Index> pick(0, m - 1);
    double step = 0.3;
    int rejected = 0;
    for (std::size_t s = 0; s < steps && step > 1e-6; ++s) {
      const Eigen::Index i = pick(rng);
      Eigen::Index j = pick(rng);
      if (i == j) j = (j + 1) % m;
      const double theta = step * normal(rng);
      const double phi1 = step * normal(rng);
      const double phi2 = step * normal(rng);
      const double c = std::cos(theta), sn = std::sin(theta);
      Eigen::Matrix2cd w;
      w << c, -std::polar(sn, phi1), std::polar(sn, phi2), std::polar(c, phi1 + phi2);
      if (ensemble.try_mix(i, j, w)) {
        rejected = 0;
      } else if (++rejected >= 30) {
        step *= 0.5;
        rejected = 0;
      }
    }
  };

  const Eigen::Index max_extra = rank * rank - rank;
  Eigen::MatrixXcd best_u = ensemble.isometry();
  for (std::size_t restart = 0; restart < options.restarts; ++restart) {
    const Eigen::Index m = rank + static_cast<Eigen::Index>(restart) % (max_extra + 1);
    ensemble.reset(random_isometry(m, rank, rng));
    refine(options.refine_steps);
    if (ensemble.total() < best) {
      best = ensemble.total();
      best_u = ensemble.isometry();
    }
  }
  // Short refinements rank the restarts; the winner gets a long polish.
  ensemble.reset(best_u);
  refine(10 * options.refine_steps);
  best = std::min(best, ensemble.total());
  return best;
}

}  // namespace cohere
