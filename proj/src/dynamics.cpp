#include "cohere/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cohere/channels.hpp"
#include "cohere/measures.hpp"
#include "cohere/parallel.hpp"

namespace cohere {

namespace {

void check_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
  }
}

double h(double x) { return binary_entropy(std::clamp(x, 0.0, 1.0)); }

}  // namespace

double DynamicsPoint::max_discrepancy() const {
  return std::max({std::abs(c_d - c_d_num), std::abs(c_f - c_f_num),
                   std::abs(tau_med_ub - tau_med_ub_num), std::abs(tau_mef_lb - tau_mef_lb_num),
                   std::abs(omega - omega_num)});
}

DynamicsPoint point(double alpha, double p) {
  check_unit(alpha, "alpha");
  check_unit(p, "p");
  DynamicsPoint pt;
  pt.alpha = alpha;
  pt.p = p;
  const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));

  const double x1 = (1.0 - p) * alpha * alpha + p / 2.0;
  const double x2 = 2.0 * (1.0 - p) * alpha * beta;
  pt.c_d = std::max(0.0, h(x1) - h(p / 2.0));
  pt.c_f = h((1.0 + std::sqrt(std::max(0.0, 1.0 - x2 * x2))) / 2.0);
  pt.zeta = std::max(0.0, 8.0 * (1.0 - p) * alpha * beta - p);
  pt.omega = 1.0 + pt.zeta / 4.0;
  pt.tau_med_ub = std::log2(pt.omega);

  StateVector psi(2);
  psi << alpha, beta;
  const auto rho_a = from_pure(psi, {2});
  const auto noisy_a = depolarize(rho_a, p);
  pt.c_d_num = c_d(noisy_a).value;
  pt.c_f_num = c_f(noisy_a).value;

  const auto noisy_abc = depolarize(mcs_from_density(rho_a, 3), p);
  const auto pt_a = partial_transpose(noisy_abc.matrix(), noisy_abc.dims(), std::size_t{0});
  pt.omega_num = std::clamp(trace_norm(pt_a), 1.0, 2.0);
  const double root = std::sqrt(pt.omega) + std::sqrt(2.0 - pt.omega);
  pt.tau_mef_lb = h(root * root / 4.0);
  pt.tau_med_ub_num = tau_med_ub(noisy_abc).value;
  pt.tau_mef_lb_num = tau_mef_lb(noisy_abc).value;
  pt.esd = pt.tau_med_ub <= 1e-12;
  return pt;
}

EsdLine esd_probability(double alpha) {
  check_unit(alpha, "alpha");
  const double s = 8.0 * alpha * std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  EsdLine line{s / (1.0 + s), 0.0};
  double lo = 0.0, hi = 1.0;
  if (s > 0.0) {
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (s * (1.0 - mid) - mid > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    line.bisection = 0.5 * (lo + hi);
  }
  return line;
}

std::vector<double> unit_grid(std::size_t steps) {
  if (steps == 0) throw ConfigError("grid needs at least one step");
  if (steps == 1) return {0.0};
  std::vector<double> grid(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return grid;
}

std::vector<DynamicsPoint> sweep(const std::vector<double>& alpha_grid,
                                 const std::vector<double>& p_grid, std::size_t threads) {
  if (alpha_grid.empty() || p_grid.empty()) throw ConfigError("sweep grids must be nonempty");
  for (const auto* grid : {&alpha_grid, &p_grid}) {
    for (double x : *grid) {
      if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("sweep grid values must lie in [0, 1]");
    }
  }
  const std::size_t np = p_grid.size();
  std::vector<DynamicsPoint> points(alpha_grid.size() * np);
  parallel_for(points.size(), threads, [&](std::size_t i) {
    points[i] = point(alpha_grid[i / np], p_grid[i % np]);
  });
  return points;
}

std::string sweep_csv(const std::vector<DynamicsPoint>& points) {
  std::ostringstream out;
  out << "alpha,p,c_d,c_f,tau_med_ub,tau_mef_lb,esd\n";
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf);
  };
  for (const auto& pt : points) {
    out << num(pt.alpha) << ',' << num(pt.p) << ',' << num(pt.c_d) << ',' << num(pt.c_f) << ','
        << num(pt.tau_med_ub) << ',' << num(pt.tau_mef_lb) << ',' << (pt.esd ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace cohere
