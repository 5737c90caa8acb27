#pragma once

#include <string>
#include <vector>

#include "cohere/states.hpp"

namespace cohere {

/// Depolarized single qubit alpha|0> + beta|1> and its tripartite MCS
/// counterpart, with closed forms next to the numerical pipeline values.
struct DynamicsPoint {
  double alpha = 0.0;
  double p = 0.0;
  // closed forms
  double c_d = 0.0;
  double c_f = 0.0;
  double tau_med_ub = 0.0;
  double tau_mef_lb = 0.0;
  double zeta = 0.0;
  double omega = 1.0;  // 1 + zeta/4
  // depolarize -> measures
  double c_d_num = 0.0;
  double c_f_num = 0.0;
  double tau_med_ub_num = 0.0;
  double tau_mef_lb_num = 0.0;
  double omega_num = 1.0;  // trace norm of the A-partial transpose
  bool esd = false;

  /// Largest |closed form - numerical| over the populated pairs.
  double max_discrepancy() const;
};

/// Throws DomainError unless alpha, p lie in [0, 1].
DynamicsPoint point(double alpha, double p);

struct EsdLine {
  double formula;    // s / (1 + s), s = 8 alpha sqrt(1 - alpha^2)
  double bisection;  // root of s(1 - p) - p on [0, 1]
};

EsdLine esd_probability(double alpha);

/// `steps` evenly spaced values over [0, 1], endpoints included. steps = 1
/// gives {0}. Throws ConfigError for zero steps.
std::vector<double> unit_grid(std::size_t steps);

/// Points in (alpha, p) lexicographic order. Throws ConfigError for empty
/// grids or values outside [0, 1].
std::vector<DynamicsPoint> sweep(const std::vector<double>& alpha_grid,
                                 const std::vector<double>& p_grid, std::size_t threads = 0);

/// Header line plus one row per point; floats use 12 significant digits.
std::string sweep_csv(const std::vector<DynamicsPoint>& points);

}  // namespace cohere
