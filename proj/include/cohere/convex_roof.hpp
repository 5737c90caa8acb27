#pragma once

#include <cstdint>
#include <functional>

#include "cohere/states.hpp"

namespace cohere {

/// Search settings for convex-roof minimization over pure-state ensembles.
struct ConvexRoofOptions {
  std::size_t restarts = 200;
  std::size_t refine_steps = 1000;
  std::uint64_t seed = 0xC0FFEE;
};

/// Cost of a normalized pure state.
using PureStateCost = std::function<double(const StateVector&)>;

/// Smallest average cost found over decompositions rho = sum_i p_i |psi_i><psi_i|.
/// Ensembles of size m in [rank, rank^2] are parametrized by m x rank
/// isometries acting on the scaled eigenvectors; each restart starts from a
/// random isometry and is refined by pairwise unitary mixing of ensemble
/// members. The result is an upper bound on the true minimum.
double convex_roof_search(const DensityMatrix& rho, const PureStateCost& cost,
                          const ConvexRoofOptions& options);

}  // namespace cohere
