#pragma once

#include <optional>

#include <Eigen/Core>

namespace rbm {

// Solution of the 2x2 linear complementarity problem
//   w = q + M z,  z >= 0,  w >= 0,  z_i w_i = 0.
struct LcpSolution {
  Eigen::Vector2d z;
  Eigen::Vector2d w;
};

// Enumerates the four complementary bases. For a P-matrix M (every principal
// minor positive) exactly one basis is feasible; nullopt means none was found.
std::optional<LcpSolution> solve_lcp2(const Eigen::Matrix2d& M, const Eigen::Vector2d& q);

}  // namespace rbm
