#include "rbm/lcp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace rbm {

std::optional<LcpSolution> solve_lcp2(const Eigen::Matrix2d& M, const Eigen::Vector2d& q) {
  const double scale = std::max({std::abs(q(0)), std::abs(q(1)), 1e-300});
  const double slack = -1e-14 * scale;
  auto accept = [&](const Eigen::Vector2d& z) -> std::optional<LcpSolution> {
    const Eigen::Vector2d w = q + M * z;
    if (z(0) < slack || z(1) < slack || w(0) < slack || w(1) < slack) return std::nullopt;
    LcpSolution s;
    s.z = z.cwiseMax(0.0);
    s.w = w.cwiseMax(0.0);
    return s;
  };
  // No constraint active.
  if (auto s = accept(Eigen::Vector2d::Zero())) return s;
  // Only the first constraint active.
  if (M(0, 0) > 0.0) {
    if (auto s = accept(Eigen::Vector2d(-q(0) / M(0, 0), 0.0))) return s;
  }
  // Only the second constraint active.
  if (M(1, 1) > 0.0) {
    if (auto s = accept(Eigen::Vector2d(0.0, -q(1) / M(1, 1)))) return s;
  }
  // Both active.
  const double det = M.determinant();
  if (det != 0.0) {
    const Eigen::Vector2d z(-(M(1, 1) * q(0) - M(0, 1) * q(1)) / det,
                            -(M(0, 0) * q(1) - M(1, 0) * q(0)) / det);
    if (auto s = accept(z)) return s;
  }
  return std::nullopt;
}

}  // namespace rbm
