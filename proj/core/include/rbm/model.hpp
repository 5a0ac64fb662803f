#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rbm {

// Parameters (Sigma, mu, R) of a reflected Brownian motion in the quadrant.
// The reflection vectors are the columns of R: R^1 = (r11, r21), R^2 = (r12, r22).
struct ModelParams {
  double sigma11 = 1.0;
  double sigma12 = 0.0;
  double sigma22 = 1.0;
  double mu1 = -1.0;
  double mu2 = -1.0;
  double r11 = 1.0;
  double r12 = 0.0;
  double r21 = 0.0;
  double r22 = 1.0;

  double det_sigma() const { return sigma11 * sigma22 - sigma12 * sigma12; }
  double det_r() const { return r11 * r22 - r12 * r21; }

  Eigen::Matrix2d sigma() const;
  Eigen::Vector2d mu() const;
  Eigen::Matrix2d reflection() const;

  // Exchange of the roles of the two coordinates:
  // sigma11<->sigma22, mu1<->mu2, r11<->r22, r12<->r21.
  ModelParams swapped() const;

  static ModelParams from_matrices(const Eigen::Matrix2d& sigma, const Eigen::Vector2d& mu,
                                   const Eigen::Matrix2d& reflection);
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;  // the quantity whose sign was tested
};

struct ValidationReport {
  std::vector<Check> checks;
  bool ok() const;
  std::vector<std::string> failures() const;
  std::string summary() const;
};

// Evaluates every condition and reports all of them (never fails fast).
// Throws InvalidParams when an entry is not finite.
ValidationReport validate(const ModelParams& params);

// Throws InvalidParams listing every failed condition.
void require_valid(const ModelParams& params);

// Opening angle arccos(-sigma12 / sqrt(sigma11 sigma22)), in (0, pi).
double opening_angle(const ModelParams& params);

struct WedgeAngles {
  double beta = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
};

// Reflection angles measured as in the wedge picture: delta is the angle of
// the reflection vector on the edge {x2 = 0} with that edge, epsilon the angle
// of the reflection vector on the other edge with that edge. Both in (0, pi).
WedgeAngles quadrant_to_wedge(const ModelParams& params);

// Reflected Brownian motion in the wedge {arg x in [0, beta]}.
struct WedgeParams {
  double beta = 1.5707963267948966;
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Identity();
  Eigen::Vector2d mu = Eigen::Vector2d(-1.0, -1.0);
  Eigen::Matrix2d reflection = Eigen::Matrix2d::Identity();
};

// T1 and its inverse for a wedge of angle beta. Throws DomainError unless
// beta is in (0, pi).
Eigen::Matrix2d wedge_t1(double beta);
Eigen::Matrix2d wedge_t1_inverse(double beta);

// Quadrant parameters (T1^{-1} Sigma~ T1^{-T}, T1^{-1} mu~, T1^{-1} R~).
ModelParams wedge_to_quadrant(const WedgeParams& wedge);

// Full map sending the quadrant process to an identity-covariance process in
// the wedge of angle beta: x~ = T x with T = T1 diag(1/sqrt(sigma11), 1/sqrt(sigma22)).
Eigen::Matrix2d quadrant_map(const ModelParams& params);
WedgeParams quadrant_to_wedge_params(const ModelParams& params);

// Reflection angles read off the geometry of a wedge parameter set with
// identity covariance.
WedgeAngles wedge_angles(const WedgeParams& wedge);

// Identity-covariance wedge process whose reflection vectors make the angles
// delta and epsilon with their edges (each vector has unit inward normal component).
WedgeParams wedge_from_angles(double beta, double delta, double epsilon, const Eigen::Vector2d& mu);

// |2 sigma12 - (r21/r11) sigma11 - (r12/r22) sigma22| <= tol * scale.
bool is_skew_symmetric(const ModelParams& params, double tol = 1e-9);

struct DiekerMoriartyResult {
  bool is_sum_of_exponentials = false;
  std::optional<int> n;  // the non-positive integer (eps + delta - pi) / beta
  double ratio = 0.0;
};

DiekerMoriartyResult dieker_moriarty(const ModelParams& params, double tol = 1e-9);

}  // namespace rbm
