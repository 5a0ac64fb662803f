#pragma once

#include <complex>
#include <optional>

#include "rbm/model.hpp"

namespace rbm {

using cplx = std::complex<double>;

// Kernel gamma(theta) = 1/2 theta.Sigma.theta + mu.theta and the boundary
// polynomials gamma1(theta) = R^1.theta, gamma2(theta) = R^2.theta.
cplx gamma(const ModelParams& p, cplx theta1, cplx theta2);
cplx gamma1(const ModelParams& p, cplx theta1, cplx theta2);
cplx gamma2(const ModelParams& p, cplx theta1, cplx theta2);

struct BranchPair {
  cplx minus;
  cplx plus;
};

// Roots in theta1 of gamma(., theta2) = 0. The minus branch uses the principal
// square root of the discriminant; it is the small branch (value 0 at theta2 = 0)
// and is analytic off the real rays (-inf, theta2-] and [theta2+, inf).
BranchPair theta1_branches(const ModelParams& p, cplx theta2);
// Roots in theta2 of gamma(theta1, .) = 0, same conventions with indices swapped.
BranchPair theta2_branches(const ModelParams& p, cplx theta1);

cplx theta1_minus(const ModelParams& p, cplx theta2);
cplx theta2_minus(const ModelParams& p, cplx theta1);

struct BranchPoints {
  double theta1_minus = 0.0;
  double theta1_plus = 0.0;
  double theta2_minus = 0.0;
  double theta2_plus = 0.0;
};

BranchPoints branch_points(const ModelParams& p);

// Characteristic length of the problem in the theta variables:
// the largest branch point magnitude.
double geometry_scale(const ModelParams& p);

// Ordinate of the double root at theta1 = theta1-, via the cosine identity.
double tangency_ordinate(const ModelParams& p);
// Same ordinate via -(sigma12 theta1- + mu2) / sigma22.
double tangency_ordinate_direct(const ModelParams& p);

// gamma1(theta1-, tangency ordinate).
double tangency_value(const ModelParams& p);
// Sign of tangency_value with a zero band of tol * scale.
int tangency_sign(const ModelParams& p, double tol = 1e-9);

// Nonzero root of gamma restricted to the line gamma1 = 0, whether or not it
// lies on the Theta1- branch.
double p_candidate(const ModelParams& p);
std::optional<double> compute_p(const ModelParams& p);
std::optional<double> compute_p_prime(const ModelParams& p);
double compute_q(const ModelParams& p);

struct KernelGeometry {
  double theta1_minus = 0.0;
  double theta1_plus = 0.0;
  double theta2_minus = 0.0;
  double theta2_plus = 0.0;
  double beta = 0.0;
  double theta2_at_t1m = 0.0;
  std::optional<double> p;
  bool p_exists = false;
  std::optional<double> p_prime;
  double q = 0.0;
  int gamma1_tangency_sign = 0;
  double scale = 1.0;
};

KernelGeometry kernel_geometry(const ModelParams& p, double tangency_tol = 1e-9);

}  // namespace rbm
