#pragma once

#include <complex>
#include <vector>

#include "rbm/kernel.hpp"
#include "rbm/model.hpp"

namespace rbm {

// Lower half of the hyperbola branch R, parametrized by s >= 0 through
// theta1 = theta1- - s^2. The map s -> theta2 is smooth at the vertex.
cplx hyperbola_point(const ModelParams& p, double s);
cplx hyperbola_derivative(const ModelParams& p, double s);

// Left-hand side minus right-hand side of the hyperbola equation at z,
// normalized by the magnitude of the individual terms.
double hyperbola_residual(const ModelParams& p, cplx z);

// Jump function on R^- at the node of parameter s (|G| = 1).
// Throws PoleError at s = 0 when gamma1 vanishes at the vertex.
cplx G_eval(const ModelParams& p, double s);

// Natural length of the s parameter: sqrt(theta1+ - theta1-).
double s_unit(const ModelParams& p);

struct PathNode {
  double s = 0.0;
  double theta1 = 0.0;  // theta1- - s^2
  cplx theta2;
  cplx dtheta2_ds;
  cplx G;
  cplx logG;  // continuous determination along the path
};

struct HyperbolaPath {
  std::vector<PathNode> nodes;
  double delta = 0.0;             // Im logG at the vertex, 0 or pi
  double s_unit = 1.0;
  double growth = 1.25;           // ratio between consecutive major nodes in the far field
  double phase_tail_error = 0.0;  // estimate of |Im logG(inf) - Im logG(S)|
  double phase_limit = 0.0;       // extrapolated Im logG(inf)
  std::size_t previous_major = 0; // index of the major node preceding the last node
};

struct PathOptions {
  double tol = 1e-10;          // target for the phase tail error
  double s_max = 0.0;          // 0 selects 1e8 * s_unit
  double far_field = 1e6;      // required |theta2(S)| / scale at the last node
  double max_phase_step = 0.39269908169872414;  // pi / 8
  int near_nodes = 16;         // uniform nodes on (0, s_unit]
};

// Throws NumericalError when the tail bound cannot be met before s_max.
HyperbolaPath build_path(const ModelParams& p, const PathOptions& options = {});

struct IndexData {
  double delta = 0.0;
  double Delta = 0.0;
  int chi = 0;
  double Delta_from_formula = 0.0;
  double Delta_from_tracking = 0.0;
  int tangency_sign = 0;
};

// Throws NumericalError when the tracked and closed-form values disagree.
IndexData compute_index(const ModelParams& p);
IndexData compute_index(const ModelParams& p, const HyperbolaPath& path);

// Closed-form value of delta + Delta modulo 2 pi: -2 arg(E + i N) with
// N = det R sqrt(det Sigma) and
// E = sigma22 r11 r12 + sigma11 r22 r21 - sigma12 (r11 r22 + r12 r21).
double index_angle_formula(const ModelParams& p);

// Abscissa of R at ordinate y (R is a graph over the imaginary axis).
double curve_abscissa(const ModelParams& p, double y);
// True when z lies in the open domain bounded by R that contains 0.
bool inside_region(const ModelParams& p, cplx z);
// Euclidean distance from z to R.
double distance_to_curve(const ModelParams& p, cplx z);

}  // namespace rbm
