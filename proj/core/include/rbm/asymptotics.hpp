#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rbm/laplace.hpp"
#include "rbm/model.hpp"

namespace rbm {

enum class TailCase { c1a, c1b, c1c, c1d, c2a, c2b, c2c, c2d };

std::string to_string(TailCase c);

// Rows of the tail-asymptotics table for the boundary density nu1:
// nu1(x) ~ b x^kappa exp(-tau2 x).
struct AsymptoticsClass {
  TailCase case_label = TailCase::c2a;
  double kappa = 0.0;
  double tau2 = 0.0;
  std::optional<double> b;            // only for case 1a, when requested
  std::vector<TailCase> ambiguous;    // both candidate rows when a comparison is within tol
  bool skew_symmetric = false;
};

// Relative positions of p, p', theta2+ and the vertex ordinate, with absent
// p or p' treated as larger than theta2+. Equalities are resolved within tol*scale.
AsymptoticsClass classify(const ModelParams& params, double tol = 1e-8);

// Row selection from the four comparison quantities (nullopt = absent).
TailCase classify_values(std::optional<double> p, std::optional<double> p_prime, double vertex,
                         double theta2_plus, double eq_tol);

// Positive constant b of nu1(x) ~ b exp(-p x) in case 1a. Throws DomainError
// in any other case.
double constant_b_case1a(const ModelParams& params, const LaplaceOptions& options = {});

struct Singularity {
  double location = 0.0;
  bool branch_point = false;  // true when no pole was found before theta2+
};

// Scans phi1 along (0, theta2+) for the first blow-up and refines it.
Singularity nearest_singularity(const ModelParams& params, const LaplaceOptions& options = {});
Singularity nearest_singularity(const StationaryLaplace& laplace);

}  // namespace rbm
