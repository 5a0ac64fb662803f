#include "rbm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rbm/errors.hpp"

namespace rbm {

cplx gamma(const ModelParams& p, cplx t1, cplx t2) {
  return 0.5 * (p.sigma11 * t1 * t1 + 2.0 * p.sigma12 * t1 * t2 + p.sigma22 * t2 * t2) + p.mu1 * t1 +
         p.mu2 * t2;
}

cplx gamma1(const ModelParams& p, cplx t1, cplx t2) { return p.r11 * t1 + p.r21 * t2; }

cplx gamma2(const ModelParams& p, cplx t1, cplx t2) { return p.r12 * t1 + p.r22 * t2; }

BranchPair theta1_branches(const ModelParams& p, cplx t2) {
  const cplx b = p.sigma12 * t2 + p.mu1;
  const cplx disc = b * b - p.sigma11 * (p.sigma22 * t2 * t2 + 2.0 * p.mu2 * t2);
  const cplx root = std::sqrt(disc);
  return {(-b - root) / p.sigma11, (-b + root) / p.sigma11};
}

BranchPair theta2_branches(const ModelParams& p, cplx t1) {
  return theta1_branches(p.swapped(), t1);
}

cplx theta1_minus(const ModelParams& p, cplx t2) { return theta1_branches(p, t2).minus; }

cplx theta2_minus(const ModelParams& p, cplx t1) { return theta2_branches(p, t1).minus; }

namespace {

// Roots of det*x^2 - 2c*x - m^2 = 0 (one negative, one positive), computed
// without cancellation.
std::pair<double, double> opposite_roots(double c, double m, double det) {
  const double s = std::sqrt(c * c + m * m * det);
  if (c >= 0.0) {
    const double plus = (c + s) / det;
    return {-m * m / (c + s), plus};
  }
  const double minus = (c - s) / det;
  return {minus, -m * m / (c - s)};
}

}  // namespace

BranchPoints branch_points(const ModelParams& p) {
  const double det = p.det_sigma();
  BranchPoints bp;
  const auto t2 = opposite_roots(p.mu1 * p.sigma12 - p.mu2 * p.sigma11, p.mu1, det);
  const auto t1 = opposite_roots(p.mu2 * p.sigma12 - p.mu1 * p.sigma22, p.mu2, det);
  bp.theta2_minus = t2.first;
  bp.theta2_plus = t2.second;
  bp.theta1_minus = t1.first;
  bp.theta1_plus = t1.second;
  return bp;
}

double geometry_scale(const ModelParams& p) {
  const BranchPoints bp = branch_points(p);
  return std::max({std::abs(bp.theta1_minus), bp.theta1_plus, std::abs(bp.theta2_minus),
                   bp.theta2_plus});
}

double tangency_ordinate(const ModelParams& p) {
  const BranchPoints bp = branch_points(p);
  const double cb = -p.sigma12 / std::sqrt(p.sigma11 * p.sigma22);
  return 0.5 * (bp.theta2_plus + bp.theta2_minus) - 0.5 * (bp.theta2_plus - bp.theta2_minus) * cb;
}

double tangency_ordinate_direct(const ModelParams& p) {
  const BranchPoints bp = branch_points(p);
  return -(p.sigma12 * bp.theta1_minus + p.mu2) / p.sigma22;
}

double tangency_value(const ModelParams& p) {
  const BranchPoints bp = branch_points(p);
  return p.r11 * bp.theta1_minus + p.r21 * tangency_ordinate(p);
}

int tangency_sign(const ModelParams& p, double tol) {
  const double v = tangency_value(p);
  const double band = tol * geometry_scale(p) * (std::abs(p.r11) + std::abs(p.r21));
  if (std::abs(v) <= band) return 0;
  return v > 0.0 ? 1 : -1;
}

double p_candidate(const ModelParams& p) {
  const double num = 2.0 * p.r11 * (p.mu1 * p.r21 - p.mu2 * p.r11);
  const double den = p.r11 * p.r11 * p.sigma22 - 2.0 * p.r11 * p.r21 * p.sigma12 +
                     p.r21 * p.r21 * p.sigma11;
  return num / den;
}

namespace {

// gamma1 at the top of the ellipse, where the two theta1 branches coincide.
double gamma1_at_top(const ModelParams& p) {
  const BranchPoints bp = branch_points(p);
  const double t1 = -(p.sigma12 * bp.theta2_plus + p.mu1) / p.sigma11;
  return p.r11 * t1 + p.r21 * bp.theta2_plus;
}

}  // namespace

std::optional<double> compute_p(const ModelParams& p) {
  require_valid(p);
  const double scale = geometry_scale(p);
  const double rscale = std::abs(p.r11) + std::abs(p.r21);
  if (gamma1_at_top(p) < -1e-12 * scale * rscale) return std::nullopt;
  const BranchPoints bp = branch_points(p);
  const double cand = std::min(p_candidate(p), bp.theta2_plus);
  const double resid = std::abs(gamma1(p, theta1_minus(p, cand), cand));
  if (resid > 1e-9 * scale * rscale && std::abs(cand - bp.theta2_plus) > 1e-6 * scale) {
    throw NumericalError("p failed its defining-equation check (residual " + std::to_string(resid) +
                         ")");
  }
  return cand;
}

std::optional<double> compute_p_prime(const ModelParams& p) {
  require_valid(p);
  const BranchPoints bp = branch_points(p);
  const double scale = geometry_scale(p);
  const double rscale = std::abs(p.r12) + std::abs(p.r22);
  const double top_t1 = -(p.sigma12 * bp.theta2_plus + p.mu1) / p.sigma11;

  auto on_minus_branch = [&](double r) {
    return std::abs(gamma2(p, r, theta2_minus(p, r))) <= 1e-9 * scale * rscale;
  };

  // Closed form: the nonzero root of gamma on the line gamma2 = 0 (the swapped
  // construction of p), accepted when it sits on the Theta2- branch.
  const ModelParams s = p.swapped();
  const double r = std::min(p_candidate(s), bp.theta1_plus);
  const bool swapped_exists = gamma1_at_top(s) >= -1e-12 * scale * rscale;
  std::optional<double> root;
  if (swapped_exists && on_minus_branch(r)) {
    root = r;
  } else if (swapped_exists && std::abs(r - bp.theta1_plus) > 1e-6 * scale) {
    // Closed form did not verify: bracketed search for a nonzero root of
    // r -> gamma2(r, Theta2-(r)) on the real interval where Theta2- is real.
    const int n = 4000;
    const double lo = bp.theta1_minus;
    const double hi = bp.theta1_plus;
    auto f = [&](double x) { return std::real(gamma2(p, x, theta2_minus(p, x))); };
    double xa = lo, fa = f(lo);
    for (int i = 1; i <= n && !root; ++i) {
      const double xb = lo + (hi - lo) * i / n;
      const double fb = f(xb);
      const bool excludes_zero = xa > 1e-9 * scale || xb < -1e-9 * scale;
      if (excludes_zero && fa * fb <= 0.0) {
        double a = xa, b = xb, va = fa;
        for (int k = 0; k < 200 && b - a > 1e-15 * scale; ++k) {
          const double m = 0.5 * (a + b);
          const double vm = f(m);
          if (va * vm <= 0.0) {
            b = m;
          } else {
            a = m;
            va = vm;
          }
        }
        root = 0.5 * (a + b);
      }
      xa = xb;
      fa = fb;
    }
  }
  if (!root) return std::nullopt;
  if (*root > top_t1 + 1e-12 * scale) return std::nullopt;
  const double pp = std::real(theta2_branches(p, *root).plus);
  const double resid = std::abs(gamma(p, *root, pp));
  if (resid > 1e-9 * scale * scale * std::max(p.sigma11, p.sigma22)) {
    throw NumericalError("p' failed its defining-equation check");
  }
  return pp;
}

double compute_q(const ModelParams& p) {
  require_valid(p);
  if (tangency_sign(p) > 0) {
    const auto pp = compute_p(p);
    if (!pp) throw NumericalError("positive tangency sign without a pole p");
    return *pp;
  }
  return 0.5 * tangency_ordinate(p);
}

KernelGeometry kernel_geometry(const ModelParams& p, double tangency_tol) {
  require_valid(p);
  KernelGeometry g;
  const BranchPoints bp = branch_points(p);
  g.theta1_minus = bp.theta1_minus;
  g.theta1_plus = bp.theta1_plus;
  g.theta2_minus = bp.theta2_minus;
  g.theta2_plus = bp.theta2_plus;
  g.beta = opening_angle(p);
  g.theta2_at_t1m = tangency_ordinate(p);
  g.p = compute_p(p);
  g.p_exists = g.p.has_value();
  g.p_prime = compute_p_prime(p);
  g.gamma1_tangency_sign = tangency_sign(p, tangency_tol);
  if (g.gamma1_tangency_sign > 0) {
    if (!g.p) throw NumericalError("positive tangency sign without a pole p");
    g.q = *g.p;
  } else {
    g.q = 0.5 * g.theta2_at_t1m;
  }
  g.scale = geometry_scale(p);
  return g;
}

}  // namespace rbm
