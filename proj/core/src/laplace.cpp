#include "rbm/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gauss_kronrod.hpp"
#include "rbm/errors.hpp"

namespace rbm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI(0.0, 1.0);

using GK = detail::GaussKronrod15;

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::integral:
      return "integral";
    case Method::continuation:
      return "continuation";
    case Method::closed_form_skew:
      return "closed_form_skew";
    case Method::closed_form_orthogonal:
      return "closed_form_orthogonal";
  }
  return "unknown";
}

BoundaryMasses nu_masses(const ModelParams& p) {
  require_valid(p);
  const double det = p.det_r();
  BoundaryMasses m;
  m.nu1_total = (p.r12 * p.mu2 - p.r22 * p.mu1) / det;
  m.nu2_total = (p.r21 * p.mu1 - p.r11 * p.mu2) / det;
  if (!(m.nu1_total > 0.0 && m.nu2_total > 0.0)) {
    throw NumericalError("boundary masses must be positive under the stationarity conditions");
  }
  return m;
}

// ---------------------------------------------------------------------------
// BoundaryTransform

BoundaryTransform::BoundaryTransform(const ModelParams& params, const LaplaceOptions& options)
    : params_(params),
      options_(options),
      geometry_(kernel_geometry(params)),
      gluing_(params),
      path_(build_path(params, options.path)),
      index_(compute_index(params, path_)),
      nu_(nu_masses(params).nu1_total) {
  if (index_.chi == -1) wp_ = gluing_.w(*geometry_.p);

  const auto& nodes = path_.nodes;
  panels_.reserve(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    Panel pan;
    pan.a = nodes[i].s;
    pan.b = nodes[i + 1].s;
    pan.log_ref = nodes[i].logG;
    pan.G_ref = nodes[i].G;
    const auto xs = GK::points(pan.a, pan.b);
    for (int j = 0; j < 15; ++j) sample(xs[j], pan.log_ref, pan.G_ref, pan.w[j], pan.dw[j], pan.logG[j]);
    panels_.push_back(pan);
  }
  tail_log_ = nodes.back().logG;
  tail_w_ = gluing_.w(nodes.back().theta2);
}

void BoundaryTransform::sample(double s, const cplx& log_ref, const cplx& G_ref, cplx& w, cplx& dw,
                               cplx& logG) const {
  const cplx t2 = hyperbola_point(params_, s);
  w = gluing_.w(t2);
  dw = gluing_.w_prime(t2) * hyperbola_derivative(params_, s);
  const cplx g = G_eval(params_, s);
  logG = cplx(std::log(std::abs(g)), log_ref.imag() + std::arg(g * std::conj(G_ref)));
}

bool BoundaryTransform::in_direct_domain(cplx theta2) const {
  if (!inside_region(params_, theta2)) return false;
  return distance_to_curve(params_, theta2) >= options_.margin * geometry_.scale;
}

std::pair<cplx, double> BoundaryTransform::adaptive(double a, double b, const cplx& log_ref,
                                                    const cplx& G_ref, cplx w2, double tol,
                                                    int depth) const {
  const cplx w0 = gluing_.w0();
  const auto xs = GK::points(a, b);
  const double h = 0.5 * (b - a);
  cplx k = 0.0, g = 0.0;
  for (int j = 0; j < 15; ++j) {
    cplx w, dw, lg;
    sample(xs[j], log_ref, G_ref, w, dw, lg);
    const cplx f = lg * dw * (w2 - w0) / ((w - w2) * (w - w0));
    k += GK::kronrod_weight(j) * f;
    g += GK::gauss_weight(j) * f;
  }
  k *= h;
  g *= h;
  const double err = std::abs(k - g);
  if (err <= tol || depth >= 40) return {k, err};
  const double m = 0.5 * (a + b);
  const auto left = adaptive(a, m, log_ref, G_ref, w2, 0.5 * tol, depth + 1);
  const auto right = adaptive(m, b, log_ref, G_ref, w2, 0.5 * tol, depth + 1);
  return {left.first + right.first, left.second + right.second};
}

std::pair<cplx, double> BoundaryTransform::exponent_at(cplx w2) const {
  const cplx w0 = gluing_.w0();
  if (std::abs(w2 - w0) > 0.1 * std::abs(tail_w_)) {
    throw NumericalError("tail bound not met: |w(theta2) - w(0)| is not small against |w| at the last node");
  }
  const double tol_total = kTwoPi * options_.rel_tol;
  const double tol_panel = tol_total / static_cast<double>(panels_.size());
  cplx sum = 0.0;
  double err = 0.0;
  for (const Panel& pan : panels_) {
    const double h = 0.5 * (pan.b - pan.a);
    cplx k = 0.0, g = 0.0;
    for (int j = 0; j < 15; ++j) {
      const cplx f = pan.logG[j] * pan.dw[j] * (w2 - w0) / ((pan.w[j] - w2) * (pan.w[j] - w0));
      k += GK::kronrod_weight(j) * f;
      g += GK::gauss_weight(j) * f;
    }
    k *= h;
    g *= h;
    const double e = std::abs(k - g);
    if (e <= tol_panel) {
      sum += k;
      err += e;
    } else {
      const auto r = adaptive(pan.a, pan.b, pan.log_ref, pan.G_ref, w2, tol_panel, 0);
      sum += r.first;
      err += r.second;
    }
  }
  // Beyond the last node log G is constant to within the phase tail error, and
  // the bracket integrates exactly to a logarithm.
  const cplx ratio = (tail_w_ - w2) / (tail_w_ - w0);
  sum -= tail_log_ * std::log(ratio);
  err += (path_.phase_tail_error + 1e-16) * 2.0 * std::abs(w2 - w0) / std::abs(tail_w_);
  return {sum / (kTwoPi * kI), err / kTwoPi};
}

LaplaceValue BoundaryTransform::eval(cplx theta2) const {
  const double scale = geometry_.scale;
  if (!inside_region(params_, theta2)) {
    throw DomainError("theta2 lies outside the region bounded by the curve R");
  }
  const double dist = distance_to_curve(params_, theta2);
  if (dist < options_.margin * scale) {
    throw DomainError("theta2 is within " + std::to_string(dist) +
                      " of the curve R; the direct formula requires a distance of at least " +
                      std::to_string(options_.margin * scale));
  }
  if (index_.chi == -1 && std::abs(theta2 - *geometry_.p) <= options_.pole_margin * scale) {
    throw PoleError("theta2 coincides with the pole p = " + std::to_string(*geometry_.p));
  }
  if (index_.tangency_sign == 0 &&
      std::abs(theta2 - geometry_.theta2_at_t1m) <= options_.tangency_pole_margin * scale) {
    throw PoleError("theta2 is too close to the boundary pole at the vertex");
  }
  const cplx w2 = gluing_.w(theta2);
  const auto [e, e_err] = exponent_at(w2);
  cplx pref = 1.0;
  if (index_.chi == -1) pref = (gluing_.w0() - wp_) / (w2 - wp_);
  LaplaceValue out;
  out.value = nu_ * pref * std::exp(e);
  out.abs_error_estimate = std::abs(out.value) * e_err;
  out.method = Method::integral;
  return out;
}

// ---------------------------------------------------------------------------
// StationaryLaplace

StationaryLaplace::StationaryLaplace(const ModelParams& params, const LaplaceOptions& options)
    : params_(params),
      options_(options),
      first_(std::make_shared<BoundaryTransform>(params, options)),
      second_(std::make_shared<BoundaryTransform>(params.swapped(), options)) {}

LaplaceValue StationaryLaplace::any(int which, cplx z, int depth) const {
  const BoundaryTransform& bt = which == 0 ? *first_ : *second_;
  if (bt.in_direct_domain(z)) return bt.eval(z);
  return continuation(which, z, depth);
}

LaplaceValue StationaryLaplace::continuation(int which, cplx z, int depth) const {
  const BoundaryTransform& bt = which == 0 ? *first_ : *second_;
  const ModelParams& m = bt.params();
  const double scale = bt.geometry().scale;
  if (depth >= options_.max_continuation_depth) {
    throw DomainError("continuation chain did not reach the direct domain");
  }
  if (z.real() >= bt.geometry().theta2_plus &&
      std::abs(z.imag()) <= 1e-15 * std::max(scale, std::abs(z))) {
    throw DomainError("evaluation on the branch cut [theta+, inf) is not defined");
  }
  const cplx t = theta1_minus(m, z);
  const cplx g1 = gamma1(m, t, z);
  const cplx g2 = gamma2(m, t, z);
  const double rs = (std::abs(m.r11) + std::abs(m.r21)) * std::max(scale, std::abs(z));
  if (std::abs(g1) <= options_.pole_margin * rs) {
    throw PoleError("continuation hits the pole where gamma1 vanishes on the small branch");
  }
  const LaplaceValue inner = any(1 - which, t, depth + 1);
  const cplx factor = -g2 / g1;
  LaplaceValue out;
  out.value = factor * inner.value;
  out.abs_error_estimate = std::abs(factor) * inner.abs_error_estimate;
  out.method = Method::continuation;
  return out;
}

LaplaceValue StationaryLaplace::phi1_continuation(cplx theta2) const {
  return continuation(0, theta2, 0);
}

LaplaceValue StationaryLaplace::phi2_continuation(cplx theta1) const {
  return continuation(1, theta1, 0);
}

LaplaceValue StationaryLaplace::phi_interior(cplx theta1, cplx theta2) const {
  if (theta1.real() > 0.0 || theta2.real() > 0.0) {
    throw DomainError("phi is evaluated only for Re theta1 <= 0 and Re theta2 <= 0");
  }
  const double scale = first_->geometry().scale;
  const double sig = std::max({params_.sigma11, params_.sigma22, std::abs(params_.sigma12)});
  const double mag = std::max({scale, std::abs(theta1), std::abs(theta2)});
  const cplx g = gamma(params_, theta1, theta2);
  if (std::abs(g) <= 1e-10 * sig * mag * mag) {
    throw DomainError("theta lies on the zero set of the kernel");
  }
  const LaplaceValue f1 = phi1_any(theta2);
  const LaplaceValue f2 = phi2_any(theta1);
  const cplx a = gamma1(params_, theta1, theta2);
  const cplx b = gamma2(params_, theta1, theta2);
  LaplaceValue out;
  out.value = -(a * f1.value + b * f2.value) / g;
  out.abs_error_estimate =
      (std::abs(a) * f1.abs_error_estimate + std::abs(b) * f2.abs_error_estimate) / std::abs(g);
  out.method = (f1.method == Method::integral && f2.method == Method::integral)
                   ? Method::integral
                   : Method::continuation;
  return out;
}

double jump_consistency_upper_limit(const ModelParams& p) {
  const BranchPoints bp = branch_points(p);
  const double top = -(p.sigma12 * bp.theta2_plus + p.mu1) / p.sigma11;
  return std::min(0.0, top);
}

double StationaryLaplace::jump_consistency_residual(double theta1) const {
  const KernelGeometry& g = first_->geometry();
  if (!(theta1 > g.theta1_minus && theta1 < 0.0)) {
    throw DomainError("theta1 must lie in (theta1-, 0)");
  }
  // Past the top of the real ellipse the point (theta1, Theta2+(theta1)) is
  // reached only by going around the branch point theta2+, where the
  // relation involves the second sheet of phi1.
  const double top = jump_consistency_upper_limit(params_);
  if (theta1 > top) {
    throw DomainError("theta1 = " + std::to_string(theta1) +
                      " lies beyond the top of the ellipse (theta1 = " + std::to_string(top) +
                      "); Theta2+(theta1) is then on the second sheet of phi1");
  }
  const BranchPair br = theta2_branches(params_, theta1);
  const double tp = br.plus.real();
  const double tm = br.minus.real();
  const cplx gp2 = gamma2(params_, theta1, tp);
  const cplx gm2 = gamma2(params_, theta1, tm);
  if (std::abs(gp2) < 1e-12 || std::abs(gm2) < 1e-12) {
    throw DomainError("gamma2 vanishes at one of the branch values");
  }
  const cplx lhs = gamma1(params_, theta1, tp) / gp2 * phi1_any(tp).value;
  const cplx rhs = gamma1(params_, theta1, tm) / gm2 * phi1_any(tm).value;
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

LaplaceValue phi1_eval(const ModelParams& params, cplx theta2, const LaplaceOptions& options) {
  return BoundaryTransform(params, options).eval(theta2);
}

LaplaceValue phi2_eval(const ModelParams& params, cplx theta1, const LaplaceOptions& options) {
  return BoundaryTransform(params.swapped(), options).eval(theta1);
}

LaplaceValue phi_interior(const ModelParams& params, cplx theta1, cplx theta2,
                          const LaplaceOptions& options) {
  return StationaryLaplace(params, options).phi_interior(theta1, theta2);
}

LaplaceValue phi1_continuation(const ModelParams& params, cplx theta2, const LaplaceOptions& options) {
  return StationaryLaplace(params, options).phi1_continuation(theta2);
}

double jump_consistency_residual(const ModelParams& params, double theta1,
                                 const LaplaceOptions& options) {
  return StationaryLaplace(params, options).jump_consistency_residual(theta1);
}

// ---------------------------------------------------------------------------
// Closed forms

SkewSymmetricForm skew_symmetric_form(const ModelParams& p, double tol) {
  require_valid(p);
  if (!is_skew_symmetric(p, tol)) throw DomainError("parameters are not skew-symmetric");
  const double det = p.det_r();
  SkewSymmetricForm f;
  f.alpha1 = 2.0 * p.r11 * (p.r12 * p.mu2 - p.r22 * p.mu1) / (p.sigma11 * det);
  f.alpha2 = 2.0 * p.r22 * (p.r21 * p.mu1 - p.r11 * p.mu2) / (p.sigma22 * det);
  f.c1 = p.sigma11 * f.alpha1 * f.alpha2 / (2.0 * p.r11);
  f.c2 = p.sigma22 * f.alpha1 * f.alpha2 / (2.0 * p.r22);
  return f;
}

LaplaceValue closed_form_skew(const ModelParams& p, cplx theta2, double tol) {
  const SkewSymmetricForm f = skew_symmetric_form(p, tol);
  if (theta2 == cplx(f.alpha2, 0.0)) throw PoleError("theta2 is the pole alpha2");
  return {f.c1 / (f.alpha2 - theta2), 0.0, Method::closed_form_skew};
}

cplx closed_form_skew_interior(const ModelParams& p, cplx theta1, cplx theta2, double tol) {
  const SkewSymmetricForm f = skew_symmetric_form(p, tol);
  return f.alpha1 * f.alpha2 / ((f.alpha1 - theta1) * (f.alpha2 - theta2));
}

double density_skew(const ModelParams& p, double x1, double x2, double tol) {
  const SkewSymmetricForm f = skew_symmetric_form(p, tol);
  if (x1 < 0.0 || x2 < 0.0) return 0.0;
  return f.alpha1 * f.alpha2 * std::exp(-f.alpha1 * x1 - f.alpha2 * x2);
}

LaplaceValue closed_form_orthogonal(const ModelParams& p, cplx theta2) {
  require_valid(p);
  if (std::abs(p.r11 - 1.0) > 1e-12 || std::abs(p.r22 - 1.0) > 1e-12 || std::abs(p.r12) > 1e-12 ||
      std::abs(p.r21) > 1e-12) {
    throw DomainError("the orthogonal-reflection closed form requires R = I");
  }
  const GluingMap gm(p);
  const double scale = geometry_scale(p);
  LaplaceValue out;
  out.method = Method::closed_form_orthogonal;
  if (std::abs(theta2) <= 1e-12 * scale) {
    out.value = -p.mu1;
    return out;
  }
  const cplx wp0 = gm.w_prime(0.0);
  out.value = -p.mu1 * wp0 * theta2 / (gm.w(theta2) - gm.w0());
  return out;
}

}  // namespace rbm
