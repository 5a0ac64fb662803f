#include "rbm/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rbm/errors.hpp"

namespace rbm {

std::string to_string(TailCase c) {
  switch (c) {
    case TailCase::c1a:
      return "1a";
    case TailCase::c1b:
      return "1b";
    case TailCase::c1c:
      return "1c";
    case TailCase::c1d:
      return "1d";
    case TailCase::c2a:
      return "2a";
    case TailCase::c2b:
      return "2b";
    case TailCase::c2c:
      return "2c";
    case TailCase::c2d:
      return "2d";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cmp {
  double tol;
  bool eq(double a, double b) const {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= tol;
  }
  bool lt(double a, double b) const { return a < b && !eq(a, b); }
  bool le(double a, double b) const { return a < b || eq(a, b); }
};

}  // namespace

TailCase classify_values(std::optional<double> p, std::optional<double> p_prime, double vertex,
                         double theta2_plus, double eq_tol) {
  const Cmp c{eq_tol};
  const double P = p.value_or(kInf);
  const double Q = p_prime.value_or(kInf);
  const double T = theta2_plus;
  const double V = vertex;
  if (c.lt(P, T) || c.lt(Q, T)) {
    if (c.lt(P, V)) return TailCase::c1a;
    if (c.eq(P, Q)) return TailCase::c1d;
    if (c.lt(P, Q)) return TailCase::c1b;
    return TailCase::c1c;
  }
  const bool pt = c.eq(P, T);
  const bool qt = c.eq(Q, T);
  if (pt && qt) return TailCase::c2d;
  if (pt) return TailCase::c2b;
  if (qt) return TailCase::c2c;
  return TailCase::c2a;
}

AsymptoticsClass classify(const ModelParams& params, double tol) {
  const KernelGeometry g = kernel_geometry(params);
  const double eq_tol = tol * g.scale;
  AsymptoticsClass out;
  out.case_label = classify_values(g.p, g.p_prime, g.theta2_at_t1m, g.theta2_plus, eq_tol);
  const TailCase strict = classify_values(g.p, g.p_prime, g.theta2_at_t1m, g.theta2_plus, 0.0);
  if (strict != out.case_label) out.ambiguous = {out.case_label, strict};
  switch (out.case_label) {
    case TailCase::c1a:
    case TailCase::c1b:
      out.kappa = 0.0;
      out.tau2 = *g.p;
      break;
    case TailCase::c1c:
      out.kappa = 0.0;
      out.tau2 = *g.p_prime;
      break;
    case TailCase::c1d:
      out.kappa = 1.0;
      out.tau2 = *g.p;
      break;
    case TailCase::c2a:
      out.kappa = -1.5;
      out.tau2 = g.theta2_plus;
      break;
    case TailCase::c2b:
    case TailCase::c2c:
      out.kappa = -0.5;
      out.tau2 = g.theta2_plus;
      break;
    case TailCase::c2d:
      out.kappa = 0.0;
      out.tau2 = g.theta2_plus;
      break;
  }
  out.skew_symmetric = is_skew_symmetric(params);
  return out;
}

double constant_b_case1a(const ModelParams& params, const LaplaceOptions& options) {
  const AsymptoticsClass cls = classify(params);
  if (cls.case_label != TailCase::c1a) {
    throw DomainError("the constant b is implemented for case 1a only; this model is case " +
                      to_string(cls.case_label));
  }
  const BoundaryTransform bt(params, options);
  const double p = *bt.geometry().p;
  const GluingMap& gm = bt.gluing();
  const cplx wp = gm.w(p);
  const auto [e, err] = bt.exponent_at(wp);
  const cplx b = bt.nu() * (wp - gm.w0()) / gm.w_prime(p) * std::exp(e);
  if (!(b.real() > 0.0) || std::abs(b.imag()) > 1e-6 * std::abs(b)) {
    throw NumericalError("case 1a constant is not a positive real number");
  }
  return b.real();
}

Singularity nearest_singularity(const ModelParams& params, const LaplaceOptions& options) {
  return nearest_singularity(StationaryLaplace(params, options));
}

Singularity nearest_singularity(const StationaryLaplace& laplace) {
  const double T = laplace.first().geometry().theta2_plus;
  const int n = 400;
  auto inv = [&](double x) {
    const double v = laplace.phi1_any(x).value.real();
    return 1.0 / v;
  };
  double xa = 0.0;
  double fa = 1.0 / laplace.first().nu();
  for (int k = 1; k < n; ++k) {
    const double xb = T * k / n;
    double fb;
    try {
      fb = inv(xb);
    } catch (const PoleError&) {
      return {xb, false};
    }
    if (!(fa > 0.0 && fb > 0.0)) {
      double a = xa, b = xb;
      for (int it = 0; it < 200 && b - a > 1e-14 * T; ++it) {
        const double m = 0.5 * (a + b);
        double fm;
        try {
          fm = inv(m);
        } catch (const PoleError&) {
          return {m, false};
        }
        if (fm > 0.0) {
          a = m;
        } else {
          b = m;
        }
      }
      return {0.5 * (a + b), false};
    }
    xa = xb;
    fa = fb;
  }
  return {T, true};
}

}  // namespace rbm
