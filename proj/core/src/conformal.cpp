#include "rbm/conformal.hpp"

#include <cmath>
#include <numbers>

#include "rbm/errors.hpp"

namespace rbm {

namespace {

bool is_integer(double a) { return std::abs(a - std::round(a)) <= 1e-12 * std::max(1.0, a); }

bool on_cut(double a, cplx x) {
  if (is_integer(a)) return false;
  return x.real() < -1.0 && std::abs(x.imag()) <= 1e-15 * std::abs(x);
}

cplx base_point(cplx x) { return x + std::sqrt(x - 1.0) * std::sqrt(x + 1.0); }

}  // namespace

cplx chebyshev_T(double a, cplx x) {
  if (on_cut(a, x)) {
    throw DomainError("T_a evaluated on its cut (-inf, -1); use one-sided limits");
  }
  const cplx lz = std::log(base_point(x));
  return 0.5 * (std::exp(a * lz) + std::exp(-a * lz));
}

cplx chebyshev_T_prime(double a, cplx x) {
  if (on_cut(a, x)) {
    throw DomainError("T_a' evaluated on its cut (-inf, -1); use one-sided limits");
  }
  const cplx d = x - 1.0;
  if (std::abs(d) < 1e-7) {
    // Taylor expansion at x = 1, where the closed form is 0/0.
    return a * a + a * a * (a * a - 1.0) / 3.0 * d;
  }
  const cplx e = x + 1.0;
  if (std::abs(e) < 1e-7 && is_integer(a)) {
    const double sgn = (static_cast<long>(std::round(a)) % 2 == 0) ? -1.0 : 1.0;
    return sgn * (a * a - a * a * (a * a - 1.0) / 3.0 * e);
  }
  const cplx root = std::sqrt(d) * std::sqrt(e);
  const cplx lz = std::log(x + root);
  return 0.5 * a * (std::exp(a * lz) - std::exp(-a * lz)) / root;
}

double chebyshev_T_trig(double a, double x) {
  if (x < -1.0 || x > 1.0) throw DomainError("trigonometric form requires x in [-1, 1]");
  return std::cos(a * std::acos(x));
}

cplx chebyshev_T_recurrence(int n, cplx x) {
  if (n < 0) throw DomainError("Chebyshev degree must be non-negative");
  if (n == 0) return 1.0;
  cplx prev = 1.0;
  cplx cur = x;
  for (int k = 1; k < n; ++k) {
    const cplx next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

GluingMap::GluingMap(const ModelParams& params) {
  const KernelGeometry g = kernel_geometry(params);
  beta_ = g.beta;
  a_ = std::numbers::pi / beta_;
  t2m_ = g.theta2_minus;
  t2p_ = g.theta2_plus;
  vertex_ = g.theta2_at_t1m;
  q_ = g.q;
  scale_ = g.scale;
  integer_exponent_ = is_integer(a_);
  w0_ = w(0.0);
  wq_ = w(q_);
}

cplx GluingMap::x_of(cplx theta2) const { return -(2.0 * theta2 - (t2p_ + t2m_)) / (t2p_ - t2m_); }

void GluingMap::check_cut(cplx theta2) const {
  if (integer_exponent_) return;
  if (theta2.real() > t2p_ && std::abs(theta2.imag()) <= 1e-15 * std::max(scale_, std::abs(theta2))) {
    throw DomainError("w evaluated on its cut (theta2+, inf)");
  }
}

cplx GluingMap::w(cplx theta2) const {
  check_cut(theta2);
  return chebyshev_T(a_, x_of(theta2));
}

cplx GluingMap::w_prime(cplx theta2) const {
  check_cut(theta2);
  return chebyshev_T_prime(a_, x_of(theta2)) * (-2.0 / (t2p_ - t2m_));
}

cplx GluingMap::W(cplx theta2) const {
  const cplx wv = w(theta2);
  const cplx den = wv - wq_;
  if (std::abs(den) <= 1e-14 * std::max(1.0, std::abs(wq_))) {
    throw PoleError("W has a pole at theta2 = q");
  }
  return (wv + 1.0) / den;
}

cplx w_eval(const ModelParams& params, cplx theta2) { return GluingMap(params).w(theta2); }

cplx w_prime(const ModelParams& params, cplx theta2) { return GluingMap(params).w_prime(theta2); }

cplx W_eval(const ModelParams& params, cplx theta2) { return GluingMap(params).W(theta2); }

}  // namespace rbm
