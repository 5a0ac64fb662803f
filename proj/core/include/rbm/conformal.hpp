#pragma once

#include <complex>

#include "rbm/kernel.hpp"
#include "rbm/model.hpp"

namespace rbm {

// Generalized Chebyshev function T_a(x) = 1/2 [(x + sqrt(x^2-1))^a + (x - sqrt(x^2-1))^a],
// with sqrt(x^2-1) = sqrt(x-1) sqrt(x+1) (asymptotic to x at infinity) and
// principal powers. Analytic off the ray (-inf, -1]; for non-integer a, a point
// on that ray throws DomainError.
cplx chebyshev_T(double a, cplx x);
// Derivative dT_a/dx, same domain.
cplx chebyshev_T_prime(double a, cplx x);
// cos(a arccos x) for real x in [-1, 1].
double chebyshev_T_trig(double a, double x);
// Classical three-term recurrence for integer degree n >= 0.
cplx chebyshev_T_recurrence(int n, cplx x);

// The gluing map w(theta2) = T_{pi/beta}(-(2 theta2 - (theta2+ + theta2-)) / (theta2+ - theta2-))
// and its normalization W = (w + 1) / (w - w(q)).
class GluingMap {
 public:
  explicit GluingMap(const ModelParams& params);

  double beta() const { return beta_; }
  double exponent() const { return a_; }
  double q() const { return q_; }
  double vertex() const { return vertex_; }
  double theta2_plus() const { return t2p_; }
  double theta2_minus() const { return t2m_; }
  cplx w0() const { return w0_; }
  cplx wq() const { return wq_; }

  // Affine coordinate x(theta2) fed to T_a.
  cplx x_of(cplx theta2) const;

  // Throws DomainError on the cut (theta2+, inf) unless the exponent is an integer.
  cplx w(cplx theta2) const;
  cplx w_prime(cplx theta2) const;
  // Throws PoleError at theta2 = q.
  cplx W(cplx theta2) const;

 private:
  void check_cut(cplx theta2) const;

  double beta_;
  double a_;
  double t2m_;
  double t2p_;
  double vertex_;
  double q_;
  double scale_;
  bool integer_exponent_;
  cplx w0_;
  cplx wq_;
};

cplx w_eval(const ModelParams& params, cplx theta2);
cplx w_prime(const ModelParams& params, cplx theta2);
cplx W_eval(const ModelParams& params, cplx theta2);

}  // namespace rbm
