#pragma once

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rbm/conformal.hpp"
#include "rbm/curve.hpp"
#include "rbm/kernel.hpp"
#include "rbm/model.hpp"

namespace rbm {

enum class Method { integral, continuation, closed_form_skew, closed_form_orthogonal };

std::string to_string(Method m);

struct LaplaceValue {
  cplx value;
  double abs_error_estimate = 0.0;
  Method method = Method::integral;
};

struct BoundaryMasses {
  double nu1_total = 0.0;
  double nu2_total = 0.0;
};

// -R^{-1} mu, componentwise.
BoundaryMasses nu_masses(const ModelParams& params);

struct LaplaceOptions {
  double rel_tol = 1e-10;            // target relative accuracy of phi1
  double margin = 1e-3;              // refuse direct evaluation closer than margin*scale to R
  double pole_margin = 1e-9;         // refuse evaluation closer than pole_margin*scale to p
  double tangency_pole_margin = 1e-2;  // refusal radius around the vertex when delta = pi
  int max_continuation_depth = 64;
  PathOptions path;
};

// Direct evaluation of phi1 by the contour integral over R^-. Immutable after
// construction, hence safe to share between threads.
class BoundaryTransform {
 public:
  explicit BoundaryTransform(const ModelParams& params, const LaplaceOptions& options = {});

  const ModelParams& params() const { return params_; }
  const KernelGeometry& geometry() const { return geometry_; }
  const GluingMap& gluing() const { return gluing_; }
  const HyperbolaPath& path() const { return path_; }
  const IndexData& index() const { return index_; }
  double nu() const { return nu_; }

  // True when theta2 is inside the region bounded by R, at least margin*scale away from it.
  bool in_direct_domain(cplx theta2) const;

  // Throws DomainError outside the direct domain, PoleError at p (index -1)
  // or near the vertex in the tangency regime.
  LaplaceValue eval(cplx theta2) const;

  // (1/2 pi i) times the contour integral with the Cauchy difference taken at
  // the image value w2 instead of w(theta2). Returns the value and an error estimate.
  std::pair<cplx, double> exponent_at(cplx w2) const;

 private:
  struct Panel {
    double a = 0.0;
    double b = 0.0;
    cplx log_ref;   // continuous log G at the left node
    cplx G_ref;
    std::array<cplx, 15> w{};
    std::array<cplx, 15> dw{};  // d/ds of w(theta2(s))
    std::array<cplx, 15> logG{};
  };

  void sample(double s, const cplx& log_ref, const cplx& G_ref, cplx& w, cplx& dw, cplx& logG) const;
  std::pair<cplx, double> adaptive(double a, double b, const cplx& log_ref, const cplx& G_ref,
                                   cplx w2, double tol, int depth) const;

  ModelParams params_;
  LaplaceOptions options_;
  KernelGeometry geometry_;
  GluingMap gluing_;
  HyperbolaPath path_;
  IndexData index_;
  double nu_ = 0.0;
  cplx wp_;
  std::vector<Panel> panels_;
  cplx tail_log_;
  cplx tail_w_;
};

// phi1 and phi2 with meromorphic continuation, plus the interior transform.
class StationaryLaplace {
 public:
  explicit StationaryLaplace(const ModelParams& params, const LaplaceOptions& options = {});

  const ModelParams& params() const { return params_; }
  const BoundaryTransform& first() const { return *first_; }
  const BoundaryTransform& second() const { return *second_; }

  LaplaceValue phi1(cplx theta2) const { return first_->eval(theta2); }
  LaplaceValue phi2(cplx theta1) const { return second_->eval(theta1); }

  // phi1(theta2) = -(gamma2/gamma1)(Theta1-(theta2), theta2) phi2(Theta1-(theta2)),
  // with phi2 evaluated by the best available route.
  LaplaceValue phi1_continuation(cplx theta2) const;
  LaplaceValue phi2_continuation(cplx theta1) const;

  // Direct integral when possible, otherwise the continuation chain.
  LaplaceValue phi1_any(cplx theta2) const { return any(0, theta2, 0); }
  LaplaceValue phi2_any(cplx theta1) const { return any(1, theta1, 0); }

  LaplaceValue phi_interior(cplx theta1, cplx theta2) const;

  // Relative residual of the branch-jump relation at theta1 in
  // (theta1-, jump_consistency_upper_limit(params)).
  double jump_consistency_residual(double theta1) const;

 private:
  LaplaceValue any(int which, cplx z, int depth) const;
  LaplaceValue continuation(int which, cplx z, int depth) const;

  ModelParams params_;
  LaplaceOptions options_;
  std::shared_ptr<const BoundaryTransform> first_;
  std::shared_ptr<const BoundaryTransform> second_;
};

// Right end of the theta1 interval on which the branch-jump relation holds
// with phi1 on its principal sheet: min(0, abscissa of the top of the ellipse).
double jump_consistency_upper_limit(const ModelParams& params);

// Convenience wrappers that build the evaluator on each call.
LaplaceValue phi1_eval(const ModelParams& params, cplx theta2, const LaplaceOptions& options = {});
LaplaceValue phi2_eval(const ModelParams& params, cplx theta1, const LaplaceOptions& options = {});
LaplaceValue phi_interior(const ModelParams& params, cplx theta1, cplx theta2,
                          const LaplaceOptions& options = {});
LaplaceValue phi1_continuation(const ModelParams& params, cplx theta2,
                               const LaplaceOptions& options = {});
double jump_consistency_residual(const ModelParams& params, double theta1,
                                 const LaplaceOptions& options = {});

// Exponential product-form special case.
struct SkewSymmetricForm {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double c1 = 0.0;  // phi1(theta2) = c1 / (alpha2 - theta2)
  double c2 = 0.0;  // phi2(theta1) = c2 / (alpha1 - theta1)
};

// Throws DomainError unless the parameters are skew-symmetric.
SkewSymmetricForm skew_symmetric_form(const ModelParams& params, double tol = 1e-9);
LaplaceValue closed_form_skew(const ModelParams& params, cplx theta2, double tol = 1e-9);
cplx closed_form_skew_interior(const ModelParams& params, cplx theta1, cplx theta2, double tol = 1e-9);
double density_skew(const ModelParams& params, double x1, double x2, double tol = 1e-9);

// phi1 for orthogonal reflection, from the gluing map alone. Throws DomainError unless R = I.
LaplaceValue closed_form_orthogonal(const ModelParams& params, cplx theta2);

}  // namespace rbm
