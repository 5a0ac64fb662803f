#include "rbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/LU>

#include "rbm/errors.hpp"

namespace rbm {

Eigen::Matrix2d ModelParams::sigma() const {
  Eigen::Matrix2d s;
  s << sigma11, sigma12, sigma12, sigma22;
  return s;
}

Eigen::Vector2d ModelParams::mu() const { return {mu1, mu2}; }

Eigen::Matrix2d ModelParams::reflection() const {
  Eigen::Matrix2d r;
  r << r11, r12, r21, r22;
  return r;
}

ModelParams ModelParams::swapped() const {
  ModelParams s;
  s.sigma11 = sigma22;
  s.sigma12 = sigma12;
  s.sigma22 = sigma11;
  s.mu1 = mu2;
  s.mu2 = mu1;
  s.r11 = r22;
  s.r12 = r21;
  s.r21 = r12;
  s.r22 = r11;
  return s;
}

ModelParams ModelParams::from_matrices(const Eigen::Matrix2d& sigma, const Eigen::Vector2d& mu,
                                       const Eigen::Matrix2d& reflection) {
  ModelParams p;
  p.sigma11 = sigma(0, 0);
  p.sigma12 = 0.5 * (sigma(0, 1) + sigma(1, 0));
  p.sigma22 = sigma(1, 1);
  p.mu1 = mu(0);
  p.mu2 = mu(1);
  p.r11 = reflection(0, 0);
  p.r12 = reflection(0, 1);
  p.r21 = reflection(1, 0);
  p.r22 = reflection(1, 1);
  return p;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& c : checks) {
    os << (c.passed ? "pass " : "FAIL ") << c.name << " (value " << c.value << ")\n";
  }
  return os.str();
}

ValidationReport validate(const ModelParams& p) {
  const double entries[] = {p.sigma11, p.sigma12, p.sigma22, p.mu1, p.mu2,
                            p.r11,     p.r12,     p.r21,     p.r22};
  for (double v : entries) {
    if (!std::isfinite(v)) throw InvalidParams("parameter entries must be finite");
  }
  ValidationReport rep;
  auto positive = [&rep](const char* name, double v) { rep.checks.push_back({name, v > 0.0, v}); };
  auto negative = [&rep](const char* name, double v) { rep.checks.push_back({name, v < 0.0, v}); };
  positive("sigma11 > 0", p.sigma11);
  positive("sigma22 > 0", p.sigma22);
  positive("det Sigma > 0", p.det_sigma());
  positive("r11 > 0", p.r11);
  positive("r22 > 0", p.r22);
  positive("det R > 0", p.det_r());
  negative("r22*mu1 - r12*mu2 < 0", p.r22 * p.mu1 - p.r12 * p.mu2);
  negative("r11*mu2 - r21*mu1 < 0", p.r11 * p.mu2 - p.r21 * p.mu1);
  negative("mu1 < 0", p.mu1);
  negative("mu2 < 0", p.mu2);
  return rep;
}

void require_valid(const ModelParams& params) {
  const ValidationReport rep = validate(params);
  if (!rep.ok()) {
    std::string msg = "invalid parameters:";
    for (const auto& f : rep.failures()) msg += " [" + f + "]";
    throw InvalidParams(msg);
  }
}

double opening_angle(const ModelParams& p) {
  return std::acos(-p.sigma12 / std::sqrt(p.sigma11 * p.sigma22));
}

WedgeAngles quadrant_to_wedge(const ModelParams& p) {
  require_valid(p);
  WedgeAngles out;
  out.beta = opening_angle(p);
  const double a = (p.r12 / p.r22) * std::sqrt(p.sigma22 / p.sigma11);
  const double b = (p.r21 / p.r11) * std::sqrt(p.sigma11 / p.sigma22);
  const double sb = std::sin(out.beta);
  const double cb = std::cos(out.beta);
  out.delta = std::atan2(sb, a + cb);
  out.epsilon = std::atan2(sb, b + cb);
  return out;
}

namespace {
void require_angle(double beta) {
  if (!(beta > 0.0 && beta < std::numbers::pi)) {
    throw DomainError("wedge angle beta must lie in (0, pi)");
  }
}
}  // namespace

Eigen::Matrix2d wedge_t1(double beta) {
  require_angle(beta);
  Eigen::Matrix2d t;
  t << 1.0 / std::sin(beta), std::cos(beta) / std::sin(beta), 0.0, 1.0;
  return t;
}

Eigen::Matrix2d wedge_t1_inverse(double beta) {
  require_angle(beta);
  Eigen::Matrix2d t;
  t << std::sin(beta), -std::cos(beta), 0.0, 1.0;
  return t;
}

ModelParams wedge_to_quadrant(const WedgeParams& w) {
  const Eigen::Matrix2d ti = wedge_t1_inverse(w.beta);
  const Eigen::Matrix2d s = w.sigma;
  if (!(s(0, 0) > 0.0 && s.determinant() > 0.0) || std::abs(s(0, 1) - s(1, 0)) > 1e-12 * s.norm()) {
    throw InvalidParams("wedge covariance must be symmetric positive definite");
  }
  return ModelParams::from_matrices(ti * s * ti.transpose(), ti * w.mu, ti * w.reflection);
}

Eigen::Matrix2d quadrant_map(const ModelParams& p) {
  const Eigen::Matrix2d t1 = wedge_t1(opening_angle(p));
  Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
  d(0, 0) = 1.0 / std::sqrt(p.sigma11);
  d(1, 1) = 1.0 / std::sqrt(p.sigma22);
  return t1 * d;
}

WedgeParams quadrant_to_wedge_params(const ModelParams& p) {
  require_valid(p);
  const Eigen::Matrix2d t = quadrant_map(p);
  WedgeParams w;
  w.beta = opening_angle(p);
  w.sigma = t * p.sigma() * t.transpose();
  w.mu = t * p.mu();
  w.reflection = t * p.reflection();
  return w;
}

WedgeAngles wedge_angles(const WedgeParams& w) {
  require_angle(w.beta);
  const Eigen::Vector2d edge(std::cos(w.beta), std::sin(w.beta));
  const Eigen::Vector2d normal(std::sin(w.beta), -std::cos(w.beta));
  const Eigen::Vector2d r1 = w.reflection.col(0);
  const Eigen::Vector2d r2 = w.reflection.col(1);
  WedgeAngles out;
  out.beta = w.beta;
  out.delta = std::atan2(r2(1), r2(0));
  out.epsilon = std::atan2(normal.dot(r1), edge.dot(r1));
  return out;
}

WedgeParams wedge_from_angles(double beta, double delta, double epsilon, const Eigen::Vector2d& mu) {
  require_angle(beta);
  if (!(delta > 0.0 && delta < std::numbers::pi && epsilon > 0.0 && epsilon < std::numbers::pi)) {
    throw DomainError("reflection angles must lie in (0, pi)");
  }
  const Eigen::Vector2d edge(std::cos(beta), std::sin(beta));
  const Eigen::Vector2d normal(std::sin(beta), -std::cos(beta));
  WedgeParams w;
  w.beta = beta;
  w.sigma = Eigen::Matrix2d::Identity();
  w.mu = mu;
  w.reflection.col(0) = edge / std::tan(epsilon) + normal;
  w.reflection.col(1) = Eigen::Vector2d(1.0 / std::tan(delta), 1.0);
  return w;
}

bool is_skew_symmetric(const ModelParams& p, double tol) {
  const double t1 = 2.0 * p.sigma12;
  const double t2 = (p.r21 / p.r11) * p.sigma11;
  const double t3 = (p.r12 / p.r22) * p.sigma22;
  const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), p.sigma11, p.sigma22});
  return std::abs(t1 - t2 - t3) <= tol * scale;
}

DiekerMoriartyResult dieker_moriarty(const ModelParams& p, double tol) {
  const WedgeAngles ang = quadrant_to_wedge(p);
  DiekerMoriartyResult out;
  out.ratio = (ang.epsilon + ang.delta - std::numbers::pi) / ang.beta;
  const double n = std::round(out.ratio);
  if (n <= 0.0 && std::abs(out.ratio - n) <= tol * std::max(1.0, std::abs(out.ratio))) {
    out.is_sum_of_exponentials = true;
    out.n = static_cast<int>(n);
  }
  return out;
}

}  // namespace rbm
