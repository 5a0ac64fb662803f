#include "rbm/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rbm/errors.hpp"

namespace rbm {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double x) { return std::remainder(x, 2.0 * kPi); }

}  // namespace

cplx hyperbola_point(const ModelParams& p, double s) {
  const BranchPoints bp = branch_points(p);
  const double det = p.det_sigma();
  const double gap = bp.theta1_plus - bp.theta1_minus;
  const double t1 = bp.theta1_minus - s * s;
  const double re = -(p.sigma12 * t1 + p.mu2) / p.sigma22;
  const double im = -s * std::sqrt(det * (gap + s * s)) / p.sigma22;
  return {re, im};
}

cplx hyperbola_derivative(const ModelParams& p, double s) {
  const BranchPoints bp = branch_points(p);
  const double det = p.det_sigma();
  const double gap = bp.theta1_plus - bp.theta1_minus;
  const double root = std::sqrt(det * (gap + s * s));
  const double re = 2.0 * p.sigma12 * s / p.sigma22;
  const double im = -(root + s * s * det / root) / p.sigma22;
  return {re, im};
}

double hyperbola_residual(const ModelParams& p, cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double a = p.sigma22 * (p.sigma12 * p.sigma12 - p.sigma11 * p.sigma22) * x * x;
  const double b = p.sigma12 * p.sigma12 * p.sigma22 * y * y;
  const double c = -2.0 * p.sigma22 * (p.sigma11 * p.mu2 - p.sigma12 * p.mu1) * x;
  const double d = p.mu2 * (p.sigma11 * p.mu2 - 2.0 * p.sigma12 * p.mu1);
  const double mag = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
  return mag > 0.0 ? (a + b + c - d) / mag : 0.0;
}

cplx G_eval(const ModelParams& p, double s) {
  const BranchPoints bp = branch_points(p);
  const double t1 = bp.theta1_minus - s * s;
  const cplx t2 = hyperbola_point(p, s);
  const cplx t2c = std::conj(t2);
  const cplx g1c = gamma1(p, t1, t2c);
  const cplx num = gamma1(p, t1, t2) * gamma2(p, t1, t2c);
  const cplx den = gamma2(p, t1, t2) * g1c;
  const double g1_size = std::abs(p.r11 * t1) + std::abs(p.r21) * std::abs(t2);
  if (std::abs(g1c) <= 1e-13 * g1_size || std::abs(den) <= 1e-300) {
    throw PoleError("jump function undefined: gamma1 vanishes at the vertex (delta = pi regime)");
  }
  return num / den;
}

double s_unit(const ModelParams& p) {
  const BranchPoints bp = branch_points(p);
  return std::sqrt(bp.theta1_plus - bp.theta1_minus);
}

namespace {

class PathBuilder {
 public:
  PathBuilder(const ModelParams& p, const PathOptions& opt) : p_(p), opt_(opt) {
    bp_ = branch_points(p);
  }

  PathNode make_node(double s) const {
    PathNode n;
    n.s = s;
    n.theta1 = bp_.theta1_minus - s * s;
    n.theta2 = hyperbola_point(p_, s);
    n.dtheta2_ds = hyperbola_derivative(p_, s);
    n.G = G_eval(p_, s);
    return n;
  }

  // Appends nodes up to s_b, bisecting until every phase increment is small.
  void extend_to(std::vector<PathNode>& nodes, double s_b, int depth = 0) const {
    const PathNode& a = nodes.back();
    PathNode b = make_node(s_b);
    const double inc = std::arg(b.G * std::conj(a.G));
    if (std::abs(inc) >= opt_.max_phase_step) {
      if (depth > 60 || s_b - a.s <= 1e-14 * std::max(1.0, s_b)) {
        throw NumericalError("phase of the jump function cannot be resolved near s = " +
                             std::to_string(a.s));
      }
      const double mid = 0.5 * (a.s + s_b);
      extend_to(nodes, mid, depth + 1);
      extend_to(nodes, s_b, depth + 1);
      return;
    }
    b.logG = cplx(std::log(std::abs(b.G)), a.logG.imag() + inc);
    nodes.push_back(b);
  }

 private:
  const ModelParams& p_;
  const PathOptions& opt_;
  BranchPoints bp_;
};

}  // namespace

HyperbolaPath build_path(const ModelParams& p, const PathOptions& opt) {
  require_valid(p);
  if (!(opt.tol > 0.0)) throw DomainError("path tolerance must be positive");
  HyperbolaPath path;
  path.s_unit = s_unit(p);
  const double scale = geometry_scale(p);
  const double s_max = opt.s_max > 0.0 ? opt.s_max : 1e8 * path.s_unit;
  const int sign = tangency_sign(p);
  path.delta = sign == 0 ? kPi : 0.0;

  PathBuilder builder(p, opt);
  const BranchPoints bp = branch_points(p);
  PathNode vertex;
  vertex.s = 0.0;
  vertex.theta1 = bp.theta1_minus;
  vertex.theta2 = hyperbola_point(p, 0.0);
  vertex.dtheta2_ds = hyperbola_derivative(p, 0.0);
  if (sign == 0) {
    vertex.G = -1.0;
  } else {
    try {
      vertex.G = G_eval(p, 0.0);
    } catch (const PoleError&) {
      vertex.G = -1.0;
    }
  }
  vertex.logG = cplx(0.0, path.delta);
  path.nodes.push_back(vertex);

  for (int k = 1; k <= opt.near_nodes; ++k) {
    builder.extend_to(path.nodes, path.s_unit * k / opt.near_nodes);
  }
  double prev_phase = path.nodes.back().logG.imag();
  std::size_t prev_index = path.nodes.size() - 1;
  double s = path.s_unit;
  const double rho2m1 = path.growth * path.growth - 1.0;
  double err = std::numeric_limits<double>::infinity();
  while (true) {
    s *= path.growth;
    if (s > s_max) {
      throw NumericalError("tail bound not met before s_max; achieved phase error " +
                           std::to_string(err));
    }
    builder.extend_to(path.nodes, s);
    const double phase = path.nodes.back().logG.imag();
    err = std::abs(phase - prev_phase) / rho2m1;
    const bool far = std::abs(path.nodes.back().theta2) >= opt.far_field * scale;
    if (far && err < opt.tol) {
      path.previous_major = prev_index;
      path.phase_tail_error = err;
      path.phase_limit = phase + (phase - prev_phase) / rho2m1;
      break;
    }
    prev_phase = phase;
    prev_index = path.nodes.size() - 1;
  }
  return path;
}

double index_angle_formula(const ModelParams& p) {
  const double n = p.det_r() * std::sqrt(p.det_sigma());
  const double e = p.sigma22 * p.r11 * p.r12 + p.sigma11 * p.r22 * p.r21 -
                   p.sigma12 * (p.r11 * p.r22 + p.r12 * p.r21);
  return -2.0 * std::atan2(n, e);
}

IndexData compute_index(const ModelParams& p) { return compute_index(p, build_path(p)); }

IndexData compute_index(const ModelParams& p, const HyperbolaPath& path) {
  IndexData out;
  out.tangency_sign = tangency_sign(p);
  out.delta = path.delta;
  const double tracked = path.phase_limit;
  out.Delta_from_tracking = tracked - out.delta;
  const double base = index_angle_formula(p);
  const double rep = tracked + wrap_angle(base - tracked);
  out.Delta_from_formula = rep - out.delta;
  if (std::abs(out.Delta_from_formula - out.Delta_from_tracking) > 1e-6) {
    throw NumericalError("index cross-check failed: tracked delta+Delta = " + std::to_string(tracked) +
                         ", closed form representative = " + std::to_string(rep));
  }
  out.Delta = out.Delta_from_formula;
  const double total = out.delta + out.Delta;
  if (!(total > -2.0 * kPi && total < 2.0 * kPi)) {
    throw NumericalError("delta + Delta outside (-2 pi, 2 pi): " + std::to_string(total));
  }
  out.chi = static_cast<int>(std::floor(total / (2.0 * kPi)));
  const int chi_sign = out.tangency_sign > 0 ? -1 : 0;
  if (out.chi != chi_sign) {
    throw NumericalError("index from phase tracking (" + std::to_string(out.chi) +
                         ") contradicts the tangency sign rule (" + std::to_string(chi_sign) + ")");
  }
  return out;
}

double curve_abscissa(const ModelParams& p, double y) {
  const BranchPoints bp = branch_points(p);
  const double det = p.det_sigma();
  const double gap = bp.theta1_plus - bp.theta1_minus;
  const double c = 4.0 * y * y * p.sigma22 * p.sigma22 / det;
  const double s2 = c / (2.0 * (gap + std::sqrt(gap * gap + c)));
  return -(p.sigma12 * (bp.theta1_minus - s2) + p.mu2) / p.sigma22;
}

bool inside_region(const ModelParams& p, cplx z) { return z.real() < curve_abscissa(p, z.imag()); }

double distance_to_curve(const ModelParams& p, cplx z) {
  const cplx zl(z.real(), -std::abs(z.imag()));
  const double su = s_unit(p);
  auto dist = [&](double s) { return std::abs(hyperbola_point(p, s) - zl); };
  // Coarse scan: uniform near the vertex, geometric further out.
  std::vector<double> grid;
  for (int i = 0; i <= 64; ++i) grid.push_back(su * i / 32.0);
  for (double s = 2.0 * su * 1.1; s < 1e9 * su; s *= 1.1) grid.push_back(s);
  std::size_t best = 0;
  double best_d = dist(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = dist(grid[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
    if (d > 1e3 * (best_d + std::abs(zl)) && i > 64) break;
  }
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = dist(c), fd = dist(d);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = dist(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = dist(d);
    }
  }
  return std::min({best_d, fc, fd, dist(0.0)});
}

}  // namespace rbm
