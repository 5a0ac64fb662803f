#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <rbm/curve.hpp>
#include <rbm/errors.hpp>
#include <rbm/kernel.hpp>

#include "random_params.hpp"

using namespace rbm;
using std::numbers::pi;

namespace {

// Argument of a number confined to a closed half-plane bounded by the real
// axis; continuous as long as the number stays in that half-plane.
double half_plane_arg(cplx z, int side) {
  double a = std::arg(z);
  if (side < 0 && a > 0.0) a -= 2.0 * pi;  // lower half-plane: (-pi, 0]
  if (side > 0 && a < 0.0) a += 2.0 * pi;  // upper half-plane: [0, pi)
  return a;
}

// Continuous phase of G along the lower curve, built from the half-planes
// the two boundary polynomials live in (Im gamma2 = r22 Im theta2 < 0 and
// Im gamma1 = r21 Im theta2), with value delta at the vertex.
double oracle_phase(const ModelParams& p, double s) {
  const int side1 = p.r21 > 0 ? -1 : (p.r21 < 0 ? 1 : 0);
  auto raw = [&](double ss) {
    const double tt1 = branch_points(p).theta1_minus - ss * ss;
    const cplx tt2 = hyperbola_point(p, ss);
    const cplx g1 = gamma1(p, tt1, tt2);
    const cplx g2 = gamma2(p, tt1, tt2);
    const double a1 = side1 == 0 ? std::arg(cplx(g1.real(), 0.0)) : half_plane_arg(g1, side1);
    return 2.0 * (a1 - half_plane_arg(g2, -1));
  };
  return raw(s) - raw(0.0);
}

ModelParams tangency_model() {
  // Fix the vertex data, then choose r21 so that gamma1 vanishes there.
  ModelParams p{1.2, 0.3, 0.9, -1.0, -0.8, 1.0, 0.2, 0.0, 1.0};
  const double t1m = branch_points(p).theta1_minus;
  const double v = tangency_ordinate(p);
  p.r21 = -p.r11 * t1m / v;
  return p;
}

}  // namespace

TEST(Hyperbola, VertexIsTheTangencyOrdinate) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const ModelParams p = fixtures::random_valid(rng);
    const cplx v = hyperbola_point(p, 0.0);
    EXPECT_EQ(v.imag(), 0.0);
    EXPECT_NEAR(v.real(), tangency_ordinate(p), 1e-12 * geometry_scale(p));
  }
}

TEST(Hyperbola, IdentityModelNodeAtUnitParameter) {
  const ModelParams p = fixtures::identity_model();
  const cplx z = hyperbola_point(p, 1.0);
  // theta1 = 1 - sqrt(2) - 1 = -sqrt(2); theta2 solves theta2^2 - 2 theta2 + 2 + 2 sqrt(2) = 0.
  EXPECT_NEAR(z.real(), 1.0, 1e-15);
  EXPECT_NEAR(z.imag(), -std::sqrt(1.0 + 2.0 * std::sqrt(2.0)), 1e-14);
  EXPECT_LT(std::abs(hyperbola_residual(p, z)), 1e-9);
}

TEST(Hyperbola, NodesSolveTheKernelAndTheHyperbolaEquation) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const ModelParams p = fixtures::random_valid(rng);
    const double t1m = branch_points(p).theta1_minus;
    for (int k = 0; k < 60; ++k) {
      const double s = s_unit(p) * std::pow(1.3, k) * 1e-3;
      const cplx z = hyperbola_point(p, s);
      EXPECT_LE(z.imag(), 0.0);
      EXPECT_LT(std::abs(hyperbola_residual(p, z)), 1e-9);
      const double t1 = t1m - s * s;
      EXPECT_LT(std::abs(gamma(p, t1, z)), 1e-12 * std::max(1.0, std::norm(z)) * 10);
      // The small branch maps the node back to its abscissa.
      EXPECT_LT(std::abs(theta1_minus(p, z) - t1), 1e-9 * std::max(1.0, std::abs(t1)));
      EXPECT_LT(std::abs(hyperbola_residual(p, std::conj(z))), 1e-9);
    }
  }
}

TEST(Hyperbola, DerivativeMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const ModelParams p = fixtures::random_valid(rng);
    for (double s : {0.0, 0.1, 1.0, 7.0}) {
      const double h = 1e-6;
      const double sl = std::max(0.0, s - h);
      const cplx fd = (hyperbola_point(p, s + h) - hyperbola_point(p, sl)) / (s + h - sl);
      EXPECT_LT(std::abs(hyperbola_derivative(p, s) - fd), 1e-5 * std::abs(fd));
    }
  }
}

TEST(JumpFunction, IdentityAtTheVertex) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const ModelParams p = fixtures::random_valid(rng);
    EXPECT_NEAR(std::abs(G_eval(p, 0.0) - 1.0), 0.0, 1e-12);
  }
}

TEST(JumpFunction, OrthogonalReflectionIsConjugateRatio) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const ModelParams p = fixtures::random_orthogonal(rng);
    for (double s : {0.1, 1.0, 10.0}) {
      const cplx t = hyperbola_point(p, s);
      EXPECT_NEAR(std::abs(G_eval(p, s) - std::conj(t) / t), 0.0, 1e-14);
    }
  }
}

TEST(JumpFunction, UnitModulusAndConjugateProduct) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const ModelParams p = fixtures::random_valid(rng);
    for (int k = 0; k < 40; ++k) {
      const double s = s_unit(p) * std::pow(1.4, k) * 1e-2;
      const cplx g = G_eval(p, s);
      EXPECT_LT(std::abs(std::abs(g) - 1.0), 1e-10);
      // G at the conjugate point is the reciprocal.
      const double t1 = branch_points(p).theta1_minus - s * s;
      const cplx t2 = std::conj(hyperbola_point(p, s));
      const cplx gc = gamma1(p, t1, t2) * gamma2(p, t1, std::conj(t2)) /
                      (gamma2(p, t1, t2) * gamma1(p, t1, std::conj(t2)));
      EXPECT_LT(std::abs(g * gc - 1.0), 1e-12);
    }
  }
}

TEST(JumpFunction, VertexPoleInTheTangencyRegime) {
  const ModelParams p = tangency_model();
  ASSERT_TRUE(validate(p).ok());
  EXPECT_THROW(G_eval(p, 0.0), PoleError);
  EXPECT_NEAR(std::abs(G_eval(p, 1e-7) + 1.0), 0.0, 1e-5);
}

TEST(BuildPath, PhaseIncrementsAreSmallAndTrackingMatchesHalfPlaneArgument) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const ModelParams p = fixtures::random_valid(rng);
    const HyperbolaPath path = build_path(p);
    ASSERT_GT(path.nodes.size(), 10u);
    EXPECT_EQ(path.nodes.front().logG, cplx(0.0, path.delta));
    for (std::size_t k = 1; k < path.nodes.size(); ++k) {
      const auto& n = path.nodes[k];
      EXPECT_LT(std::abs(n.logG.imag() - path.nodes[k - 1].logG.imag()), pi / 8);
      EXPECT_LE(n.theta2.imag(), 0.0);
      EXPECT_LT(std::abs(hyperbola_residual(p, n.theta2)), 1e-9);
      EXPECT_NEAR(n.logG.imag(), oracle_phase(p, n.s), 1e-8) << "set " << i << " s " << n.s;
    }
  }
}

TEST(BuildPath, IdentityModelPhaseIsMonotoneAndEndsAtPi) {
  const HyperbolaPath path = build_path(fixtures::identity_model());
  for (std::size_t k = 1; k < path.nodes.size(); ++k) {
    EXPECT_GT(path.nodes[k].logG.imag(), path.nodes[k - 1].logG.imag());
    // arg G = -2 arg theta2 along the line Re theta2 = 1.
    EXPECT_NEAR(path.nodes[k].logG.imag(), -2.0 * std::arg(path.nodes[k].theta2), 1e-12);
  }
  EXPECT_NEAR(path.phase_limit, pi, 1e-9);
}

TEST(BuildPath, TangencyRegimeStartsAtPi) {
  const HyperbolaPath path = build_path(tangency_model());
  EXPECT_DOUBLE_EQ(path.delta, pi);
  EXPECT_EQ(path.nodes.front().logG, cplx(0.0, pi));
}

TEST(BuildPath, ReportsUnreachableTailBound) {
  PathOptions opt;
  opt.s_max = 10.0;
  try {
    build_path(fixtures::identity_model(), opt);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("tail bound"), std::string::npos);
  }
}

TEST(ComputeIndex, IdentityModel) {
  const IndexData idx = compute_index(fixtures::identity_model());
  EXPECT_DOUBLE_EQ(idx.delta, 0.0);
  EXPECT_NEAR(idx.Delta, pi, 1e-9);
  EXPECT_EQ(idx.chi, 0);
}

TEST(ComputeIndex, TangencyRegimeHasDeltaPiAndIndexZero) {
  const IndexData idx = compute_index(tangency_model());
  EXPECT_DOUBLE_EQ(idx.delta, pi);
  EXPECT_EQ(idx.chi, 0);
}

TEST(ComputeIndex, SignRuleAndAsymptoticLimitOnRandomSets) {
  std::mt19937_64 rng(8);
  int negatives = 0;
  for (int i = 0; i < 100; ++i) {
    const ModelParams p = fixtures::random_valid(rng);
    const IndexData idx = compute_index(p);
    const int sign = tangency_sign(p);
    EXPECT_EQ(idx.chi, sign > 0 ? -1 : 0);
    negatives += idx.chi == -1;
    // sgn Delta = -sgn(tangency value).
    EXPECT_EQ(idx.Delta > 0 ? 1 : -1, -sign);
    // Independent limit of G along the curve: theta1/theta2 tends to
    // -sigma22 / (sigma12 - i sqrt(det Sigma)).
    const cplx k = -(p.sigma12 - cplx(0, 1) * std::sqrt(p.det_sigma())) / p.sigma22;
    const cplx g_inf = (p.r11 + p.r21 * k) * (p.r12 + p.r22 * std::conj(k)) /
                       ((p.r12 + p.r22 * k) * (p.r11 + p.r21 * std::conj(k)));
    EXPECT_NEAR(std::abs(std::exp(cplx(0, idx.delta + idx.Delta)) - g_inf), 0.0, 1e-8);
    EXPECT_NEAR(idx.Delta_from_formula, idx.Delta_from_tracking, 1e-6);
  }
  EXPECT_GT(negatives, 0);
}

TEST(Region, InsideOutsideAndDistance) {
  const ModelParams p = fixtures::identity_model();  // curve is the line Re theta2 = 1
  EXPECT_TRUE(inside_region(p, 0.0));
  EXPECT_TRUE(inside_region(p, cplx(0.99, 50.0)));
  EXPECT_FALSE(inside_region(p, cplx(1.01, -3.0)));
  EXPECT_NEAR(distance_to_curve(p, cplx(-2.0, 0.7)), 3.0, 1e-9);
  EXPECT_NEAR(distance_to_curve(p, cplx(0.5, -40.0)), 0.5, 1e-9);
}

TEST(Region, DistanceMatchesBruteForce) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const ModelParams p = fixtures::random_valid(rng);
    const double scale = geometry_scale(p);
    for (int k = 0; k < 10; ++k) {
      const cplx z(2 * scale * u(rng), 2 * scale * u(rng));
      double best = 1e300;
      for (int j = -200000; j <= 200000; ++j) {
        const double s = j * 1e-4 * s_unit(p);
        const cplx c = s >= 0 ? hyperbola_point(p, s) : std::conj(hyperbola_point(p, -s));
        best = std::min(best, std::abs(c - z));
      }
      EXPECT_NEAR(distance_to_curve(p, z), best, 1e-4 * scale);
    }
  }
}
