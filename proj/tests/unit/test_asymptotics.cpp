#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include <gtest/gtest.h>

#include <rbm/asymptotics.hpp>
#include <rbm/errors.hpp>
#include <rbm/kernel.hpp>
#include <rbm/laplace.hpp>

#include "random_params.hpp"

using namespace rbm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Row conditions written directly in terms of the comparison quantities.
bool row_1a(const KernelGeometry& g) {
  return g.p && *g.p < g.theta2_plus && *g.p < g.theta2_at_t1m;
}
bool row_1b(const KernelGeometry& g) {
  const double q = g.p_prime.value_or(kInf);
  return g.p && *g.p < g.theta2_plus && g.theta2_at_t1m <= *g.p && *g.p < q;
}
bool row_1c(const KernelGeometry& g) {
  const double p = g.p.value_or(kInf);
  return g.p_prime && *g.p_prime < g.theta2_plus && *g.p_prime < p && g.theta2_at_t1m <= p;
}
bool row_2a(const KernelGeometry& g) {
  return g.p.value_or(kInf) > g.theta2_plus && g.p_prime.value_or(kInf) > g.theta2_plus;
}

// Margin between the decisive comparison quantities, relative to scale.
double separation(const KernelGeometry& g) {
  std::vector<double> v{g.theta2_plus, g.theta2_at_t1m};
  if (g.p) v.push_back(*g.p);
  if (g.p_prime) v.push_back(*g.p_prime);
  double m = kInf;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) m = std::min(m, std::abs(v[i] - v[j]));
  return m / g.scale;
}

ModelParams sample_row(std::mt19937_64& rng, const std::function<bool(const KernelGeometry&)>& row) {
  for (int tries = 0; tries < 200000; ++tries) {
    const ModelParams p = fixtures::random_valid(rng);
    const KernelGeometry g = kernel_geometry(p);
    if (row(g) && separation(g) > 0.05) return p;
  }
  throw std::runtime_error("row not found by rejection sampling");
}

// (p - t) phi1(t) as t -> p from below, extrapolated with two Richardson steps.
double residue_from_left(const StationaryLaplace& L, double p) {
  auto f = [&](double h) { return h * L.phi1_any(p - h).value.real(); };
  const double h = 1e-3 * L.first().geometry().scale;
  const double a = f(h), b = f(h / 2), c = f(h / 4);
  const double r1 = 2 * b - a, r2 = 2 * c - b;
  return (4 * r2 - r1) / 3;
}

}  // namespace

TEST(ClassifyValues, TableRows) {
  EXPECT_EQ(classify_values(1.0, std::nullopt, 2.0, 3.0, 1e-8), TailCase::c1a);
  EXPECT_EQ(classify_values(2.0, 2.5, 1.0, 3.0, 1e-8), TailCase::c1b);
  EXPECT_EQ(classify_values(2.5, 2.0, 1.0, 3.0, 1e-8), TailCase::c1c);
  EXPECT_EQ(classify_values(std::nullopt, 2.0, 1.0, 3.0, 1e-8), TailCase::c1c);
  EXPECT_EQ(classify_values(2.0, 2.0, 1.0, 3.0, 1e-8), TailCase::c1d);
  EXPECT_EQ(classify_values(std::nullopt, std::nullopt, 1.0, 3.0, 1e-8), TailCase::c2a);
  EXPECT_EQ(classify_values(3.0, 4.0, 1.0, 3.0, 1e-8), TailCase::c2b);
  EXPECT_EQ(classify_values(5.0, 3.0, 1.0, 3.0, 1e-8), TailCase::c2c);
  EXPECT_EQ(classify_values(3.0, 3.0, 1.0, 3.0, 1e-8), TailCase::c2d);
}

TEST(Classify, IdentityModelIsRow1b) {
  const AsymptoticsClass c = classify(fixtures::identity_model());
  EXPECT_EQ(c.case_label, TailCase::c1b);
  EXPECT_EQ(c.kappa, 0.0);
  EXPECT_NEAR(c.tau2, 2.0, 1e-12);
  EXPECT_TRUE(c.skew_symmetric);
  EXPECT_TRUE(c.ambiguous.empty());
  EXPECT_EQ(to_string(c.case_label), "1b");
}

TEST(Classify, AmbiguityFlagNamesBothRows) {
  // r21 chosen so that p sits on the vertex ordinate, then nudged both ways
  // by an amount far below the comparison tolerance.
  ModelParams base{1.2, 0.3, 0.9, -1.0, -0.8, 1.0, 0.2, 0.0, 1.0};
  const double t1m = branch_points(base).theta1_minus;
  const double v = tangency_ordinate(base);
  base.r21 = -base.r11 * t1m / v;
  int flagged = 0;
  for (double nudge : {-1e-11, 1e-11}) {
    ModelParams p = base;
    p.r21 *= 1.0 + nudge;
    const KernelGeometry g = kernel_geometry(p);
    ASSERT_TRUE(g.p.has_value());
    const AsymptoticsClass c = classify(p, 1e-8);
    EXPECT_NE(c.case_label, TailCase::c1a);
    if (*g.p < g.theta2_at_t1m) {
      ++flagged;
      ASSERT_EQ(c.ambiguous.size(), 2u);
      EXPECT_EQ(c.ambiguous[0], c.case_label);
      EXPECT_EQ(c.ambiguous[1], TailCase::c1a);
      EXPECT_EQ(classify(p, 0.0).case_label, TailCase::c1a);
    }
  }
  EXPECT_EQ(flagged, 1);
}

TEST(Classify, ConstructedRowsAgreeWithNearestSingularity) {
  std::mt19937_64 rng(31);
  struct Row {
    TailCase label;
    std::function<bool(const KernelGeometry&)> cond;
    double kappa;
  };
  const std::vector<Row> rows{{TailCase::c1a, row_1a, 0.0},
                              {TailCase::c1b, row_1b, 0.0},
                              {TailCase::c1c, row_1c, 0.0},
                              {TailCase::c2a, row_2a, -1.5}};
  for (const Row& r : rows) {
    for (int i = 0; i < 2; ++i) {
      const ModelParams p = sample_row(rng, r.cond);
      const AsymptoticsClass c = classify(p);
      ASSERT_EQ(c.case_label, r.label);
      EXPECT_EQ(c.kappa, r.kappa);
      const Singularity s = nearest_singularity(p);
      const double scale = geometry_scale(p);
      EXPECT_NEAR(s.location, c.tau2, 1e-4 * scale) << to_string(r.label);
      EXPECT_EQ(s.branch_point, r.label == TailCase::c2a);
    }
  }
}

TEST(Classify, LabelInvariantUnderTimeRescaling) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 50; ++i) {
    ModelParams p = fixtures::random_valid(rng);
    const AsymptoticsClass a = classify(p);
    for (double lam : {0.1, 3.0, 100.0}) {
      ModelParams q = p;
      q.sigma11 *= lam;
      q.sigma12 *= lam;
      q.sigma22 *= lam;
      q.mu1 *= lam;
      q.mu2 *= lam;
      EXPECT_EQ(classify(q).case_label, a.case_label);
      EXPECT_NEAR(classify(q).tau2, a.tau2, 1e-9 * a.tau2);
    }
  }
}

TEST(ConstantB, MatchesResidueOfPhi1) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 3; ++i) {
    const ModelParams p = sample_row(rng, row_1a);
    const double b = constant_b_case1a(p);
    EXPECT_GT(b, 0.0);
    const StationaryLaplace L(p);
    const double res = residue_from_left(L, *L.first().geometry().p);
    EXPECT_NEAR(b / res, 1.0, 1e-4);
    // Sanity band: b/p against the total mass, within a factor two.
    const double ratio = (b / *L.first().geometry().p) / L.first().nu();
    EXPECT_GT(ratio, 0.25);
    EXPECT_LT(ratio, 4.0);
  }
}

TEST(ConstantB, RefusedOutsideRow1a) {
  EXPECT_THROW(constant_b_case1a(fixtures::identity_model()), DomainError);
}

TEST(NearestSingularity, IdentityModelPoleAtTwo) {
  const Singularity s = nearest_singularity(fixtures::identity_model());
  EXPECT_FALSE(s.branch_point);
  EXPECT_NEAR(s.location, 2.0, 1e-6);
}
