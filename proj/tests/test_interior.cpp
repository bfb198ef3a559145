#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "example1_polynomials.hpp"
#include "oracles.hpp"
#include "trilobatto/interior.hpp"

using namespace trilobatto;

namespace {

ErrorKind kind_of(const auto& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::parse;
}

// Max |sum - moment| over monomials of degree <= d for W_{1,1,1}, with
// moments from factorials.
double bubble_residual(const InteriorRule& r, int d) {
  double worst = 0.0;
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; i + j <= d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < r.size(); ++k) {
        s += r.weights[k] * std::pow(r.nodes[k].x, i) * std::pow(r.nodes[k].y, j);
      }
      const double exact = oracle::dirichlet(i + 1, j + 1, 1);
      worst = std::max(worst, std::abs(s - exact) / exact);
    }
  }
  return worst;
}

std::vector<double> median_parameters(const InteriorRule& r) {
  // Each median orbit has exactly one node with x == y.
  std::vector<double> u;
  for (const Point2 p : r.nodes) {
    if (std::abs(p.x - p.y) < 1e-12) u.push_back(p.x);
  }
  std::sort(u.begin(), u.end());
  return u;
}

}  // namespace

TEST(CommonZeros, LinearSystem) {
  const auto z = common_zeros({BivariatePoly::x() - BivariatePoly::constant(1.0 / 3.0),
                               BivariatePoly::y() - BivariatePoly::constant(1.0 / 3.0)},
                              1);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_NEAR(z[0].x, 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(z[0].y, 1.0 / 3.0, 1e-14);
}

TEST(CommonZeros, QuadraticAgainstQuadraticFormula) {
  const BivariatePoly x = BivariatePoly::x();
  const BivariatePoly p = x * x - x + BivariatePoly::constant(2.0 / 9.0);
  const auto z = common_zeros({p, BivariatePoly::y() - x}, 2);
  ASSERT_EQ(z.size(), 2u);
  const double disc = std::sqrt(1.0 - 4.0 * 2.0 / 9.0);
  EXPECT_NEAR(z[0].x, (1.0 - disc) / 2.0, 1e-14);
  EXPECT_NEAR(z[1].x, (1.0 + disc) / 2.0, 1e-14);
  EXPECT_NEAR(z[0].y, z[0].x, 1e-14);
}

TEST(CommonZeros, ExampleOneNodes) {
  const auto z = common_zeros(samples::example1_polynomials(), 3);
  ASSERT_EQ(z.size(), 3u);
  EXPECT_NEAR(z[0].x, 0.15881702219143, 1e-13);
  EXPECT_NEAR(z[0].y, 0.19201873632215, 1e-13);
  EXPECT_NEAR(z[1].x, 0.56219234596964, 1e-13);
  EXPECT_NEAR(z[1].y, 0.19201873632215, 1e-13);
  EXPECT_NEAR(z[2].x, 0.22100936816107, 1e-13);
  EXPECT_NEAR(z[2].y, 0.55798126367785, 1e-13);
}

TEST(CommonZeros, WrongCountIsReported) {
  EXPECT_EQ(kind_of([] {
              (void)common_zeros({BivariatePoly::x() - BivariatePoly::constant(0.25),
                                  BivariatePoly::y() - BivariatePoly::constant(0.25)},
                                 2);
            }),
            ErrorKind::zero_count);
}

TEST(CommonZeros, NeedsTwoPolynomials) {
  EXPECT_THROW((void)common_zeros({BivariatePoly::x()}, 1), Error);
}

TEST(WeightsFromNodes, CentroidDegreeZeroAndOne) {
  for (int d : {0, 1}) {
    const auto r = weights_from_nodes({{1.0 / 3.0, 1.0 / 3.0}}, d, {});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r.weights[0], 0.5, 1e-15);
  }
}

TEST(WeightsFromNodes, CentroidCannotReachDegreeTwo) {
  EXPECT_EQ(kind_of([] { (void)weights_from_nodes({{1.0 / 3.0, 1.0 / 3.0}}, 2, {}); }),
            ErrorKind::unsupported_degree);
}

TEST(WeightsFromNodes, CentroidOutsideHullGivesNegativeWeight) {
  EXPECT_EQ(kind_of([] {
              (void)weights_from_nodes({{0.2, 0.2}, {0.3, 0.2}, {0.2, 0.3}}, 1, {});
            }),
            ErrorKind::rejected_solution);
}

TEST(WeightsFromNodes, DuplicateNodesRejected) {
  EXPECT_EQ(kind_of([] { (void)weights_from_nodes({{0.2, 0.2}, {0.2, 0.2}}, 0, {}); }),
            ErrorKind::parameter);
  EXPECT_EQ(kind_of([] { (void)weights_from_nodes({}, 0, {}); }), ErrorKind::parameter);
}

TEST(WeightsFromNodes, ExampleOneWeights) {
  const auto nodes = common_zeros(samples::example1_polynomials(), 3);
  const auto r = weights_from_nodes(nodes, 2, {1, 1, 1});
  const double lambda[3] = {0.101342396527698, 0.117181247909596, 0.118066904793533};
  for (std::size_t k = 0; k < 3; ++k) {
    const Point2 p = r.nodes[k];
    EXPECT_NEAR(r.weights[k], lambda[k] * p.x * p.y * p.z(), 1e-14);
  }
  EXPECT_LT(bubble_residual(r, 2), 1e-13);
}

TEST(ShiftWeights, ExampleOne) {
  const auto nodes = common_zeros(samples::example1_polynomials(), 3);
  const auto lambda = shift_weights_in(weights_from_nodes(nodes, 2, {1, 1, 1}));
  EXPECT_NEAR(lambda[0], 0.101342396527698, 1e-13);
  EXPECT_NEAR(lambda[1], 0.117181247909596, 1e-13);
  EXPECT_NEAR(lambda[2], 0.118066904793533, 1e-13);
}

TEST(ShiftWeights, Centroid) {
  const InteriorRule r{{1, 1, 1}, 0, {{1.0 / 3.0, 1.0 / 3.0}}, {0.7 / 27.0}};
  EXPECT_NEAR(shift_weights_in(r)[0], 0.7, 1e-15);
}

TEST(ShiftWeights, BoundaryNodeIsDivisionHazard) {
  const InteriorRule r{{1, 1, 1}, 0, {{0.5, 0.5}}, {1.0}};
  EXPECT_EQ(kind_of([&] { (void)shift_weights_in(r); }), ErrorKind::division_hazard);
}

TEST(InteriorRuleIssues, FlagsEachProblem) {
  const InteriorRule good{{}, 1, {{1.0 / 3.0, 1.0 / 3.0}}, {0.5}};
  EXPECT_TRUE(interior_rule_issues(good).empty());
  const InteriorRule outside{{}, 0, {{0.8, 0.8}}, {0.5}};
  EXPECT_FALSE(interior_rule_issues(outside).empty());
  const InteriorRule negative{{}, 0, {{0.2, 0.2}}, {-0.5}};
  EXPECT_FALSE(interior_rule_issues(negative).empty());
  const InteriorRule inexact{{}, 1, {{0.2, 0.2}}, {0.5}};
  EXPECT_FALSE(interior_rule_issues(inexact).empty());
  EXPECT_THROW(require_valid_interior_rule(inexact), Error);
}

TEST(MomentResidual, CentroidDegreeOne) {
  const auto res = moment_residual({{1.0 / 3.0, 1.0 / 3.0}}, {0.5}, 1, {});
  EXPECT_LT(res.max_abs, 1e-16);
  EXPECT_NEAR(res.max_moment, 0.5, 1e-15);
}

TEST(SolveMoments, PlainDegreeTwoBubble) {
  const auto sol = solve_moment_equations({1, 1, 1}, 2, 3, 0, false);
  EXPECT_EQ(sol.rule.size(), 3u);
  EXPECT_LT(bubble_residual(sol.rule, 2), 1e-12);
  EXPECT_TRUE(interior_rule_issues(sol.rule).empty());
}

TEST(SolveMoments, SymmetricDegreeTwoMedianOrbit) {
  const auto sol = solve_moment_equations({1, 1, 1}, 2, 3, 0, true);
  const auto u = median_parameters(sol.rule);
  ASSERT_EQ(u.size(), 1u);
  const double s7 = std::sqrt(7.0);
  const double d = std::min(std::abs(u[0] - (7 - s7) / 21), std::abs(u[0] - (7 + s7) / 21));
  EXPECT_LT(d, 1e-13);
  EXPECT_LT(bubble_residual(sol.rule, 2), 1e-12);
}

TEST(SolveMoments, SymmetricDegreeFourTwoMedianOrbits) {
  const auto sol = solve_moment_equations({1, 1, 1}, 4, 6, 0, true);
  const auto u = median_parameters(sol.rule);
  ASSERT_EQ(u.size(), 2u);
  const double s7 = std::sqrt(7.0);
  EXPECT_NEAR(u[0], (5 - s7) / 18, 1e-13);
  EXPECT_NEAR(u[1], (5 + s7) / 18, 1e-13);
  EXPECT_LT(bubble_residual(sol.rule, 4), 1e-12);
}

TEST(SolveMoments, SameSeedSameRule) {
  const auto a = solve_moment_equations({1, 1, 1}, 2, 3, 42, false);
  const auto b = solve_moment_equations({1, 1, 1}, 2, 3, 42, false);
  ASSERT_EQ(a.rule.size(), b.rule.size());
  EXPECT_EQ(a.seed, b.seed);
  for (std::size_t k = 0; k < a.rule.size(); ++k) {
    EXPECT_EQ(a.rule.nodes[k].x, b.rule.nodes[k].x);
    EXPECT_EQ(a.rule.nodes[k].y, b.rule.nodes[k].y);
    EXPECT_EQ(a.rule.weights[k], b.rule.weights[k]);
  }
}

TEST(SolveMoments, BadRequestsAreParameterErrors) {
  EXPECT_EQ(kind_of([] { (void)solve_moment_equations({1, 1, 1}, 4, 2, 0, false); }),
            ErrorKind::parameter);
  EXPECT_EQ(kind_of([] { (void)solve_moment_equations({1, 0, 1}, 2, 3, 0, true); }),
            ErrorKind::parameter);
  SolveOptions opt;
  opt.orbits = OrbitLayout{1, 1, 0};
  EXPECT_EQ(kind_of([&] { (void)solve_moment_equations({1, 1, 1}, 2, 3, opt); }),
            ErrorKind::parameter);
  EXPECT_EQ(kind_of([] { (void)OrbitLayout::for_node_count(5); }), ErrorKind::parameter);
}

TEST(SolveMoments, BelowMinimalCountFails) {
  SolveOptions opt;
  opt.restarts = 20;
  const ErrorKind k = kind_of([&] { (void)solve_moment_equations({}, 2, 2, opt); });
  EXPECT_TRUE(k == ErrorKind::construction_failed || k == ErrorKind::rejected_solution);
}

TEST(OrbitLayout, Defaults) {
  const auto one = OrbitLayout::for_node_count(1);
  EXPECT_EQ(one.center, 1);
  EXPECT_EQ(one.median, 0);
  const auto six = OrbitLayout::for_node_count(6);
  EXPECT_EQ(six.median, 2);
  EXPECT_EQ(six.node_count(), 6);
  EXPECT_EQ(six.unknowns(), 4);
}

TEST(SymmetricBasis, SizeMatchesInvariantDimension) {
  // Number of (a, b) with 2a + 3b <= d.
  for (int d = 0; d <= 12; ++d) {
    int count = 0;
    for (int b = 0; 3 * b <= d; ++b) count += (d - 3 * b) / 2 + 1;
    EXPECT_EQ(static_cast<int>(symmetric_basis(d).size()), count);
  }
}

TEST(SymmetricBasis, InvariantUnderPermutation) {
  for (const auto& f : symmetric_basis(6)) {
    EXPECT_NEAR(f(0.1, 0.3, 0.6), f(0.6, 0.1, 0.3), 1e-15);
    EXPECT_NEAR(f(0.1, 0.3, 0.6), f(0.3, 0.1, 0.6), 1e-15);
  }
}
