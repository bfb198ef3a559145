#include <gtest/gtest.h>

#include "trilobatto/bounds.hpp"
#include "trilobatto/error.hpp"

using namespace trilobatto;

TEST(Bounds, MinimalCounts) {
  EXPECT_EQ(minimal_lower_bound(5), 7);
  EXPECT_EQ(minimal_lower_bound(7), 12);
  EXPECT_EQ(minimal_lower_bound(4), 6);
  EXPECT_EQ(minimal_lower_bound(1), 1);
  EXPECT_EQ(minimal_lower_bound(2), 3);
  EXPECT_EQ(minimal_lower_bound(3), 4);
}

TEST(Bounds, InteriorCounts) {
  EXPECT_EQ(interior_lower_bound(3), 1);
  EXPECT_EQ(interior_lower_bound(5), 3);
  EXPECT_EQ(interior_lower_bound(6), 4);
  EXPECT_EQ(interior_lower_bound(7), 6);
}

TEST(Bounds, InteriorPlusEdgeCounts) {
  EXPECT_EQ(interior_plus_edge_lower_bound(5), 4);
  EXPECT_EQ(interior_plus_edge_lower_bound(6), 6);
  EXPECT_EQ(interior_plus_edge_lower_bound(7), 7);
}

TEST(Bounds, MinimalCountAtLeastPolynomialHalfDimension) {
  // Any rule exact on Pi_s is exact on squares of Pi_{floor(s/2)}, so it
  // needs at least dim Pi_{floor(s/2)} nodes.
  for (int s = 1; s <= 40; ++s) {
    const int m = s / 2;
    EXPECT_GE(minimal_lower_bound(s), (m + 1) * (m + 2) / 2) << s;
  }
}

TEST(Bounds, ExampleOneBudgetFeasible) {
  const NodeBudget b{3, 2, 2, 2, 3, 5};
  const auto rep = check_feasibility(b);
  EXPECT_TRUE(rep.feasible());
  ASSERT_EQ(rep.checks.size(), 5u);
  EXPECT_EQ(rep.checks[0].inequality, "N0 >= 3");
  EXPECT_EQ(rep.checks[0].lhs, rep.checks[0].rhs);
}

TEST(Bounds, MissingEdgeNodesViolatesCombinedBound) {
  const auto rep = check_feasibility({3, 0, 2, 2, 3, 5});
  EXPECT_FALSE(rep.feasible());
  const auto v = rep.violations();
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].inequality, "N0 + N1 >= 4");
}

TEST(Bounds, StrictGaussLobattoAtFourViolatesInteriorBound) {
  const auto rep = check_feasibility(strict_gauss_lobatto_budget(4));
  EXPECT_FALSE(rep.feasible());
  bool interior_violated = false;
  for (const auto& c : rep.violations()) interior_violated |= c.inequality == "N0 >= 6";
  EXPECT_TRUE(interior_violated);
}

TEST(Bounds, StrictGaussLobattoNeverFeasible) {
  for (int n = 2; n <= 50; ++n) {
    EXPECT_FALSE(check_feasibility(strict_gauss_lobatto_budget(n)).feasible()) << n;
  }
}

TEST(Bounds, GaussLobattoBudgetFeasible) {
  for (int n = 2; n <= 50; ++n) {
    EXPECT_TRUE(check_feasibility(gauss_lobatto_budget(n)).feasible()) << n;
  }
}

TEST(Bounds, LowPrecisionUsesOnlyTotal) {
  const auto rep = check_feasibility({1, 0, 0, 0, 0, 2});
  EXPECT_EQ(rep.checks.size(), 1u);
  EXPECT_FALSE(rep.feasible());
}

TEST(Bounds, InvalidBudgetRejected) {
  EXPECT_THROW((void)check_feasibility({-1, 0, 0, 0, 3, 5}), Error);
  EXPECT_THROW((void)check_feasibility({3, 2, 2, 2, 2, 5}), Error);
  EXPECT_THROW((void)check_feasibility({3, 2, 2, 2, 3, 0}), Error);
}
