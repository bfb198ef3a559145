#pragma once

// Node-count lower bounds for cubature rules on the triangle with positive
// weights, and a checker for proposed node configurations.

#include <string>
#include <vector>

#include "trilobatto/error.hpp"

namespace trilobatto {

/// Node counts of a rule with interior, per-edge and corner nodes.
struct NodeBudget {
  int n0 = 0;  ///< interior
  int n1 = 0;  ///< edge y = 0
  int n2 = 0;  ///< edge x = 0
  int n3 = 0;  ///< edge x + y = 1
  int corners = 3;
  int precision = 1;

  [[nodiscard]] int total() const noexcept {
    return n0 + n1 + n2 + n3 + corners;
  }
  [[nodiscard]] int edge(int i) const noexcept {
    return i == 1 ? n1 : i == 2 ? n2 : n3;
  }
};

/// Minimal node count of any rule of precision s (s >= 1):
/// n(n+1)/2 + floor(n/2) for s = 2n-1, n(n+1)/2 for s = 2n-2.
constexpr int minimal_lower_bound(int s) noexcept {
  const int n = (s + 2) / 2;  // ceil((s+1)/2)
  const int base = n * (n + 1) / 2;
  return s % 2 == 1 ? base + n / 2 : base;
}

/// Lower bound on the interior count N0 (s >= 3).
constexpr int interior_lower_bound(int s) noexcept {
  if (s % 2 == 1) {
    const int n = (s + 1) / 2;
    return n * (n - 1) / 2;
  }
  const int n = s / 2;
  return n * (n - 1) / 2 + (n - 1) / 2;
}

/// Lower bound on N0 + Ni for every edge i (s >= 3).
constexpr int interior_plus_edge_lower_bound(int s) noexcept {
  if (s % 2 == 1) {
    const int n = (s + 1) / 2;
    return n * (n - 1) / 2 + (n - 1) / 2;
  }
  const int n = s / 2;
  return n * (n + 1) / 2;
}

struct BoundCheck {
  std::string inequality;  ///< e.g. "N0 + N1 >= 4"
  int lhs = 0;
  int rhs = 0;
  [[nodiscard]] bool satisfied() const noexcept { return lhs >= rhs; }
};

struct FeasibilityReport {
  NodeBudget budget;
  std::vector<BoundCheck> checks;

  [[nodiscard]] bool feasible() const noexcept {
    for (const auto& c : checks) {
      if (!c.satisfied()) return false;
    }
    return true;
  }
  [[nodiscard]] std::vector<BoundCheck> violations() const {
    std::vector<BoundCheck> out;
    for (const auto& c : checks) {
      if (!c.satisfied()) out.push_back(c);
    }
    return out;
  }
};

/// Tests a budget against every applicable bound. For s < 3 only the total
/// count bound applies; the interior bounds need the bubble reduction.
inline FeasibilityReport check_feasibility(const NodeBudget& b) {
  if (b.precision < 1 || b.n0 < 0 || b.n1 < 0 || b.n2 < 0 || b.n3 < 0 ||
      (b.corners != 0 && b.corners != 3)) {
    fail(ErrorKind::parameter, "invalid node budget");
  }
  FeasibilityReport report{b, {}};
  const int s = b.precision;
  if (s >= 3) {
    const int interior = interior_lower_bound(s);
    report.checks.push_back(
        {"N0 >= " + std::to_string(interior), b.n0, interior});
    const int combined = interior_plus_edge_lower_bound(s);
    for (int i = 1; i <= 3; ++i) {
      report.checks.push_back({"N0 + N" + std::to_string(i) +
                                   " >= " + std::to_string(combined),
                               b.n0 + b.edge(i), combined});
    }
  }
  const int total = minimal_lower_bound(s);
  report.checks.push_back({"N >= " + std::to_string(total), b.total(), total});
  return report;
}

/// The configuration with (n-1)(n-2)/2 interior nodes, n-1 per edge and the
/// three corners at precision 2n-1; infeasible for every n >= 2.
constexpr NodeBudget strict_gauss_lobatto_budget(int n) noexcept {
  return {(n - 1) * (n - 2) / 2, n - 1, n - 1, n - 1, 3, 2 * n - 1};
}

/// n(n-1)/2 interior nodes, n-1 per edge, corners, precision 2n-1.
constexpr NodeBudget gauss_lobatto_budget(int n) noexcept {
  return {n * (n - 1) / 2, n - 1, n - 1, n - 1, 3, 2 * n - 1};
}

}  // namespace trilobatto
