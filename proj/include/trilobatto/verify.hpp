#pragma once

// Independent checks of a TriangleRule against closed-form moments. Node
// positions are recomputed here from the stored classes; nothing from the
// construction path is reused besides triangle_moment.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "trilobatto/bounds.hpp"
#include "trilobatto/error.hpp"
#include "trilobatto/moments.hpp"
#include "trilobatto/polynomial.hpp"
#include "trilobatto/rule.hpp"
#include "trilobatto/tolerances.hpp"

namespace trilobatto {

struct ExactnessReport {
  int through_degree = 0;
  double tolerance = tol::verify;
  double max_error = 0.0;  ///< max relative error over the monomials
  MonomialIndex worst{};
  bool pass = false;
};

namespace detail {

struct Node {
  double x;
  double y;
  double w;
};

inline std::vector<Node> flatten(const TriangleRule& r) {
  std::vector<Node> out;
  for (const auto& p : r.interior) out.push_back({p.point.x, p.point.y, p.weight});
  for (const auto& n : r.edge(EdgeLabel::edge_y0)) out.push_back({n.t, 0.0, n.weight});
  for (const auto& n : r.edge(EdgeLabel::edge_x0)) out.push_back({0.0, n.t, n.weight});
  for (const auto& n : r.edge(EdgeLabel::edge_diag)) out.push_back({n.t, 1.0 - n.t, n.weight});
  out.push_back({0.0, 0.0, r.corners[0]});
  out.push_back({1.0, 0.0, r.corners[1]});
  out.push_back({0.0, 1.0, r.corners[2]});
  return out;
}

inline double relative_error(double got, double exact) {
  const double denom = std::abs(exact);
  const double err = std::abs(got - exact);
  return denom < tol::relative_floor ? err : err / denom;
}

}  // namespace detail

/// Max relative error of the rule over x^i y^j, i + j <= through_degree.
inline ExactnessReport verify_exactness(const TriangleRule& r, int through_degree,
                                        double tolerance = tol::verify) {
  ExactnessReport rep;
  rep.through_degree = through_degree;
  rep.tolerance = tolerance;
  const auto nodes = detail::flatten(r);
  for (int d = 0; d <= through_degree; ++d) {
    for (int j = 0; j <= d; ++j) {
      const MonomialIndex m{d - j, j};
      double sum = 0.0;
      for (const auto& n : nodes) {
        double v = n.w;
        for (int k = 0; k < m.i; ++k) v *= n.x;
        for (int k = 0; k < m.j; ++k) v *= n.y;
        sum += v;
      }
      const double err = detail::relative_error(sum, triangle_moment(m, r.weight));
      if (err > rep.max_error || !std::isfinite(err)) {
        rep.max_error = err;
        rep.worst = m;
      }
    }
  }
  rep.pass = std::isfinite(rep.max_error) && rep.max_error <= tolerance;
  return rep;
}

/// Rule applied to a polynomial.
inline double apply_rule(const TriangleRule& r, const BivariatePoly& f) {
  double s = 0.0;
  for (const auto& n : detail::flatten(r)) s += n.w * f(n.x, n.y);
  return s;
}

struct NodeCensus {
  int n0 = 0;
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;
  int corners = 0;
  std::vector<std::string> offenders;

  [[nodiscard]] int total() const noexcept { return n0 + n1 + n2 + n3 + corners; }
  [[nodiscard]] NodeBudget budget(int precision) const noexcept {
    return {n0, n1, n2, n3, corners, precision};
  }
};

/// Counts nodes per class and lists nodes not in their declared class (or
/// colliding within it); never throws.
inline NodeCensus census_of(const TriangleRule& r) {
  NodeCensus c;
  c.n0 = static_cast<int>(r.interior.size());
  c.n1 = static_cast<int>(r.edge(EdgeLabel::edge_y0).size());
  c.n2 = static_cast<int>(r.edge(EdgeLabel::edge_x0).size());
  c.n3 = static_cast<int>(r.edge(EdgeLabel::edge_diag).size());
  c.corners = r.corner_count();
  const double tau = tol::containment;
  for (std::size_t k = 0; k < r.interior.size(); ++k) {
    const Point2 p = r.interior[k].point;
    if (!(p.x > tau && p.y > tau && 1.0 - p.x - p.y > tau)) {
      c.offenders.push_back("interior node " + std::to_string(k) + " (" +
                            std::to_string(p.x) + ", " + std::to_string(p.y) +
                            ") is not strictly inside");
    }
    for (std::size_t l = 0; l < k; ++l) {
      if (std::hypot(p.x - r.interior[l].point.x, p.y - r.interior[l].point.y) <=
          tol::distinct) {
        c.offenders.push_back("interior nodes " + std::to_string(l) + " and " +
                              std::to_string(k) + " coincide");
      }
    }
  }
  for (const EdgeLabel e : all_edges) {
    const auto& nodes = r.edge(e);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double t = nodes[k].t;
      if (!(t > tau && t < 1.0 - tau)) {
        c.offenders.push_back(std::string(to_string(e)) + " node " + std::to_string(k) +
                              " at t = " + std::to_string(t) + " is not inside the edge");
      }
      for (std::size_t l = 0; l < k; ++l) {
        if (std::abs(t - nodes[l].t) <= tol::distinct) {
          c.offenders.push_back(std::string(to_string(e)) + " nodes " + std::to_string(l) +
                                " and " + std::to_string(k) + " coincide");
        }
      }
    }
  }
  return c;
}

/// Census; throws a classification error listing every misplaced node.
inline NodeCensus classify_nodes(const TriangleRule& r) {
  NodeCensus c = census_of(r);
  if (!c.offenders.empty()) {
    std::string msg = "misclassified nodes:";
    for (const auto& o : c.offenders) msg += "\n  " + o;
    fail(ErrorKind::classification, msg);
  }
  return c;
}

struct SummandReport {
  std::string name;
  int checked = 0;  ///< basis polynomials tested
  double max_error = 0.0;
  bool pass = false;
};

/// Exactness on bases of the summands of
///   Pi_s = xyz Pi_{s-3} + xz Pi_{s-2}[x] + yz Pi_{s-2}[y] + xy Pi_{s-2}[x] + Pi_1,
/// each to a relative tolerance.
inline std::vector<SummandReport> verify_direct_sum(const TriangleRule& r,
                                                    double tolerance = tol::verify) {
  const int s = r.precision;
  const BivariatePoly x = BivariatePoly::x();
  const BivariatePoly y = BivariatePoly::y();
  const BivariatePoly z = BivariatePoly::z();
  const auto check = [&](std::string name, const std::vector<BivariatePoly>& basis) {
    SummandReport rep{std::move(name), static_cast<int>(basis.size()), 0.0, true};
    for (const auto& f : basis) {
      const double err = detail::relative_error(apply_rule(r, f), integrate(f, r.weight));
      rep.max_error = std::max(rep.max_error, err);
    }
    rep.pass = rep.max_error <= tolerance;
    return rep;
  };
  std::vector<BivariatePoly> bubble;
  for (const auto m : monomials_up_to(s - 3)) bubble.push_back(x * y * z * BivariatePoly::monomial(m));
  std::vector<BivariatePoly> xz;
  std::vector<BivariatePoly> yz;
  std::vector<BivariatePoly> xy;
  for (int k = 0; k <= s - 2; ++k) {
    xz.push_back(x * z * BivariatePoly::monomial({k, 0}));
    yz.push_back(y * z * BivariatePoly::monomial({0, k}));
    xy.push_back(x * y * BivariatePoly::monomial({k, 0}));
  }
  return {check("xyz*P_{s-3}", bubble), check("xz*P_{s-2}[x]", xz),
          check("yz*P_{s-2}[y]", yz), check("xy*P_{s-2}[x]", xy),
          check("P_1", {BivariatePoly::constant(1.0), x, y})};
}

struct AuditReport {
  ExactnessReport exactness;
  NodeCensus census;
  bool classification_ok = false;
  bool all_weights_positive = false;
  int nonpositive_weights = 0;
  FeasibilityReport feasibility;
  bool gauss_lobatto = false;
  bool conforming = false;
};

/// Exactness at the claimed precision, census, positivity, bound
/// consistency and the overall verdict on the positive-weight form.
inline AuditReport audit(const TriangleRule& r, double tolerance = tol::verify) {
  AuditReport a;
  a.exactness = verify_exactness(r, r.precision, tolerance);
  a.census = census_of(r);
  a.classification_ok = a.census.offenders.empty();
  for (const auto& n : detail::flatten(r)) {
    if (!(n.w > 0.0)) ++a.nonpositive_weights;
  }
  if (r.corner_count() == 0) a.nonpositive_weights -= 3;
  a.all_weights_positive = a.nonpositive_weights == 0;
  a.feasibility = check_feasibility(a.census.budget(std::max(1, r.precision)));
  a.conforming = a.exactness.pass && a.classification_ok && a.all_weights_positive &&
                 a.feasibility.feasible() && a.census.corners == 3;
  if (a.conforming && r.precision % 2 == 1) {
    const int n = (r.precision + 1) / 2;
    a.gauss_lobatto = a.census.n0 == n * (n - 1) / 2 && a.census.n1 == n - 1 &&
                      a.census.n2 == n - 1 && a.census.n3 == n - 1;
  }
  return a;
}

}  // namespace trilobatto
