#pragma once

// Boundary-node rules from interior rules:
//  1. an interior rule of degree s-3 for the bubble weight gives the
//     interior nodes, with weights shifted by 1 / (x y z);
//  2. each edge functional's quadrature gives that edge's nodes, with
//     weights shifted by 1 / (t (1 - t));
//  3. the corner weights make the rule exact on 1, x, y.

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "trilobatto/error.hpp"
#include "trilobatto/functionals.hpp"
#include "trilobatto/interior.hpp"
#include "trilobatto/rule.hpp"
#include "trilobatto/tolerances.hpp"
#include "trilobatto/univariate.hpp"
#include "trilobatto/verify.hpp"

namespace trilobatto {

namespace detail {

inline void require_step1(const InteriorRule& step1, const JacobiExponents& base) {
  require_valid(base);
  if (!(step1.weight == base.bubble())) {
    fail(ErrorKind::parameter, "interior rule is for " + describe(step1.weight) +
                                   ", expected the bubble weight " +
                                   describe(base.bubble()));
  }
  if (step1.nodes.size() != step1.weights.size()) {
    fail(ErrorKind::precondition, "interior rule node and weight counts differ");
  }
  for (std::size_t k = 0; k < step1.size(); ++k) {
    if (!step1.nodes[k].strictly_inside()) {
      fail(ErrorKind::precondition,
           "interior rule node " + std::to_string(k) + " is not strictly inside the triangle");
    }
  }
  const auto issues = interior_rule_issues(step1);
  if (!issues.empty()) {
    fail(ErrorKind::precondition, "interior rule rejected: " + issues.front());
  }
}

inline MomentFunctional checked_functional(const InteriorRule& step1,
                                           const JacobiExponents& base, EdgeLabel e,
                                           int m_max, int pd_degree) {
  MomentFunctional l = boundary_functional(step1, base, e, m_max);
  const DefinitenessResult pd = is_positive_definite(l, pd_degree);
  if (!pd) {
    fail(ErrorKind::indefinite_functional,
         std::string(to_string(e)) + " functional is indefinite (Hankel pivot " +
             std::to_string(*pd.failing_pivot) + ")");
  }
  return l;
}

inline std::vector<EdgeNode> unshift_edge(const EdgeQuadrature& q) {
  std::vector<EdgeNode> out;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double t = q.nodes[k];
    if (!(t > tol::containment && t < 1.0 - tol::containment)) {
      fail(ErrorKind::node_placement, std::string(to_string(q.edge)) + " node " +
                                          std::to_string(t) + " lies outside (0, 1)");
    }
    out.push_back({t, q.star_weights[k] / (t * (1.0 - t))});
  }
  return out;
}

/// Corner weights from exactness on 1, x, y given every other node.
inline std::array<double, 3> solve_corners(const TriangleRule& r) {
  const std::array<MonomialIndex, 3> basis{MonomialIndex{0, 0}, MonomialIndex{1, 0},
                                           MonomialIndex{0, 1}};
  TriangleRule without = r;
  without.corners = {0.0, 0.0, 0.0};
  Eigen::Matrix3d a;
  Eigen::Vector3d rhs;
  for (int row = 0; row < 3; ++row) {
    const MonomialIndex m = basis[row];
    for (int c = 0; c < 3; ++c) {
      a(row, c) = std::pow(corner_points[c].x, m.i) * std::pow(corner_points[c].y, m.j);
    }
    rhs(row) = triangle_moment(m, r.weight) - apply_rule(without, BivariatePoly::monomial(m));
  }
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
  if (lu.rank() < 3) {
    std::ostringstream os;
    os << "singular corner system:\n" << a;
    fail(ErrorKind::degenerate_geometry, os.str());
  }
  const Eigen::Vector3d mu = lu.solve(rhs);
  return {mu(0), mu(1), mu(2)};
}

inline void finish(TriangleRule& r, double tolerance) {
  bool positive = true;
  for (const auto& n : r.all_nodes()) positive = positive && n.weight > 0.0;
  r.meta.conforming = positive;
  if (!positive) r.meta.add_tag("negative-weights");
  r.meta.tolerance = tolerance;
  const ExactnessReport rep = verify_exactness(r, r.precision, tolerance);
  if (!rep.pass) {
    fail(ErrorKind::verification_failed,
         "assembled rule fails exactness at degree " + std::to_string(r.precision) +
             " (max relative error " + std::to_string(rep.max_error) + " on x^" +
             std::to_string(rep.worst.i) + " y^" + std::to_string(rep.worst.j) + ")");
  }
}

inline TriangleRule interior_part(const InteriorRule& step1, const JacobiExponents& base,
                                  int precision) {
  TriangleRule r;
  r.weight = base;
  r.precision = precision;
  const std::vector<double> lambda = shift_weights_in(step1);
  for (std::size_t k = 0; k < step1.size(); ++k) {
    r.interior.push_back({step1.nodes[k], lambda[k]});
  }
  return r;
}

}  // namespace detail

/// Degree 2n-1 rule with n-1 nodes per edge from a degree 2n-4 interior rule
/// for the bubble weight of `base`. Throws unless the result verifies.
inline TriangleRule build_lobatto(const InteriorRule& step1, const JacobiExponents& base,
                                  double tolerance = tol::verify) {
  detail::require_step1(step1, base);
  if (step1.degree < 0 || step1.degree % 2 != 0) {
    fail(ErrorKind::parameter, "interior rule degree must be even (2n - 4)");
  }
  const int n = step1.degree / 2 + 2;
  TriangleRule r = detail::interior_part(step1, base, 2 * n - 1);
  for (const EdgeLabel e : all_edges) {
    const MomentFunctional l = detail::checked_functional(step1, base, e, 2 * n - 2, n - 1);
    r.edge(e) = detail::unshift_edge(gaussian_quadrature(l, n - 1));
  }
  r.corners = detail::solve_corners(r);
  if (static_cast<int>(step1.size()) == n * (n - 1) / 2) r.meta.add_tag("gauss-lobatto");
  detail::finish(r, tolerance);
  return r;
}

/// Symmetric variant: one edge functional serves all three edges and a
/// single corner weight follows from exactness on 1.
inline SymmetricRule build_symmetric(const InteriorRule& step1, const JacobiExponents& base,
                                     double tolerance = tol::verify) {
  if (!base.symmetric()) {
    fail(ErrorKind::parameter, "symmetric construction needs alpha = beta = gamma");
  }
  detail::require_step1(step1, base);
  if (step1.degree < 0 || step1.degree % 2 != 0) {
    fail(ErrorKind::parameter, "interior rule degree must be even (2n - 4)");
  }
  const int n = step1.degree / 2 + 2;
  const std::vector<double> lambda = shift_weights_in(step1);

  SymmetricRule sym;
  sym.weight = base;
  sym.precision = 2 * n - 1;

  // Split the interior nodes into rotation orbits.
  const auto find = [&](Point2 p) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < step1.size(); ++k) {
      if (distance(step1.nodes[k], p) <= tol::distinct) return k;
    }
    return std::nullopt;
  };
  std::vector<bool> used(step1.size(), false);
  for (std::size_t k = 0; k < step1.size(); ++k) {
    if (used[k]) continue;
    const Point2 p = step1.nodes[k];
    if (distance(p, p.rotated()) <= tol::distinct) {
      used[k] = true;
      sym.interior_orbits.push_back({p.x, p.y, lambda[k] / 3.0});
      continue;
    }
    const auto k1 = find(p.rotated());
    const auto k2 = find(p.rotated().rotated());
    if (!k1 || !k2 || used[*k1] || used[*k2] ||
        std::abs(lambda[*k1] - lambda[k]) > 1e-10 * lambda[k] ||
        std::abs(lambda[*k2] - lambda[k]) > 1e-10 * lambda[k]) {
      fail(ErrorKind::parameter, "interior rule is not invariant under rotation");
    }
    used[k] = used[*k1] = used[*k2] = true;
    sym.interior_orbits.push_back({p.x, p.y, lambda[k]});
  }

  const MomentFunctional l =
      detail::checked_functional(step1, base, EdgeLabel::edge_y0, 2 * n - 2, n - 1);
  const auto edge = detail::unshift_edge(gaussian_quadrature(l, n - 1));
  for (std::size_t k = 0; k < edge.size(); ++k) {
    const auto& mirror = edge[edge.size() - 1 - k];
    if (std::abs(edge[k].t + mirror.t - 1.0) > tol::verify ||
        std::abs(edge[k].weight - mirror.weight) > tol::verify * edge[k].weight) {
      fail(ErrorKind::verification_failed, "edge quadrature is not symmetric about 1/2");
    }
    sym.edge_orbits.push_back({edge[k].t, edge[k].weight});
  }

  double rest = 0.0;
  for (std::size_t k = 0; k < step1.size(); ++k) rest += lambda[k];
  for (const auto& o : sym.edge_orbits) rest += 3.0 * o.weight;
  sym.corner_weight = (triangle_moment({0, 0}, base) - rest) / 3.0;

  TriangleRule expanded = expand_symmetric(sym);
  for (const MonomialIndex m : {MonomialIndex{1, 0}, MonomialIndex{0, 1}}) {
    const double exact = triangle_moment(m, base);
    if (std::abs(apply_rule(expanded, BivariatePoly::monomial(m)) - exact) > 1e-12 * exact) {
      fail(ErrorKind::verification_failed, "symmetric corner weight misses a linear moment");
    }
  }
  detail::finish(expanded, tolerance);
  return sym;
}

/// Degree 2n rule with n nodes per edge from a degree 2n-3 interior rule;
/// each edge quadrature contains `fixed_node`. Negative weights mark the
/// rule non-conforming but do not abort.
inline TriangleRule build_even_degree(const InteriorRule& step1, const JacobiExponents& base,
                                      double fixed_node = 0.5,
                                      double tolerance = tol::verify) {
  detail::require_step1(step1, base);
  if (step1.degree < 1 || step1.degree % 2 != 1) {
    fail(ErrorKind::parameter, "interior rule degree must be odd (2n - 3)");
  }
  const int n = (step1.degree + 3) / 2;
  TriangleRule r = detail::interior_part(step1, base, 2 * n);
  for (const EdgeLabel e : all_edges) {
    const MomentFunctional l = detail::checked_functional(step1, base, e, 2 * n - 1, n - 1);
    r.edge(e) = detail::unshift_edge(quasi_orthogonal_even(l, n, fixed_node));
  }
  r.corners = detail::solve_corners(r);
  r.meta.add_tag("even-degree");
  detail::finish(r, tolerance);
  return r;
}

}  // namespace trilobatto
