#pragma once

// Cubature rules on the triangle with interior nodes, nodes on each of the
// three edges, and the three corners:
//   sum lambda_k f(x_k, y_k) + sum over edges + mu0 f(0,0) + mu1 f(1,0) + mu2 f(0,1)

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trilobatto/bounds.hpp"
#include "trilobatto/functionals.hpp"
#include "trilobatto/interior.hpp"
#include "trilobatto/moments.hpp"
#include "trilobatto/tolerances.hpp"

namespace trilobatto {

struct WeightedPoint {
  Point2 point;
  double weight = 0.0;
};

/// A node on an edge, by its edge parameter: (t, 0) on edge_y0, (0, t) on
/// edge_x0 and (t, 1 - t) on edge_diag.
struct EdgeNode {
  double t = 0.0;
  double weight = 0.0;
};

constexpr Point2 edge_point(EdgeLabel e, double t) noexcept {
  switch (e) {
    case EdgeLabel::edge_y0: return {t, 0.0};
    case EdgeLabel::edge_x0: return {0.0, t};
    case EdgeLabel::edge_diag: return {t, 1.0 - t};
  }
  return {};
}

/// Corner order of the weights mu0, mu1, mu2.
inline constexpr std::array<Point2, 3> corner_points{
    Point2{0.0, 0.0}, Point2{1.0, 0.0}, Point2{0.0, 1.0}};

struct RuleMeta {
  std::optional<bool> conforming;
  std::vector<std::string> tags;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;

  [[nodiscard]] bool has_tag(const std::string& tag) const {
    for (const auto& t : tags) {
      if (t == tag) return true;
    }
    return false;
  }
  void add_tag(const std::string& tag) {
    if (!has_tag(tag)) tags.push_back(tag);
  }
};

struct TriangleRule {
  JacobiExponents weight;
  int precision = 0;
  std::vector<WeightedPoint> interior;
  std::array<std::vector<EdgeNode>, 3> edges;
  std::array<double, 3> corners{0.0, 0.0, 0.0};
  RuleMeta meta;

  [[nodiscard]] std::vector<EdgeNode>& edge(EdgeLabel e) { return edges[index_of(e)]; }
  [[nodiscard]] const std::vector<EdgeNode>& edge(EdgeLabel e) const {
    return edges[index_of(e)];
  }
  [[nodiscard]] int corner_count() const noexcept {
    return corners == std::array<double, 3>{0.0, 0.0, 0.0} ? 0 : 3;
  }
  [[nodiscard]] int node_count() const noexcept {
    return static_cast<int>(interior.size() + edges[0].size() + edges[1].size() +
                            edges[2].size()) +
           corner_count();
  }
  [[nodiscard]] NodeBudget budget() const noexcept {
    return {static_cast<int>(interior.size()), static_cast<int>(edges[0].size()),
            static_cast<int>(edges[1].size()), static_cast<int>(edges[2].size()),
            corner_count(), precision};
  }
  /// Every node with its weight: interior, edges in label order, corners.
  [[nodiscard]] std::vector<WeightedPoint> all_nodes() const {
    std::vector<WeightedPoint> out = interior;
    for (const EdgeLabel e : all_edges) {
      for (const auto& n : edge(e)) out.push_back({edge_point(e, n.t), n.weight});
    }
    if (corner_count() > 0) {
      for (std::size_t c = 0; c < 3; ++c) out.push_back({corner_points[c], corners[c]});
    }
    return out;
  }
};

/// (u, v, A): A times f at (u, v), (v, w), (w, u) with w = 1 - u - v.
struct InteriorOrbit {
  double u = 0.0;
  double v = 0.0;
  double weight = 0.0;
};

/// (u, B): B times f at (u, 0), (0, 1 - u), (1 - u, u).
struct EdgeOrbit {
  double u = 0.0;
  double weight = 0.0;
};

/// A rule invariant under permutations of (x, y, 1 - x - y), stored by
/// rotation orbits.
struct SymmetricRule {
  JacobiExponents weight;
  int precision = 0;
  std::vector<InteriorOrbit> interior_orbits;
  std::vector<EdgeOrbit> edge_orbits;
  double corner_weight = 0.0;
};

namespace detail {

inline void merge_into(std::vector<WeightedPoint>& pts, Point2 p, double w) {
  for (auto& q : pts) {
    if (distance(q.point, p) <= tol::orbit_merge) {
      q.weight += w;
      return;
    }
  }
  pts.push_back({p, w});
}

inline void merge_into(std::vector<EdgeNode>& nodes, double t, double w) {
  for (auto& n : nodes) {
    if (std::abs(n.t - t) <= tol::orbit_merge) {
      n.weight += w;
      return;
    }
  }
  nodes.push_back({t, w});
}

}  // namespace detail

/// Explicit orbit expansion; coincident orbit members are merged.
inline TriangleRule expand_symmetric(const SymmetricRule& r) {
  TriangleRule out;
  out.weight = r.weight;
  out.precision = r.precision;
  for (const auto& o : r.interior_orbits) {
    const double w = 1.0 - o.u - o.v;
    for (const Point2 p : {Point2{o.u, o.v}, Point2{o.v, w}, Point2{w, o.u}}) {
      detail::merge_into(out.interior, p, o.weight);
    }
  }
  for (const auto& o : r.edge_orbits) {
    detail::merge_into(out.edge(EdgeLabel::edge_y0), o.u, o.weight);
    detail::merge_into(out.edge(EdgeLabel::edge_x0), 1.0 - o.u, o.weight);
    detail::merge_into(out.edge(EdgeLabel::edge_diag), 1.0 - o.u, o.weight);
  }
  out.corners = {r.corner_weight, r.corner_weight, r.corner_weight};
  out.meta.add_tag("symmetric");
  return out;
}

}  // namespace trilobatto
