#pragma once

// End-to-end construction: solve for an interior rule, build the boundary
// rule from it, retry with the next seed when a candidate leads nowhere.

#include <cstdint>
#include <optional>
#include <string>

#include "trilobatto/assembly.hpp"
#include "trilobatto/bounds.hpp"
#include "trilobatto/error.hpp"
#include "trilobatto/interior.hpp"
#include "trilobatto/moments.hpp"
#include "trilobatto/rule.hpp"
#include "trilobatto/verify.hpp"

namespace trilobatto {

struct ConstructOptions {
  int precision = 5;
  JacobiExponents weight;
  bool symmetric = false;
  bool even = false;          ///< precision 2n via quasi-orthogonal edges
  double fixed_node = 0.5;
  std::uint64_t seed = 0;
  int interior_nodes = 0;     ///< 0: the default count for the mode
  std::optional<OrbitLayout> orbits;
  double tolerance = tol::verify;
  int attempts = 1000;        ///< interior rules tried before giving up
};

/// Degree of the interior rule a given precision needs.
inline int interior_degree(const ConstructOptions& o) {
  if (o.even) {
    if (o.precision < 4 || o.precision % 2 != 0) {
      fail(ErrorKind::parameter, "even construction needs an even precision >= 4");
    }
    return o.precision - 3;
  }
  if (o.precision < 3 || o.precision % 2 != 1) {
    fail(ErrorKind::parameter, "precision must be odd and >= 3 (even precisions use the even variant)");
  }
  return o.precision - 3;
}

/// Interior node count used when none is requested: n(n-1)/2 for precision
/// 2n-1, the interior lower bound for even precision.
inline int default_interior_nodes(const ConstructOptions& o) {
  if (o.even) return interior_lower_bound(o.precision);
  const int n = (o.precision + 1) / 2;
  return n * (n - 1) / 2;
}

/// Boundary rule from one interior rule according to the requested mode.
inline TriangleRule build_from(const InteriorRule& step1, const ConstructOptions& o) {
  if (o.even) return build_even_degree(step1, o.weight, o.fixed_node, o.tolerance);
  if (o.symmetric) {
    TriangleRule r = expand_symmetric(build_symmetric(step1, o.weight, o.tolerance));
    r.meta.tolerance = o.tolerance;
    return r;
  }
  return build_lobatto(step1, o.weight, o.tolerance);
}

/// Failures that depend on the particular interior rule rather than on the
/// request, so another start may succeed.
inline bool retryable(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::indefinite_functional:
    case ErrorKind::node_placement:
    case ErrorKind::positivity:
    case ErrorKind::non_gaussian_spectrum:
    case ErrorKind::parameter_degeneracy:
    case ErrorKind::degenerate_geometry:
    case ErrorKind::verification_failed:
      return true;
    default:
      return false;
  }
}

namespace detail {

/// Degree-0 rule with one node: the mean point of `w` carrying its mass.
inline InteriorRule one_point_rule(const JacobiExponents& w) {
  const double total = w.alpha + w.beta + w.gamma + 3.0;
  return {w, 0, {{(w.alpha + 1.0) / total, (w.beta + 1.0) / total}},
          {triangle_moment({0, 0}, w)}};
}

inline void stamp(TriangleRule& r, double tolerance) {
  const AuditReport rep = audit(r, tolerance);
  r.meta.conforming = rep.conforming;
  if (rep.gauss_lobatto) r.meta.add_tag("gauss-lobatto");
}

}  // namespace detail

/// Builds from a given interior rule.
inline TriangleRule construct(const ConstructOptions& o, const InteriorRule& step1) {
  require_valid(o.weight);
  const int degree = interior_degree(o);
  if (step1.degree != degree) {
    fail(ErrorKind::parameter, "interior rule has degree " + std::to_string(step1.degree) +
                                   ", precision " + std::to_string(o.precision) + " needs " +
                                   std::to_string(degree));
  }
  TriangleRule r = build_from(step1, o);
  detail::stamp(r, o.tolerance);
  return r;
}

/// Solves for interior rules starting at `o.seed`; the first one whose
/// boundary construction succeeds is kept and its seed recorded. A single
/// degree-0 node is placed at the mean point instead, with no seed.
inline TriangleRule construct(const ConstructOptions& o) {
  require_valid(o.weight);
  const int degree = interior_degree(o);
  const int count = o.interior_nodes > 0 ? o.interior_nodes : default_interior_nodes(o);
  if (o.attempts < 1) fail(ErrorKind::parameter, "attempts must be positive");
  if (degree == 0 && count == 1) return construct(o, detail::one_point_rule(o.weight.bubble()));
  SolveOptions opt;
  opt.seed = o.seed;
  if (o.symmetric) opt.orbits = o.orbits ? *o.orbits : OrbitLayout::for_node_count(count);

  std::optional<Error> last;
  for (int attempt = 0; attempt < o.attempts; ++attempt) {
    const MomentSolution sol = solve_moment_equations(o.weight.bubble(), degree, count, opt);
    try {
      TriangleRule r = build_from(sol.rule, o);
      r.meta.seed = sol.seed;
      detail::stamp(r, o.tolerance);
      return r;
    } catch (const Error& e) {
      if (!retryable(e.kind())) throw;
      last = e;
      opt.seed = sol.seed + 1;
    }
  }
  throw *last;
}

}  // namespace trilobatto
