#pragma once

// All-interior cubature rules: moment-equation solving (plain and
// symmetric), common zeros of bivariate polynomials, weight fitting for
// given nodes, and the bubble weight shift lambda = lambda* / (x y z).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <map>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "trilobatto/error.hpp"
#include "trilobatto/moments.hpp"
#include "trilobatto/polynomial.hpp"
#include "trilobatto/tolerances.hpp"

namespace trilobatto {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  [[nodiscard]] double z() const noexcept { return 1.0 - x - y; }
  /// Smallest barycentric coordinate.
  [[nodiscard]] double min_barycentric() const noexcept {
    return std::min({x, y, z()});
  }
  [[nodiscard]] bool strictly_inside(double tau = tol::containment) const noexcept {
    return x > tau && y > tau && z() > tau;
  }
  /// The rotation (x, y) -> (y, 1 - x - y) of the barycentric coordinates.
  [[nodiscard]] Point2 rotated() const noexcept { return {y, z()}; }

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Nodes strictly inside the triangle with weights, exact through `degree`
/// for `weight`.
struct InteriorRule {
  JacobiExponents weight;
  int degree = 0;
  std::vector<Point2> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

struct MomentResidual {
  double max_abs = 0.0;     ///< max |sum - moment|
  double max_moment = 0.0;  ///< max |moment|
  MonomialIndex worst{};
};

/// Weighted node sums minus exact moments over all monomials of total
/// degree <= `degree`.
inline MomentResidual moment_residual(const std::vector<Point2>& nodes,
                                      const std::vector<double>& weights,
                                      int degree, const JacobiExponents& w) {
  MomentResidual r;
  for (const MonomialIndex m : monomials_up_to(degree)) {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      s += weights[k] * std::pow(nodes[k].x, m.i) * std::pow(nodes[k].y, m.j);
    }
    const double exact = triangle_moment(m, w);
    r.max_moment = std::max(r.max_moment, std::abs(exact));
    if (std::abs(s - exact) > r.max_abs) {
      r.max_abs = std::abs(s - exact);
      r.worst = m;
    }
  }
  return r;
}

/// Reasons a candidate violates the InteriorRule invariants; empty if valid.
inline std::vector<std::string> interior_rule_issues(const InteriorRule& rule,
                                                     double eps = tol::verify) {
  std::vector<std::string> issues;
  if (!rule.weight.valid()) issues.push_back("invalid Jacobi exponents");
  if (rule.nodes.size() != rule.weights.size()) {
    issues.push_back("node and weight counts differ");
    return issues;
  }
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const Point2 p = rule.nodes[k];
    if (!p.strictly_inside()) {
      issues.push_back("node " + std::to_string(k) + " not strictly interior");
    }
    if (!(rule.weights[k] > 0.0)) {
      issues.push_back("weight " + std::to_string(k) + " not positive");
    }
    for (std::size_t l = 0; l < k; ++l) {
      if (distance(p, rule.nodes[l]) <= tol::distinct) {
        issues.push_back("nodes " + std::to_string(l) + " and " +
                         std::to_string(k) + " collide");
      }
    }
  }
  if (rule.weight.valid() && rule.degree >= 0) {
    // Relative, monomial by monomial.
    for (const MonomialIndex m : monomials_up_to(rule.degree)) {
      double s = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        s += rule.weights[k] * std::pow(rule.nodes[k].x, m.i) *
             std::pow(rule.nodes[k].y, m.j);
      }
      const double exact = triangle_moment(m, rule.weight);
      if (std::abs(s - exact) > eps * std::abs(exact)) {
        issues.push_back("not exact on x^" + std::to_string(m.i) + " y^" +
                         std::to_string(m.j));
        break;
      }
    }
  }
  return issues;
}

inline void require_valid_interior_rule(const InteriorRule& rule) {
  const auto issues = interior_rule_issues(rule);
  if (!issues.empty()) {
    fail(ErrorKind::rejected_solution, "invalid interior rule: " + issues.front());
  }
}

/// lambda_k = lambda*_k / (x_k y_k (1 - x_k - y_k)).
inline std::vector<double> shift_weights_in(const InteriorRule& rule) {
  std::vector<double> out;
  out.reserve(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const Point2 p = rule.nodes[k];
    if (!p.strictly_inside()) {
      fail(ErrorKind::division_hazard,
           "interior node " + std::to_string(k) +
               " has a barycentric coordinate <= tolerance");
    }
    out.push_back(rule.weights[k] / (p.x * p.y * p.z()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weight fitting for fixed nodes

/// Least-squares weights matching every moment of degree <= `degree`.
/// Accepted only if the moment residual is at the solver tolerance.
inline InteriorRule weights_from_nodes(const std::vector<Point2>& nodes,
                                       int degree, const JacobiExponents& w) {
  require_valid(w);
  if (nodes.empty()) fail(ErrorKind::parameter, "no nodes supplied");
  if (degree < 0) fail(ErrorKind::parameter, "degree must be nonnegative");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      if (distance(nodes[k], nodes[l]) <= tol::distinct) {
        fail(ErrorKind::parameter, "nodes are not distinct");
      }
    }
  }
  const auto mons = monomials_up_to(degree);
  const auto rows = static_cast<Eigen::Index>(mons.size());
  const auto cols = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double exact = triangle_moment(mons[r], w);
    for (Eigen::Index c = 0; c < cols; ++c) {
      a(r, c) = std::pow(nodes[c].x, mons[r].i) *
                std::pow(nodes[c].y, mons[r].j) / exact;
    }
    b(r) = 1.0;
  }
  const Eigen::VectorXd sol = a.completeOrthogonalDecomposition().solve(b);
  InteriorRule rule{w, degree, nodes, {sol.data(), sol.data() + sol.size()}};

  const auto res = moment_residual(rule.nodes, rule.weights, degree, w);
  if (!(res.max_abs <= tol::solve * res.max_moment)) {
    fail(ErrorKind::unsupported_degree,
         "nodes do not support a rule of degree " + std::to_string(degree) +
             " (residual " + std::to_string(res.max_abs) + ")");
  }
  for (std::size_t k = 0; k < rule.size(); ++k) {
    if (!(rule.weights[k] > 0.0)) {
      fail(ErrorKind::rejected_solution,
           "fitted weight " + std::to_string(k) + " is not positive");
    }
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Common zeros

/// All points where every polynomial vanishes. Multi-start Newton runs on
/// the first two polynomials; the rest filter. Result sorted by (y, x).
inline std::vector<Point2> common_zeros(const std::vector<BivariatePoly>& polys,
                                        int expected_count) {
  if (polys.size() < 2) {
    fail(ErrorKind::parameter, "common_zeros needs at least two polynomials");
  }
  for (const auto& p : polys) {
    if (p.degree() < 1) {
      fail(ErrorKind::parameter, "common_zeros needs polynomials of degree >= 1");
    }
  }
  const auto accepted = [&](Point2 pt) {
    for (const auto& p : polys) {
      if (!(std::abs(p(pt.x, pt.y)) <=
            tol::zero * std::max(1.0, p.max_abs_coefficient()))) {
        return false;
      }
    }
    return true;
  };
  const auto newton_step = [&](Point2& pt) {
    const auto g0 = polys[0].gradient(pt.x, pt.y);
    const auto g1 = polys[1].gradient(pt.x, pt.y);
    const double det = g0[0] * g1[1] - g0[1] * g1[0];
    const double scale = std::hypot(g0[0], g0[1]) * std::hypot(g1[0], g1[1]);
    if (!(std::abs(det) > 1e-14 * scale) || !std::isfinite(det)) return false;
    const double f0 = polys[0](pt.x, pt.y);
    const double f1 = polys[1](pt.x, pt.y);
    pt.x -= (f0 * g1[1] - f1 * g0[1]) / det;
    pt.y -= (g0[0] * f1 - g1[0] * f0) / det;
    return std::isfinite(pt.x) && std::isfinite(pt.y);
  };

  constexpr int grid = 21;
  constexpr double lo = -1.0;
  constexpr double hi = 2.0;
  std::vector<Point2> found;
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      Point2 pt{lo + (hi - lo) * (a + 0.5) / grid, lo + (hi - lo) * (b + 0.5) / grid};
      bool ok = true;
      for (int it = 0; it < 60 && ok; ++it) {
        const Point2 before = pt;
        ok = newton_step(pt);
        if (ok && distance(before, pt) <= 1e-15 * (1.0 + std::hypot(pt.x, pt.y))) break;
      }
      if (!ok) continue;
      for (int it = 0; it < tol::newton_polish_iterations && ok; ++it) {
        if (accepted(pt)) break;
        ok = newton_step(pt);
      }
      if (!ok || !accepted(pt)) continue;
      const bool seen = std::any_of(found.begin(), found.end(), [&](Point2 q) {
        return distance(q, pt) <= tol::distinct;
      });
      if (!seen) found.push_back(pt);
    }
  }
  std::sort(found.begin(), found.end(), [](Point2 a, Point2 b) {
    if (std::abs(a.y - b.y) > 1e-9) return a.y < b.y;
    return a.x < b.x;
  });
  if (static_cast<int>(found.size()) != expected_count) {
    fail(ErrorKind::zero_count, "expected " + std::to_string(expected_count) +
                                    " common zeros, found " +
                                    std::to_string(found.size()));
  }
  return found;
}

// ---------------------------------------------------------------------------
// Moment-equation solving

/// Orbit structure of a rule invariant under permutations of (x, y, 1-x-y):
/// a centroid node, median orbits (u, u, 1-2u) of size 3 and generic orbits
/// of size 6.
struct OrbitLayout {
  int center = 0;
  int median = 0;
  int generic = 0;

  [[nodiscard]] int node_count() const noexcept {
    return center + 3 * median + 6 * generic;
  }
  [[nodiscard]] int unknowns() const noexcept {
    return center + 2 * median + 3 * generic;
  }
  /// Centroid when count = 1 mod 3, median orbits for the rest.
  static OrbitLayout for_node_count(int count) {
    if (count < 1 || count % 3 == 2) {
      fail(ErrorKind::parameter, "no default orbit layout for " +
                                     std::to_string(count) + " nodes");
    }
    return {count % 3, count / 3, 0};
  }
};

/// Polynomial in the barycentric coordinates (x, y, z = 1 - x - y),
/// sum c_ijk x^i y^j z^k.
class BarycentricPoly {
 public:
  using Exponents = std::array<int, 3>;

  static BarycentricPoly one() {
    BarycentricPoly p;
    p.terms_[{0, 0, 0}] = 1.0;
    return p;
  }

  [[nodiscard]] const std::map<Exponents, double>& terms() const noexcept { return terms_; }

  [[nodiscard]] double operator()(double x, double y, double z) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      s += c * std::pow(x, e[0]) * std::pow(y, e[1]) * std::pow(z, e[2]);
    }
    return s;
  }

  /// Partial derivatives in x, y, z treated as independent.
  [[nodiscard]] std::array<double, 3> gradient(double x, double y, double z) const {
    std::array<double, 3> g{0.0, 0.0, 0.0};
    const std::array<double, 3> v{x, y, z};
    for (const auto& [e, c] : terms_) {
      for (int d = 0; d < 3; ++d) {
        if (e[d] == 0) continue;
        double t = c * e[d];
        for (int o = 0; o < 3; ++o) t *= std::pow(v[o], o == d ? e[o] - 1 : e[o]);
        g[d] += t;
      }
    }
    return g;
  }

  /// Integral against W over the triangle; every term is a Dirichlet
  /// integral, so positive coefficients never cancel.
  [[nodiscard]] double integrate(const JacobiExponents& w) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      s += c * dirichlet_integral(e[0] + w.alpha, e[1] + w.beta, e[2] + w.gamma);
    }
    return s;
  }

  friend BarycentricPoly operator*(const BarycentricPoly& a, const BarycentricPoly& b) {
    BarycentricPoly r;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        r.terms_[{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
      }
    }
    return r;
  }

  static BarycentricPoly from_terms(std::map<Exponents, double> terms) {
    BarycentricPoly p;
    p.terms_ = std::move(terms);
    return p;
  }

 private:
  std::map<Exponents, double> terms_;
};

/// e2^a e3^b with 2a + 3b <= degree, e2 = xy + yz + zx and e3 = xyz: a basis
/// of the symmetric polynomials of degree <= degree.
inline std::vector<BarycentricPoly> symmetric_basis(int degree) {
  const auto e2 = BarycentricPoly::from_terms({{{1, 1, 0}, 1.0}, {{0, 1, 1}, 1.0}, {{1, 0, 1}, 1.0}});
  const auto e3 = BarycentricPoly::from_terms({{{1, 1, 1}, 1.0}});
  std::vector<BarycentricPoly> basis;
  for (int b = 0; 3 * b <= degree; ++b) {
    for (int a = 0; 2 * a + 3 * b <= degree; ++a) {
      BarycentricPoly f = BarycentricPoly::one();
      for (int k = 0; k < a; ++k) f = f * e2;
      for (int k = 0; k < b; ++k) f = f * e3;
      basis.push_back(std::move(f));
    }
  }
  return basis;
}

struct MomentSolution {
  InteriorRule rule;
  std::uint64_t seed = 0;  ///< seed of the accepted start
  int attempts = 0;        ///< starts consumed, including the accepted one
  double residual = 0.0;   ///< max |moment residual|
};

struct SolveOptions {
  std::uint64_t seed = 0;
  int restarts = tol::solver_restarts;
  int max_iterations = tol::solver_iterations;
  std::optional<OrbitLayout> orbits;  ///< set for the symmetric solve
};

namespace detail {

/// Reproducible uniform [0, 1) draws independent of the standard library's
/// distribution implementations.
class UnitStream {
 public:
  explicit UnitStream(std::uint64_t seed) : engine_(seed) {}
  double operator()() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  Point2 in_triangle() {
    double a = (*this)();
    double b = (*this)();
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    return {a, b};
  }

 private:
  std::mt19937_64 engine_;
};

/// Unknowns (x_k, y_k, w_k) per node; one equation per monomial.
class PlainSystem {
 public:
  PlainSystem(const JacobiExponents& w, int degree, int nodes)
      : weight_(w), degree_(degree), nodes_(nodes), mons_(monomials_up_to(degree)) {
    for (const auto m : mons_) targets_.push_back(triangle_moment(m, w));
  }

  [[nodiscard]] Eigen::Index unknowns() const { return 3 * nodes_; }

  Eigen::VectorXd start(UnitStream& rng) const {
    Eigen::VectorXd p(unknowns());
    for (int k = 0; k < nodes_; ++k) {
      const Point2 q = rng.in_triangle();
      p(3 * k) = q.x;
      p(3 * k + 1) = q.y;
      p(3 * k + 2) = targets_.front() / nodes_;
    }
    return p;
  }

  /// Residuals divided by the target moment.
  Eigen::VectorXd residual(const Eigen::VectorXd& p) const {
    Eigen::VectorXd r(static_cast<Eigen::Index>(mons_.size()));
    for (std::size_t e = 0; e < mons_.size(); ++e) {
      double s = 0.0;
      for (int k = 0; k < nodes_; ++k) {
        s += p(3 * k + 2) * std::pow(p(3 * k), mons_[e].i) *
             std::pow(p(3 * k + 1), mons_[e].j);
      }
      r(static_cast<Eigen::Index>(e)) = (s - targets_[e]) / targets_[e];
    }
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(mons_.size()), unknowns());
    for (std::size_t e = 0; e < mons_.size(); ++e) {
      const auto row = static_cast<Eigen::Index>(e);
      const int i = mons_[e].i;
      const int j = mons_[e].j;
      for (int k = 0; k < nodes_; ++k) {
        const double x = p(3 * k);
        const double y = p(3 * k + 1);
        const double w = p(3 * k + 2);
        const double xi = std::pow(x, i);
        const double yj = std::pow(y, j);
        jac(row, 3 * k) = i > 0 ? w * i * std::pow(x, i - 1) * yj : 0.0;
        jac(row, 3 * k + 1) = j > 0 ? w * j * xi * std::pow(y, j - 1) : 0.0;
        jac(row, 3 * k + 2) = xi * yj;
      }
      jac.row(row) /= targets_[e];
    }
    return jac;
  }

  InteriorRule rule(const Eigen::VectorXd& p) const {
    InteriorRule r{weight_, degree_, {}, {}};
    for (int k = 0; k < nodes_; ++k) {
      r.nodes.push_back({p(3 * k), p(3 * k + 1)});
      r.weights.push_back(p(3 * k + 2));
    }
    return r;
  }

 private:
  JacobiExponents weight_;
  int degree_;
  int nodes_;
  std::vector<MonomialIndex> mons_;
  std::vector<double> targets_;
};

/// Unknowns are orbit parameters and per-member weights; one equation per
/// symmetric basis polynomial.
class SymmetricSystem {
 public:
  SymmetricSystem(const JacobiExponents& w, int degree, OrbitLayout layout)
      : weight_(w), degree_(degree), layout_(layout), basis_(symmetric_basis(degree)) {
    for (const auto& f : basis_) targets_.push_back(f.integrate(w));
  }

  [[nodiscard]] Eigen::Index unknowns() const { return layout_.unknowns(); }
  [[nodiscard]] std::size_t equations() const { return basis_.size(); }

  Eigen::VectorXd start(UnitStream& rng) const {
    Eigen::VectorXd p(unknowns());
    const double w0 = targets_.front() / layout_.node_count();
    Eigen::Index at = 0;
    if (layout_.center) p(at++) = w0;
    for (int k = 0; k < layout_.median; ++k) {
      p(at++) = 0.5 * rng();
      p(at++) = w0;
    }
    for (int k = 0; k < layout_.generic; ++k) {
      const Point2 q = rng.in_triangle();
      p(at++) = q.x;
      p(at++) = q.y;
      p(at++) = w0;
    }
    return p;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& p) const {
    Eigen::VectorXd r(static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      const auto& f = basis_[e];
      double s = 0.0;
      Eigen::Index at = 0;
      if (layout_.center) s += p(at++) * f(third, third, third);
      for (int k = 0; k < layout_.median; ++k, at += 2) {
        s += 3.0 * p(at + 1) * f(p(at), p(at), 1.0 - 2.0 * p(at));
      }
      for (int k = 0; k < layout_.generic; ++k, at += 3) {
        s += 6.0 * p(at + 2) * f(p(at), p(at + 1), 1.0 - p(at) - p(at + 1));
      }
      r(static_cast<Eigen::Index>(e)) = (s - targets_[e]) / targets_[e];
    }
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(basis_.size()), unknowns());
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      const auto row = static_cast<Eigen::Index>(e);
      const auto& f = basis_[e];
      Eigen::Index at = 0;
      if (layout_.center) {
        jac(row, at) = f(third, third, third);
        ++at;
      }
      for (int k = 0; k < layout_.median; ++k, at += 2) {
        const double u = p(at);
        const auto g = f.gradient(u, u, 1.0 - 2.0 * u);
        jac(row, at) = 3.0 * p(at + 1) * (g[0] + g[1] - 2.0 * g[2]);
        jac(row, at + 1) = 3.0 * f(u, u, 1.0 - 2.0 * u);
      }
      for (int k = 0; k < layout_.generic; ++k, at += 3) {
        const double u = p(at);
        const double v = p(at + 1);
        const auto g = f.gradient(u, v, 1.0 - u - v);
        jac(row, at) = 6.0 * p(at + 2) * (g[0] - g[2]);
        jac(row, at + 1) = 6.0 * p(at + 2) * (g[1] - g[2]);
        jac(row, at + 2) = 6.0 * f(u, v, 1.0 - u - v);
      }
      jac.row(row) /= targets_[e];
    }
    return jac;
  }

  InteriorRule rule(const Eigen::VectorXd& p) const {
    InteriorRule r{weight_, degree_, {}, {}};
    Eigen::Index at = 0;
    if (layout_.center) {
      r.nodes.push_back({1.0 / 3.0, 1.0 / 3.0});
      r.weights.push_back(p(at++));
    }
    for (int k = 0; k < layout_.median; ++k, at += 2) {
      const double u = p(at);
      for (const Point2 q : {Point2{u, u}, Point2{u, 1.0 - 2.0 * u},
                             Point2{1.0 - 2.0 * u, u}}) {
        r.nodes.push_back(q);
        r.weights.push_back(p(at + 1));
      }
    }
    for (int k = 0; k < layout_.generic; ++k, at += 3) {
      const double u = p(at);
      const double v = p(at + 1);
      const double w = 1.0 - u - v;
      for (const Point2 q : {Point2{u, v}, Point2{v, w}, Point2{w, u},
                             Point2{v, u}, Point2{u, w}, Point2{w, v}}) {
        r.nodes.push_back(q);
        r.weights.push_back(p(at + 2));
      }
    }
    return r;
  }

 private:
  JacobiExponents weight_;
  int degree_;
  OrbitLayout layout_;
  std::vector<BarycentricPoly> basis_;
  std::vector<double> targets_;
  static constexpr double third = 1.0 / 3.0;
};

/// Damped Gauss-Newton from one start. Returns true once the full monomial
/// residual of the candidate rule is within the solver tolerance.
template <class System>
bool newton_from(const System& sys, Eigen::VectorXd& p, int max_iterations,
                 const JacobiExponents& w, int degree, double& best) {
  const auto converged = [&](const Eigen::VectorXd& q) {
    const InteriorRule r = sys.rule(q);
    const auto res = moment_residual(r.nodes, r.weights, degree, w);
    best = std::min(best, res.max_abs);
    return res.max_abs <= tol::solve * res.max_moment;
  };
  Eigen::VectorXd r = sys.residual(p);
  double norm = r.norm();
  // Past the acceptance gate, full steps continue while they still shrink
  // the residual, so accepted rules carry close to full binary64 accuracy.
  const auto polish = [&] {
    for (int extra = 0; extra < 8; ++extra) {
      const Eigen::VectorXd step =
          sys.jacobian(p).completeOrthogonalDecomposition().solve(-r);
      const Eigen::VectorXd trial = p + step;
      const Eigen::VectorXd rt = sys.residual(trial);
      if (!step.allFinite() || !(rt.norm() < norm)) break;
      p = trial;
      r = rt;
      norm = rt.norm();
    }
    return true;
  };
  for (int it = 0; it < max_iterations; ++it) {
    if (!std::isfinite(norm)) return false;
    if (norm < 1e-6 && converged(p)) return polish();
    const Eigen::VectorXd step =
        sys.jacobian(p).completeOrthogonalDecomposition().solve(-r);
    if (!step.allFinite()) return false;
    double t = 1.0;
    bool moved = false;
    while (t >= 1.0 / 1024.0) {
      const Eigen::VectorXd trial = p + t * step;
      const Eigen::VectorXd rt = sys.residual(trial);
      const double nt = rt.norm();
      if (std::isfinite(nt) && nt <= (1.0 - 1e-4 * t) * norm) {
        p = trial;
        r = rt;
        norm = nt;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) return converged(p) && polish();
  }
  return converged(p) && polish();
}

template <class System>
MomentSolution multistart(const System& sys, const JacobiExponents& w,
                          int degree, const SolveOptions& opt) {
  double best = std::numeric_limits<double>::infinity();
  std::optional<std::string> first_rejection;
  for (int attempt = 0; attempt < opt.restarts; ++attempt) {
    const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(attempt);
    UnitStream rng(seed);
    Eigen::VectorXd p = sys.start(rng);
    if (!newton_from(sys, p, opt.max_iterations, w, degree, best)) continue;
    InteriorRule rule = sys.rule(p);
    const auto issues = interior_rule_issues(rule);
    if (!issues.empty()) {
      if (!first_rejection) {
        first_rejection = "seed " + std::to_string(seed) + ": " + issues.front();
      }
      continue;
    }
    const auto res = moment_residual(rule.nodes, rule.weights, degree, w);
    return {std::move(rule), seed, attempt + 1, res.max_abs};
  }
  if (first_rejection) {
    fail(ErrorKind::rejected_solution,
         "every converged candidate was rejected; first: " + *first_rejection);
  }
  fail(ErrorKind::construction_failed,
       "no converged solution after " + std::to_string(opt.restarts) +
           " starts; best residual " + std::to_string(best));
}

}  // namespace detail

/// Solves the moment equations for a `node_count`-node interior rule exact
/// through `degree`. With `opt.orbits` set, solves the reduced symmetric
/// system instead (requires alpha = beta = gamma). Starts are tried in seed
/// order seed, seed + 1, ... and the first acceptable candidate wins.
inline MomentSolution solve_moment_equations(const JacobiExponents& w, int degree,
                                             int node_count, const SolveOptions& opt) {
  require_valid(w);
  if (degree < 0) fail(ErrorKind::parameter, "degree must be nonnegative");
  if (node_count < 1) fail(ErrorKind::parameter, "node count must be positive");
  if (opt.orbits) {
    if (!w.symmetric()) {
      fail(ErrorKind::parameter, "symmetric solve needs alpha = beta = gamma");
    }
    const OrbitLayout layout = *opt.orbits;
    if (layout.center < 0 || layout.center > 1 || layout.median < 0 ||
        layout.generic < 0 || layout.node_count() != node_count) {
      fail(ErrorKind::parameter, "orbit layout does not match node count");
    }
    const detail::SymmetricSystem sys(w, degree, layout);
    if (static_cast<std::size_t>(layout.unknowns()) < sys.equations()) {
      fail(ErrorKind::parameter, "orbit layout has fewer unknowns than equations");
    }
    return detail::multistart(sys, w, degree, opt);
  }
  if (3 * node_count < dim_poly_space(degree)) {
    fail(ErrorKind::parameter, "fewer unknowns than moment equations");
  }
  const detail::PlainSystem sys(w, degree, node_count);
  return detail::multistart(sys, w, degree, opt);
}

inline MomentSolution solve_moment_equations(const JacobiExponents& w, int degree,
                                             int node_count, std::uint64_t seed,
                                             bool symmetric) {
  SolveOptions opt;
  opt.seed = seed;
  if (symmetric) opt.orbits = OrbitLayout::for_node_count(node_count);
  return solve_moment_equations(w, degree, node_count, opt);
}

}  // namespace trilobatto
