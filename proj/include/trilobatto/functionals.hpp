#pragma once

// Univariate boundary functionals: for each edge, the integral of g times
// the edge's bubble factor minus the interior nodes' share, e.g. on y = 0
//   L g = int g(x) x z W - sum lambda_k x_k z_k g(x_k).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "trilobatto/error.hpp"
#include "trilobatto/interior.hpp"
#include "trilobatto/moments.hpp"
#include "trilobatto/tolerances.hpp"

namespace trilobatto {

enum class EdgeLabel { edge_y0 = 0, edge_x0 = 1, edge_diag = 2 };

inline constexpr std::array<EdgeLabel, 3> all_edges{
    EdgeLabel::edge_y0, EdgeLabel::edge_x0, EdgeLabel::edge_diag};

constexpr std::string_view to_string(EdgeLabel e) noexcept {
  switch (e) {
    case EdgeLabel::edge_y0: return "edge_y0";
    case EdgeLabel::edge_x0: return "edge_x0";
    case EdgeLabel::edge_diag: return "edge_diag";
  }
  return "edge";
}

constexpr std::size_t index_of(EdgeLabel e) noexcept {
  return static_cast<std::size_t>(e);
}

/// A linear functional on univariate polynomials, known by its moments
/// mu_k = L(t^k), k = 0..max_exact_degree(). When `support`/`masses` are
/// set, L g = sum masses[i] g(support[i]) exactly through the same degree;
/// recurrences then avoid the ill-conditioned monomial moments.
struct MomentFunctional {
  std::vector<double> moments;
  EdgeLabel edge = EdgeLabel::edge_y0;
  std::vector<double> support;
  std::vector<double> masses;

  [[nodiscard]] bool discrete() const noexcept {
    return !support.empty() && support.size() == masses.size();
  }

  [[nodiscard]] int max_exact_degree() const noexcept {
    return static_cast<int>(moments.size()) - 1;
  }
  [[nodiscard]] double max_abs_moment() const noexcept {
    double m = 0.0;
    for (double v : moments) m = std::max(m, std::abs(v));
    return m;
  }
  /// L(p) for ascending coefficients.
  [[nodiscard]] double apply(const std::vector<double>& coeffs) const {
    if (static_cast<int>(coeffs.size()) > static_cast<int>(moments.size())) {
      fail(ErrorKind::parameter, "polynomial degree exceeds available moments");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * moments[k];
    return s;
  }
};

/// Gauss-Jacobi rule with n nodes for t^p (1-t)^q on [0,1], scaled to total
/// mass `total`. Exact through degree 2n-1.
inline std::pair<std::vector<double>, std::vector<double>> gauss_jacobi(int n, double p,
                                                                      double q, double total) {
  if (n < 1 || !(p > -1.0) || !(q > -1.0)) fail(ErrorKind::parameter, "bad Gauss-Jacobi request");
  // Jacobi (a, b) on [-1, 1] with weight (1-x)^a (1+x)^b; t = (1+x)/2.
  const double a = q;
  const double b = p;
  const double ab = a + b;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double c = 2.0 * k + ab;
    const double alpha = k == 0 ? (b - a) / (ab + 2.0) : (b * b - a * a) / (c * (c + 2.0));
    j(k, k) = (1.0 + alpha) / 2.0;
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double d = 2.0 * m + ab;
      const double beta =
          m == 1.0 ? 4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0))
                   : 4.0 * m * (m + a) * (m + b) * (m + ab) / (d * d * (d + 1.0) * (d - 1.0));
      j(k, k + 1) = j(k + 1, k) = std::sqrt(beta) / 2.0;
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  std::vector<double> nodes(static_cast<std::size_t>(n));
  std::vector<double> weights(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    nodes[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    weights[static_cast<std::size_t>(k)] = total * v * v;
  }
  return {nodes, weights};
}

/// Boundary functional of one edge, built from a degree-(s-3) interior rule
/// for the bubble weight of `base`. The interior weights are shifted back
/// to the final rule's weights before use.
inline MomentFunctional boundary_functional(const InteriorRule& rule,
                                            const JacobiExponents& base,
                                            EdgeLabel which, int m_max) {
  require_valid(base);
  if (!(rule.weight == base.bubble())) {
    fail(ErrorKind::parameter, "interior rule weight " + describe(rule.weight) +
                                   " is not the bubble weight of " +
                                   describe(base));
  }
  if (m_max < 0) fail(ErrorKind::parameter, "m_max must be nonnegative");
  const std::vector<double> lambda = shift_weights_in(rule);

  MomentFunctional out{{}, which};
  out.moments.reserve(static_cast<std::size_t>(m_max) + 1);
  for (int k = 0; k <= m_max; ++k) {
    double integral = 0.0;
    double discrete = 0.0;
    for (std::size_t n = 0; n < rule.size(); ++n) {
      const Point2 p = rule.nodes[n];
      switch (which) {
        case EdgeLabel::edge_y0:
          discrete += lambda[n] * p.x * p.z() * std::pow(p.x, k);
          break;
        case EdgeLabel::edge_x0:
          discrete += lambda[n] * p.y * p.z() * std::pow(p.y, k);
          break;
        case EdgeLabel::edge_diag:
          discrete += lambda[n] * p.x * p.y * std::pow(p.x, k);
          break;
      }
    }
    switch (which) {
      case EdgeLabel::edge_y0:
        integral = triangle_moment({k, 0}, base.bumped(1, 0, 1));
        break;
      case EdgeLabel::edge_x0:
        integral = triangle_moment({0, k}, base.bumped(0, 1, 1));
        break;
      case EdgeLabel::edge_diag:
        integral = triangle_moment({k, 0}, base.bumped(1, 1, 0));
        break;
    }
    out.moments.push_back(integral - discrete);
  }

  // The integral part reduces to t^p (1-t)^q on [0,1]; sample it exactly.
  double p = 0.0;
  double q = 0.0;
  JacobiExponents bumped = base;
  switch (which) {
    case EdgeLabel::edge_y0:
      p = base.alpha + 1.0;
      q = base.beta + base.gamma + 2.0;
      bumped = base.bumped(1, 0, 1);
      break;
    case EdgeLabel::edge_x0:
      p = base.beta + 1.0;
      q = base.alpha + base.gamma + 2.0;
      bumped = base.bumped(0, 1, 1);
      break;
    case EdgeLabel::edge_diag:
      p = base.alpha + 1.0;
      q = base.beta + base.gamma + 2.0;
      bumped = base.bumped(1, 1, 0);
      break;
  }
  auto [nodes, weights] = gauss_jacobi(m_max / 2 + 2, p, q, triangle_moment({0, 0}, bumped));
  out.support = std::move(nodes);
  out.masses = std::move(weights);
  for (std::size_t n = 0; n < rule.size(); ++n) {
    const Point2 pt = rule.nodes[n];
    switch (which) {
      case EdgeLabel::edge_y0:
        out.support.push_back(pt.x);
        out.masses.push_back(-lambda[n] * pt.x * pt.z());
        break;
      case EdgeLabel::edge_x0:
        out.support.push_back(pt.y);
        out.masses.push_back(-lambda[n] * pt.y * pt.z());
        break;
      case EdgeLabel::edge_diag:
        out.support.push_back(pt.x);
        out.masses.push_back(-lambda[n] * pt.x * pt.y);
        break;
    }
  }
  return out;
}

struct DefinitenessResult {
  bool positive_definite = false;
  /// Index of the first pivot not exceeding the threshold, if any.
  std::optional<int> failing_pivot;
  std::vector<double> pivots;

  explicit operator bool() const noexcept { return positive_definite; }
};

/// LDL^T of the Hankel matrix H[r][c] = mu_{r+c}, 0 <= r, c <= degree; all
/// pivots must exceed 1e-13 * max|mu|.
inline DefinitenessResult is_positive_definite(const MomentFunctional& l, int degree) {
  if (degree < 0 || 2 * degree > l.max_exact_degree()) {
    fail(ErrorKind::parameter, "positive definiteness to degree " +
                                   std::to_string(degree) + " needs moments through " +
                                   std::to_string(2 * degree));
  }
  const int size = degree + 1;
  double scale = 0.0;
  for (int k = 0; k <= 2 * degree; ++k) scale = std::max(scale, std::abs(l.moments[k]));
  const double threshold = tol::positive_definite * scale;

  Eigen::MatrixXd h(size, size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) h(r, c) = l.moments[r + c];
  }
  DefinitenessResult result;
  // Unpivoted Gaussian elimination; pivots are the D of H = L D L^T.
  for (int k = 0; k < size; ++k) {
    const double pivot = h(k, k);
    result.pivots.push_back(pivot);
    if (!(pivot > threshold)) {
      result.failing_pivot = k;
      return result;
    }
    for (int r = k + 1; r < size; ++r) {
      const double f = h(r, k) / pivot;
      for (int c = k; c < size; ++c) h(r, c) -= f * h(k, c);
    }
  }
  result.positive_definite = true;
  return result;
}

}  // namespace trilobatto
