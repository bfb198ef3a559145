#pragma once

// Orthogonal polynomials of a moment functional, their zeros, and the
// Gaussian / quasi-orthogonal quadratures they generate.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "trilobatto/error.hpp"
#include "trilobatto/functionals.hpp"
#include "trilobatto/tolerances.hpp"

namespace trilobatto {

/// t^d + c_{d-1} t^{d-1} + ... + c_0; `coeffs` holds c_0..c_{d-1}.
struct MonicPoly {
  std::vector<double> coeffs;

  [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs.size()); }

  [[nodiscard]] double operator()(double t) const noexcept {
    double v = 1.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
    return v;
  }
  [[nodiscard]] double derivative(double t) const noexcept {
    const int d = degree();
    double v = d;
    for (int k = d - 1; k >= 1; --k) v = v * t + k * coeffs[k];
    return v;
  }
  /// Ascending coefficients including the leading 1.
  [[nodiscard]] std::vector<double> full() const {
    std::vector<double> f = coeffs;
    f.push_back(1.0);
    return f;
  }
  [[nodiscard]] double max_abs_coefficient() const noexcept {
    double m = 1.0;
    for (double c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }
};

/// p_{k+1} = (t - alpha_k) p_k - beta_k p_{k-1}, with norms h_k = L(p_k^2).
struct Recurrence {
  std::vector<MonicPoly> polys;  ///< p_0..p_m
  std::vector<double> alpha;     ///< alpha_0..alpha_{m-1}
  std::vector<double> beta;      ///< beta_0 = h_0, beta_k = h_k / h_{k-1}
  std::vector<double> norms;     ///< h_0..h_{m-1}, and h_m when available
};

namespace detail {

inline std::vector<double> poly_mul(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

inline double pd_threshold(const MomentFunctional& l) {
  return tol::positive_definite * l.max_abs_moment();
}

[[noreturn]] inline void indefinite(const MomentFunctional& l, int degree) {
  fail(ErrorKind::indefinite_functional,
       std::string(to_string(l.edge)) + " functional is not positive definite: L(p_" +
           std::to_string(degree) + "^2) <= threshold");
}

}  // namespace detail

/// Stieltjes procedure on the moment sequence. Needs moments through 2m-1;
/// h_m is also checked when mu_{2m} is available.
inline Recurrence orthogonal_recurrence(const MomentFunctional& l, int m) {
  if (m < 0 || 2 * m - 1 > l.max_exact_degree()) {
    fail(ErrorKind::parameter, "p_" + std::to_string(m) + " needs moments through " +
                                   std::to_string(2 * m - 1));
  }
  const double threshold = detail::pd_threshold(l);
  const bool check_last = 2 * m <= l.max_exact_degree();
  Recurrence rec;
  rec.polys.push_back(MonicPoly{});
  std::vector<double> prev;               // p_{k-1}, full ascending
  std::vector<double> cur{1.0};           // p_k
  const std::vector<double> t{0.0, 1.0};

  // Values of p_{k-1}, p_k on the support when L is given as point masses.
  const std::size_t npts = l.discrete() ? l.support.size() : 0;
  std::vector<double> vprev(npts, 0.0);
  std::vector<double> vcur(npts, 1.0);
  const auto norm_and_shift = [&](double& h, double& ht, bool shift) {
    if (npts == 0) {
      const std::vector<double> sq = detail::poly_mul(cur, cur);
      h = l.apply(sq);
      if (shift) ht = l.apply(detail::poly_mul(t, sq));
      return;
    }
    h = 0.0;
    ht = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
      const double w = l.masses[i] * vcur[i] * vcur[i];
      h += w;
      ht += w * l.support[i];
    }
  };

  for (int k = 0; k < m; ++k) {
    double h = 0.0;
    double ht = 0.0;
    norm_and_shift(h, ht, true);
    if (!(h > threshold)) detail::indefinite(l, k);
    const double a = ht / h;
    const double b = k == 0 ? h : h / rec.norms.back();
    rec.norms.push_back(h);
    rec.alpha.push_back(a);
    rec.beta.push_back(b);

    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += cur[i];
      next[i] -= a * cur[i];
    }
    if (k > 0) {
      for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= b * prev[i];
    }
    for (std::size_t i = 0; i < npts; ++i) {
      const double v = (l.support[i] - a) * vcur[i] - (k > 0 ? b * vprev[i] : 0.0);
      vprev[i] = vcur[i];
      vcur[i] = v;
    }
    prev = std::move(cur);
    cur = std::move(next);
    rec.polys.push_back(MonicPoly{{cur.begin(), cur.end() - 1}});
  }
  if (check_last) {
    double h = 0.0;
    double ht = 0.0;
    norm_and_shift(h, ht, false);
    if (!(h > threshold)) detail::indefinite(l, m);
    rec.norms.push_back(h);
  }
  return rec;
}

/// Monic p_0..p_m orthogonal for a positive-definite functional.
inline std::vector<MonicPoly> orthogonal_polynomials(const MomentFunctional& l, int m) {
  return orthogonal_recurrence(l, m).polys;
}

namespace detail {

/// Newton refinement; keeps the iterate with the smallest |p|.
inline double polish_root(const MonicPoly& p, double r) {
  double best = r;
  double best_val = std::abs(p(r));
  for (int it = 0; it < tol::newton_polish_iterations && best_val > 0.0; ++it) {
    const double d = p.derivative(r);
    if (d == 0.0 || !std::isfinite(d)) break;
    r -= p(r) / d;
    const double v = std::abs(p(r));
    if (!(v < best_val)) break;
    best = r;
    best_val = v;
  }
  return best;
}

inline std::vector<double> finish_roots(const MonicPoly& p, std::vector<double> roots) {
  for (double& r : roots) r = polish_root(p, r);
  std::sort(roots.begin(), roots.end());
  const double accept = tol::zero * p.max_abs_coefficient();
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (!(std::abs(p(roots[k])) <= accept)) {
      fail(ErrorKind::non_gaussian_spectrum,
           "root " + std::to_string(roots[k]) + " did not polish to a zero");
    }
    if (k > 0 && roots[k] - roots[k - 1] <= tol::distinct * std::max(1.0, std::abs(roots[k]))) {
      fail(ErrorKind::non_gaussian_spectrum, "multiple root near " + std::to_string(roots[k]));
    }
  }
  return roots;
}

}  // namespace detail

/// Real, simple roots of p in ascending order, via companion-matrix
/// eigenvalues and Newton polish.
inline std::vector<double> real_roots(const MonicPoly& p) {
  const int d = p.degree();
  if (d < 1) fail(ErrorKind::parameter, "real_roots needs degree >= 1");
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int k = 1; k < d; ++k) companion(k, k - 1) = 1.0;
  for (int k = 0; k < d; ++k) companion(k, d - 1) = -p.coeffs[k];
  const Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  if (es.info() != Eigen::Success) {
    fail(ErrorKind::non_gaussian_spectrum, "companion eigenvalue iteration failed");
  }
  std::vector<double> roots;
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto ev = es.eigenvalues()(k);
    if (std::abs(ev.imag()) > 1e-8 * std::max(1.0, std::abs(ev))) {
      fail(ErrorKind::non_gaussian_spectrum,
           "complex root " + std::to_string(ev.real()) + " +/- " +
               std::to_string(std::abs(ev.imag())) + "i");
    }
    roots.push_back(ev.real());
  }
  return detail::finish_roots(p, std::move(roots));
}

/// Zeros of p_m as eigenvalues of the symmetric tridiagonal Jacobi matrix.
inline std::vector<double> jacobi_roots(const Recurrence& rec, int m) {
  if (m < 1 || static_cast<int>(rec.alpha.size()) < m) {
    fail(ErrorKind::parameter, "recurrence too short for p_" + std::to_string(m));
  }
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    j(k, k) = rec.alpha[k];
    if (k + 1 < m) {
      j(k, k + 1) = j(k + 1, k) = std::sqrt(rec.beta[k + 1]);
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  return detail::finish_roots(rec.polys[m], {ev.data(), ev.data() + ev.size()});
}

/// Nodes in (0,1) and the star weights of a quadrature for one edge
/// functional.
struct EdgeQuadrature {
  std::vector<double> nodes;
  std::vector<double> star_weights;
  EdgeLabel edge = EdgeLabel::edge_y0;
  int exact_degree = 0;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
  [[nodiscard]] int negative_weight_count() const noexcept {
    return static_cast<int>(std::count_if(star_weights.begin(), star_weights.end(),
                                          [](double w) { return w < 0.0; }));
  }
};

namespace detail {

/// Weights from the Vandermonde system on mu_0..mu_{n-1}, then a check of
/// every moment through `exact_degree`.
inline std::vector<double> vandermonde_weights(const MomentFunctional& l,
                                               const std::vector<double>& nodes,
                                               int exact_degree) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd v(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) v(k, i) = std::pow(nodes[i], static_cast<int>(k));
    rhs(k) = l.moments[k];
  }
  const Eigen::VectorXd w = v.fullPivLu().solve(rhs);
  std::vector<double> weights(w.data(), w.data() + w.size());
  for (int k = 0; k <= exact_degree; ++k) {
    double sum = 0.0;
    double mag = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double term = weights[i] * std::pow(nodes[i], k);
      sum += term;
      mag += std::abs(term);
    }
    const double scale = std::max({std::abs(l.moments[k]), mag, tol::relative_floor});
    if (!(std::abs(sum - l.moments[k]) <= tol::quadrature * scale)) {
      fail(ErrorKind::verification_failed,
           std::string(to_string(l.edge)) + " quadrature misses moment " +
               std::to_string(k) + " (error " + std::to_string(std::abs(sum - l.moments[k])) +
               ")");
    }
  }
  return weights;
}

}  // namespace detail

/// m-node Gaussian quadrature, exact through degree 2m-1.
inline EdgeQuadrature gaussian_quadrature(const MomentFunctional& l, int m) {
  if (m < 1) fail(ErrorKind::parameter, "node count must be positive");
  const Recurrence rec = orthogonal_recurrence(l, m);
  EdgeQuadrature q;
  q.edge = l.edge;
  q.exact_degree = 2 * m - 1;
  q.nodes = jacobi_roots(rec, m);
  for (double t : q.nodes) {
    if (!(t > tol::containment && t < 1.0 - tol::containment)) {
      fail(ErrorKind::node_placement, std::string(to_string(l.edge)) + " node " +
                                          std::to_string(t) + " lies outside (0, 1)");
    }
  }
  q.star_weights = detail::vandermonde_weights(l, q.nodes, q.exact_degree);
  for (double w : q.star_weights) {
    if (!(w > 0.0)) {
      fail(ErrorKind::positivity,
           std::string(to_string(l.edge)) + " quadrature has a nonpositive weight");
    }
  }
  return q;
}

/// n-node quadrature from q_n = p_n + a p_{n-1} with q_n(fixed_node) = 0,
/// exact through degree 2n-2. Weights may be negative.
inline EdgeQuadrature quasi_orthogonal_even(const MomentFunctional& l, int n,
                                           double fixed_node = 0.5) {
  if (n < 1) fail(ErrorKind::parameter, "node count must be positive");
  const Recurrence rec = orthogonal_recurrence(l, n);
  const MonicPoly& pn = rec.polys[n];
  const MonicPoly& pm = rec.polys[n - 1];
  const double at = pm(fixed_node);
  if (std::abs(at) <= tol::zero * pm.max_abs_coefficient()) {
    fail(ErrorKind::parameter_degeneracy,
         "p_" + std::to_string(n - 1) + " vanishes at the fixed node " +
             std::to_string(fixed_node));
  }
  const double a = -pn(fixed_node) / at;
  MonicPoly qn = pn;
  for (std::size_t k = 0; k < pm.coeffs.size(); ++k) qn.coeffs[k] += a * pm.coeffs[k];
  qn.coeffs[pm.coeffs.size()] += a;  // leading 1 of p_{n-1}

  EdgeQuadrature q;
  q.edge = l.edge;
  q.exact_degree = 2 * n - 2;
  q.nodes = real_roots(qn);
  q.star_weights = detail::vandermonde_weights(l, q.nodes, q.exact_degree);
  return q;
}

}  // namespace trilobatto
