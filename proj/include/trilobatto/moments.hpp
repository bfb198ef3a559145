#pragma once

// Closed-form moments of the Jacobi weights x^a y^b (1-x-y)^c on the unit
// triangle {x >= 0, y >= 0, x + y <= 1}, plus monomial bookkeeping.

#include <cmath>
#include <compare>
#include <string>
#include <vector>

#include "trilobatto/error.hpp"

namespace trilobatto {

/// Exponents of W(x,y) = x^alpha y^beta (1-x-y)^gamma. Each must exceed -1.
struct JacobiExponents {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  [[nodiscard]] bool valid() const noexcept {
    return alpha > -1.0 && beta > -1.0 && gamma > -1.0;
  }
  [[nodiscard]] bool symmetric() const noexcept {
    return alpha == beta && beta == gamma;
  }
  [[nodiscard]] JacobiExponents bumped(double da, double db,
                                       double dc) const noexcept {
    return {alpha + da, beta + db, gamma + dc};
  }
  /// Weight of the bubble-function reduction: multiply by x y (1-x-y).
  [[nodiscard]] JacobiExponents bubble() const noexcept {
    return bumped(1.0, 1.0, 1.0);
  }

  friend bool operator==(const JacobiExponents&,
                         const JacobiExponents&) = default;
};

inline std::string describe(const JacobiExponents& w) {
  return "W(" + std::to_string(w.alpha) + ", " + std::to_string(w.beta) +
         ", " + std::to_string(w.gamma) + ")";
}

inline void require_valid(const JacobiExponents& w) {
  if (!w.valid()) {
    fail(ErrorKind::parameter,
         "Jacobi exponents must all exceed -1, got " + describe(w));
  }
}

/// x^i y^j.
struct MonomialIndex {
  int i = 0;
  int j = 0;

  [[nodiscard]] constexpr int degree() const noexcept { return i + j; }

  friend constexpr auto operator<=>(const MonomialIndex&,
                                    const MonomialIndex&) = default;
};

/// dim of the bivariate polynomials of total degree <= n: (n+1)(n+2)/2.
constexpr int dim_poly_space(int n) noexcept { return (n + 1) * (n + 2) / 2; }

/// All x^i y^j with i + j <= degree, ordered by degree, then by falling i.
inline std::vector<MonomialIndex> monomials_up_to(int degree) {
  std::vector<MonomialIndex> out;
  if (degree < 0) return out;
  out.reserve(static_cast<std::size_t>(dim_poly_space(degree)));
  for (int d = 0; d <= degree; ++d) {
    for (int j = 0; j <= d; ++j) out.push_back({d - j, j});
  }
  return out;
}

/// Dirichlet integral of x^a y^b (1-x-y)^c over the triangle, each
/// exponent > -1: Gamma(a+1) Gamma(b+1) Gamma(c+1) / Gamma(a+b+c+3).
inline double dirichlet_integral(double a, double b, double c) {
  // tgamma keeps a few ulps; exp(lgamma) loses digits as the logs grow.
  if (a + b + c + 3.0 < 160.0) {
    return std::tgamma(a + 1.0) / std::tgamma(a + b + c + 3.0) * std::tgamma(b + 1.0) *
           std::tgamma(c + 1.0);
  }
  return std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) +
                  std::lgamma(c + 1.0) - std::lgamma(a + b + c + 3.0));
}

/// Integral of x^i y^j W_{alpha,beta,gamma}(x,y) over the triangle.
inline double triangle_moment(MonomialIndex m, const JacobiExponents& w) {
  require_valid(w);
  if (m.i < 0 || m.j < 0) {
    fail(ErrorKind::parameter, "monomial exponents must be nonnegative");
  }
  return dirichlet_integral(m.i + w.alpha, m.j + w.beta, w.gamma);
}

/// Power table [1, v, v^2, ..., v^n] by repeated multiplication.
inline std::vector<double> powers(double v, int n) {
  std::vector<double> p(static_cast<std::size_t>(n) + 1, 1.0);
  for (int k = 1; k <= n; ++k) p[k] = p[k - 1] * v;
  return p;
}

}  // namespace trilobatto
