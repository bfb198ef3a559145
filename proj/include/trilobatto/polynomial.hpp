#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <map>
#include <utility>

#include "trilobatto/moments.hpp"

namespace trilobatto {

/// Sparse bivariate polynomial sum c_ij x^i y^j.
class BivariatePoly {
 public:
  BivariatePoly() = default;
  BivariatePoly(std::initializer_list<std::pair<const MonomialIndex, double>> terms)
      : terms_(terms) {
    prune();
  }

  static BivariatePoly constant(double c) { return BivariatePoly{{{0, 0}, c}}; }
  static BivariatePoly x() { return BivariatePoly{{{1, 0}, 1.0}}; }
  static BivariatePoly y() { return BivariatePoly{{{0, 1}, 1.0}}; }
  /// 1 - x - y, the third barycentric coordinate.
  static BivariatePoly z() {
    return BivariatePoly{{{0, 0}, 1.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}};
  }
  static BivariatePoly monomial(MonomialIndex m, double c = 1.0) {
    return BivariatePoly{{m, c}};
  }

  [[nodiscard]] const std::map<MonomialIndex, double>& terms() const noexcept {
    return terms_;
  }
  [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }

  /// Largest total degree carrying a nonzero coefficient; -1 for zero.
  [[nodiscard]] int degree() const noexcept {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  [[nodiscard]] double max_abs_coefficient() const noexcept {
    double v = 0.0;
    for (const auto& [m, c] : terms_) v = std::max(v, std::abs(c));
    return v;
  }

  [[nodiscard]] double operator()(double px, double py) const {
    double s = 0.0;
    for (const auto& [m, c] : terms_) {
      s += c * std::pow(px, m.i) * std::pow(py, m.j);
    }
    return s;
  }

  /// (d/dx, d/dy) at a point.
  [[nodiscard]] std::array<double, 2> gradient(double px, double py) const {
    double gx = 0.0;
    double gy = 0.0;
    for (const auto& [m, c] : terms_) {
      if (m.i > 0) gx += c * m.i * std::pow(px, m.i - 1) * std::pow(py, m.j);
      if (m.j > 0) gy += c * m.j * std::pow(px, m.i) * std::pow(py, m.j - 1);
    }
    return {gx, gy};
  }

  BivariatePoly& operator+=(const BivariatePoly& o) {
    for (const auto& [m, c] : o.terms_) terms_[m] += c;
    prune();
    return *this;
  }
  BivariatePoly& operator*=(double s) {
    for (auto& [m, c] : terms_) c *= s;
    prune();
    return *this;
  }

  friend BivariatePoly operator+(BivariatePoly a, const BivariatePoly& b) {
    a += b;
    return a;
  }
  friend BivariatePoly operator-(BivariatePoly a, BivariatePoly b) {
    b *= -1.0;
    a += b;
    return a;
  }
  friend BivariatePoly operator*(BivariatePoly a, double s) {
    a *= s;
    return a;
  }
  friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
    BivariatePoly r;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        r.terms_[{ma.i + mb.i, ma.j + mb.j}] += ca * cb;
      }
    }
    r.prune();
    return r;
  }

 private:
  void prune() {
    std::erase_if(terms_, [](const auto& t) { return t.second == 0.0; });
  }

  std::map<MonomialIndex, double> terms_;
};

inline BivariatePoly pow(const BivariatePoly& p, int k) {
  BivariatePoly r = BivariatePoly::constant(1.0);
  for (int e = 0; e < k; ++e) r = r * p;
  return r;
}

/// Integral of p(x,y) W(x,y) over the triangle by monomial expansion.
inline double integrate(const BivariatePoly& p, const JacobiExponents& w) {
  double s = 0.0;
  for (const auto& [m, c] : p.terms()) s += c * triangle_moment(m, w);
  return s;
}

}  // namespace trilobatto
