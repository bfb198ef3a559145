#pragma once

namespace trilobatto::tol {

// All values assume binary64 arithmetic.

/// Moment-equation residual, relative to the largest moment.
inline constexpr double solve = 1e-12;
/// Polynomial value accepted as a zero, scaled by max(1, |coeffs|_inf).
inline constexpr double zero = 1e-11;
/// Default relative tolerance of exactness verification.
inline constexpr double verify = 1e-10;
/// Containment: a barycentric coordinate must exceed this to count as inside.
inline constexpr double containment = 1e-9;
/// Minimal Euclidean separation between two nodes of the same rule.
inline constexpr double distinct = 1e-7;
/// Hankel pivots below this times max|moment| are classed indefinite.
inline constexpr double positive_definite = 1e-13;
/// Quadrature moment reproduction after the Vandermonde solve.
inline constexpr double quadrature = 1e-11;
/// Orbit members closer than this are merged into one node.
inline constexpr double orbit_merge = 1e-10;
/// Relative-error denominators below this fall back to absolute error.
inline constexpr double relative_floor = 1e-30;

inline constexpr int newton_polish_iterations = 10;
inline constexpr int solver_restarts = 1000;
inline constexpr int solver_iterations = 100;

}  // namespace trilobatto::tol
