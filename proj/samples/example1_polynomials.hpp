#pragma once

#include <cmath>
#include <vector>

#include "trilobatto/polynomial.hpp"

namespace trilobatto::samples {

/// Three degree-2 polynomials whose common zeros are the interior nodes of
/// the 12-node degree-5 rule for the constant weight.
inline std::vector<BivariatePoly> example1_polynomials() {
  const double r = std::sqrt(105.0);
  return {
      BivariatePoly{{{0, 0}, 19.0 - r}, {{1, 0}, -91.0 + r}, {{2, 0}, 112.0},
                    {{0, 1}, 2.0 * (-7.0 + r)}},
      BivariatePoly{{{0, 0}, 49.0 - 3.0 * r}, {{1, 0}, -175.0 + 5.0 * r}, {{2, 0}, 112.0},
                    {{0, 1}, -84.0 + 4.0 * r}, {{1, 1}, 224.0}},
      BivariatePoly{{{0, 0}, 154.0 - 6.0 * r}, {{1, 0}, -301.0 + 11.0 * r}, {{2, 0}, 112.0},
                    {{0, 1}, -609.0 + 7.0 * r}, {{1, 1}, 560.0}, {{0, 2}, 560.0}},
  };
}

}  // namespace trilobatto::samples
