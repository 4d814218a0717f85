#pragma once

#include <random>

#include "prymlab/surface.hpp"

namespace prym::test {

inline Surface example_surface() {
  CurveSpec cs{{-2, -1, 0, 1, 2, 3}};
  QDiffSpec q{{2.0, kI, 1.0}};
  return validate_surface(cs, q);
}

// points at distance >= 0.3 from every singular point, inside a box around the roots
inline std::vector<cplx> random_points(const Surface& s, int n, unsigned seed = 7) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> re(-2.5, 3.5), im(-2.5, 2.5);
  std::vector<cplx> out;
  while (int(out.size()) < n) {
    cplx x(re(rng), im(rng));
    if (s.dist_singular(x) > 0.3) out.push_back(x);
  }
  return out;
}

}  // namespace prym::test
