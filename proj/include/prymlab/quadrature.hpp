#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "prymlab/surface.hpp"

namespace prym {

// Path in the x-plane with (y, w) tracked at every refined vertex.
struct SheetHistory {
  std::vector<cplx> x, y, w;
  std::size_t size() const { return x.size(); }
  CoverPoint back() const { return {x.back(), y.back(), w.back()}; }
  CoverPoint front() const { return {x.front(), y.front(), w.front()}; }
};

namespace gk {
// 15-point Kronrod nodes on [-1, 1] (non-negative half) with Kronrod and Gauss weights.
inline constexpr std::array<double, 8> xk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                             0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                             0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                             0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                             0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                             0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                             0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                             0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk

struct QuadOptions {
  double rel_tol = 1e-10;
  int max_subdiv = 1 << 14;
};

// Integrates f(x, y, w) dx along a sheet history. F returns Vec<cplx, M>.
// Sheets at interior nodes follow the endpoint values by nearest-branch selection.
template <int M, class F>
Vec<cplx, M> integrate_history(const Surface& s, const SheetHistory& h, F&& f, const QuadOptions& opt = {}) {
  using V = Vec<cplx, M>;
  V total = V::Zero();
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    const cplx xa = h.x[i], xb = h.x[i + 1], ya = h.y[i], yb = h.y[i + 1], wa = h.w[i], wb = h.w[i + 1];
    const cplx dx = xb - xa;
    auto eval = [&](double t) -> V {
      cplx x = xa + t * dx;
      cplx y = sqrt_near(s.P(x), ya + t * (yb - ya));
      cplx w = sqrt_near(s.N(x), wa + t * (wb - wa));
      return f(x, y, w) * dx;
    };
    struct Piece {
      double t0, t1;
    };
    std::vector<Piece> stack{{0.0, 1.0}};
    V seg = V::Zero();
    int used = 0;
    while (!stack.empty()) {
      Piece p = stack.back();
      stack.pop_back();
      const double c = 0.5 * (p.t0 + p.t1), hw = 0.5 * (p.t1 - p.t0);
      V fc = eval(c);
      V K = fc * gk::wk[7], G = fc * gk::wg[3];
      double l1 = fc.cwiseAbs().maxCoeff() * gk::wk[7];
      for (int j = 0; j < 7; ++j) {
        V f1 = eval(c - hw * gk::xk[j]), f2 = eval(c + hw * gk::xk[j]);
        K += gk::wk[j] * (f1 + f2);
        l1 += gk::wk[j] * (f1.cwiseAbs().maxCoeff() + f2.cwiseAbs().maxCoeff());
        if (j % 2 == 1) G += gk::wg[j / 2] * (f1 + f2);
      }
      K *= hw;
      G *= hw;
      l1 *= hw;
      const double err = (K - G).cwiseAbs().maxCoeff();
      if (err <= std::max(opt.rel_tol * l1, 1e-300) || hw < 1e-15) {
        seg += K;
        continue;
      }
      if (++used > opt.max_subdiv) throw Error(Err::PrecisionLoss, "quadrature subdivision budget exhausted");
      // right half pushed first so the left half is summed first
      stack.push_back({c, p.t1});
      stack.push_back({p.t0, c});
    }
    total += seg;
  }
  return total;
}

}  // namespace prym
