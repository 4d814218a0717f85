#pragma once

#include "prymlab/topology.hpp"

namespace prym {

// Raw forms, coefficient of dx: dx/y, x dx/y, w dx/y, dx/(wy), x dx/(wy).
inline Vec<cplx, 5> raw_forms(cplx x, cplx y, cplx w) {
  Vec<cplx, 5> f;
  f << 1.0 / y, x / y, w / y, 1.0 / (w * y), x / (w * y);
  return f;
}

struct PeriodData {
  Mat<cplx, 10, 5> cover_raw;   // raw-form periods over the cover basis
  Mat<cplx, 6, 5> hminus_raw;   // raw-form periods over the H- basis
  Mat2c Aper, Bper;             // a/b periods of dx/y, x dx/y (rows: cycles)
  Mat2c vnorm;                  // v_j = sum_k vnorm(j,k) x^k dx/y
  Mat2c Omega;
  Mat3c PA, PB;                 // a-/b- periods of the raw Prym forms
  Mat3c pnorm;                  // v_l^- = sum_m pnorm(l,m) eta_m
  Mat3c Pi;
  Vec3c A, B;

  Vec6c P() const {
    Vec6c p;
    p << A, B;
    return p;
  }
  double bilinear_residual() const;
};

// Integrals of f over each lift of the marking.
template <int M, class F>
Mat<cplx, Eigen::Dynamic, M> lift_integrals(const Surface& s, const Marking& m, F&& f, const QuadOptions& opt = {}) {
  Mat<cplx, Eigen::Dynamic, M> out(m.lifts.size(), M);
  for (std::size_t k = 0; k < m.lifts.size(); ++k) out.row(k) = integrate_history<M>(s, m.lifts[k], f, opt).transpose();
  return out;
}

template <int M>
Mat<cplx, 10, M> to_cover(const Marking& m, const Mat<cplx, Eigen::Dynamic, M>& lift) {
  return m.cover.cast<cplx>() * lift;
}

template <int M>
Mat<cplx, 6, M> to_hminus(const Marking& m, const Mat<cplx, 10, M>& cover) {
  Mat<cplx, 6, M> out = Mat<cplx, 6, M>::Zero();
  for (int i = 0; i < 6; ++i) {
    for (int p = 0; p < 10; ++p)
      if (m.hminus(i, p).num != 0) out.row(i) += m.hminus(i, p).value() * cover.row(p);
    if (m.inv_sqrt2[i]) out.row(i) /= std::sqrt(2.0);
  }
  return out;
}

// Integrals of f over the six H- basis cycles.
template <int M, class F>
Mat<cplx, 6, M> hminus_integrals(const Surface& s, const Marking& m, F&& f, const QuadOptions& opt = {}) {
  return to_hminus<M>(m, to_cover<M>(m, lift_integrals<M>(s, m, f, opt)));
}

PeriodData compute_periods(const Surface& s, const Marking& m, const QuadOptions& opt = {});

// Normalized holomorphic differentials on the base, coefficient of dx.
inline Vec2c v_normalized(const PeriodData& pd, cplx x, cplx y) { return pd.vnorm * Vec2c(1.0 / y, x / y); }
// Normalized Prym differentials, coefficient of dx.
inline Vec3c v_prym(const PeriodData& pd, cplx x, cplx y, cplx w) {
  return pd.pnorm * Vec3c(w / y, 1.0 / (w * y), x / (w * y));
}

}  // namespace prym
