#pragma once

#include "prymlab/periods.hpp"
#include "prymlab/theta.hpp"

namespace prym {

// B(x,z) = K_alg(x,z) + sum_jk c_jk u_j(x) u_k(z) with u = (1/y, x/y), coefficient of dx dz.
struct BergmanKernel {
  Mat2c c = Mat2c::Zero();
  Mat2c vnorm, Omega;
  std::array<CoverPoint, 2> samples;
  // (F(x,z)^2 - 4 p(x) p(z)) / (x - z)^2, coefficient of x^i z^j
  Mat<cplx, 10, 10> G = Mat<cplx, 10, 10>::Zero();
};

// Symmetric algebraic kernel with the biresidue-1 double pole on the diagonal and no other poles.
cplx klein_kernel(const Surface& s, const CoverPoint& a, const CoverPoint& b);

// The correction is fixed by vanishing a-periods, sampled at two points.
// Default samples: x0 and x0 + 0.3 sep (1 + i).
BergmanKernel make_bergman(const Surface& s, const Marking& m, const PeriodData& pd,
                           const std::array<cplx, 2>* sample_x = nullptr, const QuadOptions& opt = {});

// Throws DiagonalTooClose when the points share a sheet and |x - z| < 1e-6 sep.
cplx bidifferential(const Surface& s, const BergmanKernel& K, const CoverPoint& a, const CoverPoint& b);

// a-periods in z of B(pt, z), one per base a-cycle
Vec2c bergman_a_periods(const Surface& s, const Marking& m, const BergmanKernel& K, const CoverPoint& pt,
                        const QuadOptions& opt = {});

// Closed form of the finite diagonal term, x-chart.
cplx s_bergman(const Surface& s, const BergmanKernel& K, cplx x);

struct DiagonalLimit {
  cplx value;
  double rel_gap;  // between the eps and eps/2 estimates
};
// 6 lim (B - 1/(x-z)^2) by symmetric offsets eps, eps/2 and Richardson. eps < 0: 1e-3 sep.
// Throws ExtrapolationUnstable if the two estimates differ by more than 1e-5 relative.
DiagonalLimit s_bergman_richardson(const Surface& s, const BergmanKernel& K, const CoverPoint& pt, double eps = -1.0);

// q-hat = (S_B - S_v)/(2Q) and u = -(q-hat + 1), x-chart representatives.
cplx qhat(const Surface& s, const BergmanKernel& K, cplx x);
inline cplx potential_u(const Surface& s, const BergmanKernel& K, cplx x) { return -(qhat(s, K, x) + 1.0); }

// h = B^2 / (Q(x) Q(y))
cplx h_kernel(const Surface& s, const BergmanKernel& K, const CoverPoint& a, const CoverPoint& b);

// Quadratic differential sum_jk W_jk v_j v_k in normalized v, coefficient of dx^2.
cplx quad_in_v(const PeriodData& pd, const Mat2c& W, cplx x, cplx y);

// S_B^sigma - S_B = -12 pi i sum v_j v_k d log det(C Omega + D)/d Omega_jk, as coefficients W.
Mat2c sb_transform_coeffs(const Mat2c& Omega, const SpSigma& sigma);

inline cplx wirtinger_constant_printed() { return 48.0 * 4.0 * kPi * kI / (4.0 + 16.0); }
inline cplx wirtinger_constant_consistent() { return 48.0 * kPi * kI / (4.0 + 16.0); }

// S_W - S_B as coefficients in v_j v_k.
Mat2c wirtinger_delta(const Mat2c& Omega, cplx constant = wirtinger_constant_printed());

}  // namespace prym
