#include "prymlab/bergman.hpp"

namespace prym {

namespace {

// F(x,z) = sum_k x^k z^k (2 p_2k + p_2k+1 (x + z)), so F(x,x) = 2p and dF/dz(x,x) = p'.
cplx klein_F(const Vec<cplx, 7>& p, cplx x, cplx z) {
  cplx f = 0, xz = 1.0;
  for (int k = 0; k <= 3; ++k) {
    cplx odd = 2 * k + 1 <= 6 ? p[2 * k + 1] : cplx(0.0);
    f += xz * (2.0 * p[2 * k] + odd * (x + z));
    xz *= x * z;
  }
  return f;
}

// d^2/dz^2 F(x,z) at z = x
cplx klein_F2(const Vec<cplx, 7>& p, cplx x) {
  cplx f = 0;
  for (int k = 1; k <= 3; ++k) {
    f += 2.0 * double(k * (k - 1)) * p[2 * k] * std::pow(x, 2 * k - 2);
    if (2 * k + 1 <= 6) f += 2.0 * double(k * k) * p[2 * k + 1] * std::pow(x, 2 * k - 1);
  }
  return f;
}

using Bivar = Mat<cplx, 10, 10>;

// Exact division of a bivariate polynomial vanishing on x = z by (x - z).
Bivar divide_diagonal(const Bivar& d) {
  Bivar q = Bivar::Zero();
  // d = sum_i d_i(z) x^i; q_{i-1} = d_i + z q_i
  for (int i = 9; i >= 1; --i) {
    q.row(i - 1) = d.row(i);
    if (i <= 8)
      for (int j = 9; j >= 1; --j) q(i - 1, j) += q(i, j - 1);
  }
  return q;
}

Bivar diagonal_quotient(const Vec<cplx, 7>& p) {
  Bivar F = Bivar::Zero();
  for (int k = 0; k <= 3; ++k) {
    F(k, k) += 2.0 * p[2 * k];
    if (2 * k + 1 <= 6) {
      F(k + 1, k) += p[2 * k + 1];
      F(k, k + 1) += p[2 * k + 1];
    }
  }
  Bivar D = Bivar::Zero();
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j)
      for (int k = 0; k <= 4; ++k)
        for (int l = 0; l <= 4; ++l) D(i + k, j + l) += F(i, j) * F(k, l);
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 6; ++j) D(i, j) -= 4.0 * p[i] * p[j];
  return divide_diagonal(divide_diagonal(D));
}

cplx eval_bivar(const Bivar& G, cplx x, cplx z) {
  cplx r = 0;
  for (int i = 9; i >= 0; --i) r = r * x + horner(Vec<cplx, 10>(G.row(i).transpose()), z);
  return r;
}

Vec2c u_raw(const CoverPoint& a) { return Vec2c(1.0 / a.y, a.x / a.y); }

}  // namespace

cplx klein_kernel(const Surface& s, const CoverPoint& a, const CoverPoint& b) {
  cplx d = a.x - b.x;
  return (2.0 * a.y * b.y + klein_F(s.p, a.x, b.x)) / (4.0 * a.y * b.y * d * d);
}

BergmanKernel make_bergman(const Surface& s, const Marking& m, const PeriodData& pd,
                           const std::array<cplx, 2>* sample_x, const QuadOptions& opt) {
  BergmanKernel K;
  K.vnorm = pd.vnorm;
  K.Omega = pd.Omega;
  K.G = diagonal_quotient(s.p);
  std::array<cplx, 2> xs = sample_x ? *sample_x : std::array<cplx, 2>{s.x0, s.x0 + 0.3 * s.sep_all * cplx(1, 1)};
  for (int j = 0; j < 2; ++j) K.samples[j] = {xs[j], std::sqrt(s.P(xs[j])), std::sqrt(s.N(xs[j]))};

  auto f = [&](cplx x, cplx y, cplx) {
    CoverPoint z{x, y, 0.0};
    return Vec2c(klein_kernel(s, K.samples[0], z), klein_kernel(s, K.samples[1], z));
  };
  Mat<cplx, 10, 2> cov = to_cover<2>(m, lift_integrals<2>(s, m, f, opt));
  Mat2c R = cov.topRows<2>();  // R(i, s): a_i-period at sample s
  Mat2c U;
  for (int j = 0; j < 2; ++j) U.col(j) = u_raw(K.samples[j]);
  Mat2c ell = R * U.inverse();
  K.c = -(pd.Aper.partialPivLu().solve(ell)).transpose();
  return K;
}

cplx bidifferential(const Surface& s, const BergmanKernel& K, const CoverPoint& a, const CoverPoint& b) {
  if (std::abs(a.x - b.x) < 1e-6 * s.sep_all) {
    if (std::abs(a.y - b.y) < std::abs(a.y + b.y))
      throw Error(Err::DiagonalTooClose, "points closer than 1e-6 sep on one sheet");
  }
  cplx yy = a.y * b.y;
  cplx F = klein_F(s.p, a.x, b.x);
  cplx kern;
  if (std::abs(F + 2.0 * yy) > std::abs(F - 2.0 * yy)) {
    cplx d = a.x - b.x;
    kern = 1.0 / (d * d) + eval_bivar(K.G, a.x, b.x) / (4.0 * yy * (F + 2.0 * yy));
  } else {
    kern = klein_kernel(s, a, b);
  }
  return kern + (u_raw(a).transpose() * K.c * u_raw(b))(0);
}

Vec2c bergman_a_periods(const Surface& s, const Marking& m, const BergmanKernel& K, const CoverPoint& pt,
                        const QuadOptions& opt) {
  auto f = [&](cplx x, cplx y, cplx) {
    Vec<cplx, 1> r;
    r[0] = bidifferential(s, K, pt, {x, y, 0.0});
    return r;
  };
  Mat<cplx, 10, 1> cov = to_cover<1>(m, lift_integrals<1>(s, m, f, opt));
  return cov.topRows<2>();
}

cplx s_bergman(const Surface& s, const BergmanKernel& K, cplx x) {
  cplx P = s.P(x), dP = s.dP(x), ddP = s.ddP(x);
  cplx sk = 6.0 * (klein_F2(s.p, x) - ddP + dP * dP / (2.0 * P)) / (8.0 * P);
  cplx corr = K.c(0, 0) + (K.c(0, 1) + K.c(1, 0)) * x + K.c(1, 1) * x * x;
  return sk + 6.0 * corr / P;
}

DiagonalLimit s_bergman_richardson(const Surface& s, const BergmanKernel& K, const CoverPoint& pt, double eps) {
  if (eps <= 0) eps = 1e-3 * s.sep_all;
  auto est = [&](double e) {
    CoverPoint a{pt.x + e, sqrt_near(s.P(pt.x + e), pt.y), 0.0};
    CoverPoint b{pt.x - e, sqrt_near(s.P(pt.x - e), pt.y), 0.0};
    cplx F = klein_F(s.p, a.x, b.x), yy = a.y * b.y;
    cplx reg = eval_bivar(K.G, a.x, b.x) / (4.0 * yy * (F + 2.0 * yy)) + (u_raw(a).transpose() * K.c * u_raw(b))(0);
    return 6.0 * reg;
  };
  cplx e1 = est(eps), e2 = est(0.5 * eps);
  DiagonalLimit r{(4.0 * e2 - e1) / 3.0, std::abs(e1 - e2) / std::abs(e2)};
  if (r.rel_gap > 1e-5) throw Error(Err::ExtrapolationUnstable, "eps and eps/2 estimates disagree");
  return r;
}

cplx qhat(const Surface& s, const BergmanKernel& K, cplx x) {
  cplx Q = s.N(x) / s.P(x);
  return (s_bergman(s, K, x) - schwarzian_v(s, x)) / (2.0 * Q);
}

cplx h_kernel(const Surface& s, const BergmanKernel& K, const CoverPoint& a, const CoverPoint& b) {
  cplx B = bidifferential(s, K, a, b);
  return B * B / ((s.N(a.x) / s.P(a.x)) * (s.N(b.x) / s.P(b.x)));
}

cplx quad_in_v(const PeriodData& pd, const Mat2c& W, cplx x, cplx y) {
  Vec2c v = v_normalized(pd, x, y);
  return (v.transpose() * W * v)(0);
}

Mat2c sb_transform_coeffs(const Mat2c& Omega, const SpSigma& sigma) {
  Mat2c C = sigma.C.cast<cplx>(), D = sigma.D.cast<cplx>();
  return -12.0 * kPi * kI * dlog_det_cod(Omega, C, D);
}

Mat2c wirtinger_delta(const Mat2c& Omega, cplx constant) {
  return constant * dlog_theta_product(even_theta_constants(Omega));
}

}  // namespace prym
