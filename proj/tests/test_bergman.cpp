#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "prymlab/bergman.hpp"

using namespace prym;

namespace {

struct Fixture {
  Surface s = test::example_surface();
  Marking m = standard_marking(s);
  PeriodData pd = compute_periods(s, m);
  BergmanKernel K = make_bergman(s, m, pd);
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

CoverPoint pt(const Surface& s, cplx x, bool flip = false) {
  CoverPoint p{x, std::sqrt(s.P(x)), std::sqrt(s.N(x))};
  if (flip) p.y = -p.y;
  return p;
}

}  // namespace

TEST_CASE("theta function") {
  const Mat2c& Om = fx().pd.Omega;
  const Vec2c z(0.1 + 0.2 * kI, -0.3 + 0.05 * kI);
  CHECK(std::abs(theta(z, Om) - theta(-z, Om)) <= 1e-12 * std::abs(theta(z, Om)));
  int odd = 0;
  for (const auto& ch : all_characteristics())
    if (!ch.even()) {
      ++odd;
      CHECK(std::abs(theta(Vec2c::Zero(), Om, ch)) <= 1e-12);
    }
  CHECK(odd == 6);
  const Vec2c m(1, -2);
  const cplx fac = std::exp(-kPi * kI * (m.transpose() * Om * m)(0) - 2.0 * kPi * kI * (m.transpose() * z)(0));
  const cplx a = theta(z + Om * m, Om), b = fac * theta(z, Om);
  CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
  // integer shifts are periods
  CHECK(std::abs(theta(z + Vec2c(1, 0), Om) - theta(z, Om)) <= 1e-12 * std::abs(theta(z, Om)));
}

TEST_CASE("even theta constants") {
  const EvenThetaConstants etc = even_theta_constants(fx().pd.Omega);
  CHECK(etc.values.size() == 10);
  cplx prod = 1;
  for (cplx v : etc.values) {
    CHECK(std::isfinite(std::abs(v)));
    CHECK(std::abs(v) > 1e-8);
    prod *= v;
  }
  CHECK(std::abs(prod - etc.product) <= 1e-12 * std::abs(prod));
  auto vals = etc.values;
  std::reverse(vals.begin(), vals.end());
  cplx rprod = 1;
  for (cplx v : vals) rprod *= v;
  CHECK(std::abs(rprod - prod) <= 1e-13 * std::abs(prod));
  CHECK_FALSE(etc.near_null);
}

TEST_CASE("theta throws off the Siegel half space") {
  Mat2c bad;
  bad << kI, 0.0, 0.0, -kI;
  CHECK_THROWS_AS(theta(Vec2c::Zero(), bad), Error);
}

TEST_CASE("Bergman kernel") {
  const auto& [s, m, pd, K] = fx();
  const CoverPoint P1 = pt(s, cplx(0.3, 0.7)), P2 = pt(s, cplx(-1.4, -0.6), true);
  const cplx b12 = bidifferential(s, K, P1, P2);
  CHECK(std::abs(b12 - bidifferential(s, K, P2, P1)) <= 1e-9 * std::abs(b12));
  for (const CoverPoint& p : {P1, P2}) CHECK(bergman_a_periods(s, m, K, p).cwiseAbs().maxCoeff() <= 1e-8);

  const double d = 1e-3;
  const CoverPoint Q{P1.x + d, sqrt_near(s.P(P1.x + d), P1.y), sqrt_near(s.N(P1.x + d), P1.w)};
  CHECK(std::abs(bidifferential(s, K, P1, Q) * d * d - 1.0) <= 1e-5);
  CHECK_THROWS_AS(bidifferential(s, K, P1, {P1.x + 1e-9, P1.y, P1.w}), Error);

  // b = B / (v v) is odd under the involution in each argument
  auto b = [&](const CoverPoint& a, const CoverPoint& c) {
    return bidifferential(s, K, a, c) / (eval_local(s, a).v_rep * eval_local(s, c).v_rep);
  };
  CHECK(std::abs(b(involution(P1), P2) + b(P1, P2)) <= 1e-9 * std::abs(b(P1, P2)));

  // the a-period normalization does not depend on the sample points
  const std::array<cplx, 2> xs{s.x0 + cplx(-0.5, 0.2), cplx(0.5, -1.5)};
  const BergmanKernel K2 = make_bergman(s, m, pd, &xs);
  CHECK(std::abs(bidifferential(s, K2, P1, P2) - b12) <= 1e-9 * std::abs(b12));
}

TEST_CASE("Bergman projective connection") {
  const auto& [s, m, pd, K] = fx();
  const CoverPoint P1 = pt(s, cplx(0.3, 0.7));
  const DiagonalLimit r1 = s_bergman_richardson(s, K, P1), r2 = s_bergman_richardson(s, K, P1, 0.5e-3);
  CHECK(std::abs(r1.value - r2.value) <= 1e-6 * std::abs(r1.value));
  CHECK(std::abs(s_bergman(s, K, P1.x) - r1.value) <= 1e-9 * std::abs(r1.value));

  // identity marking change
  const Marking mi = apply_sp(s, m, SpSigma{});
  const PeriodData pi = compute_periods(s, mi);
  CHECK(std::abs(s_bergman(s, make_bergman(s, mi, pi), P1.x) - s_bergman(s, K, P1.x)) <= 1e-12 * std::abs(r1.value));
  CHECK(sb_transform_coeffs(pd.Omega, SpSigma{}).norm() == 0.0);
}

TEST_CASE("transformation of the projective connection") {
  const auto& [s, m, pd, K] = fx();
  SpSigma sg;
  sg.C << 1, 1, 1, 0;
  const Marking ms = apply_sp(s, m, sg);
  const PeriodData ps = compute_periods(s, ms);
  const BergmanKernel Ks = make_bergman(s, ms, ps);
  for (cplx x : {cplx(0.3, 0.7), cplx(-1.4, -0.6), cplx(2.5, 1.2)}) {
    const CoverPoint p = pt(s, x);
    const cplx d = s_bergman(s, Ks, x) - s_bergman(s, K, x);
    const cplx f = quad_in_v(pd, sb_transform_coeffs(pd.Omega, sg), x, p.y);
    CHECK(std::abs(d - f) <= 1e-6 * std::abs(d));

    // S_B + (S_W - S_B) is marking independent only with the constant 48 pi i / (2^g + 4^g)
    auto sw = [&](const BergmanKernel& k, const PeriodData& q, cplx c) {
      return s_bergman(s, k, x) + quad_in_v(q, wirtinger_delta(q.Omega, c), x, p.y);
    };
    const cplx c1 = wirtinger_constant_consistent(), c0 = wirtinger_constant_printed();
    CHECK(std::abs(sw(Ks, ps, c1) - sw(K, pd, c1)) <= 1e-6 * std::abs(sw(K, pd, c1)));
    CHECK(std::abs(sw(Ks, ps, c0) - sw(K, pd, c0)) > 1e-2 * std::abs(sw(K, pd, c0)));
  }
}

TEST_CASE("potential u") {
  const auto& [s, m, pd, K] = fx();
  // (z - z1)^2 u -> -5/36 at a zero of Q
  const cplx x1 = s.n_roots[0];
  const cplx x = x1 + 1e-3 * cplx(0.6, 0.8);
  const CoverPoint pc = pt(s, x);
  const int n = 2000;
  cplx z = 0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    const cplx xx = x1 + (x - x1) * t * t;
    z += sqrt_near(s.N(xx), pc.w) / sqrt_near(s.P(xx), pc.y) * (x - x1) * 2.0 * t / double(n);
  }
  CHECK(std::abs(z * z * potential_u(s, K, x) + 5.0 / 36.0) <= 1e-2 * 5.0 / 36.0);
}

TEST_CASE("u is real for real data on the real axis") {
  CurveSpec cs{{-2, -1, 0, 1, 2, 3}};
  const Surface s = validate_surface(cs, QDiffSpec{{2.0, 0.5, 1.0}});
  const Marking m = standard_marking(s);
  const PeriodData pd = compute_periods(s, m);
  const BergmanKernel K = make_bergman(s, m, pd);
  for (double x : {-1.5, 0.5, 2.5, 4.0}) {
    const cplx u = potential_u(s, K, x);
    CHECK(std::abs(u.imag()) <= 1e-8 * std::abs(u));
  }
}

TEST_CASE("kernel h") {
  const auto& [s, m, pd, K] = fx();
  const CoverPoint P1 = pt(s, cplx(0.3, 0.7)), P2 = pt(s, cplx(-1.4, -0.6));
  const cplx h = h_kernel(s, K, P1, P2);
  CHECK(std::abs(h - h_kernel(s, K, P2, P1)) <= 1e-9 * std::abs(h));
  CHECK(std::abs(h - h_kernel(s, K, involution(P1), P2)) <= 1e-9 * std::abs(h));
  CHECK(std::abs(h - h_kernel(s, K, P1, involution(P2))) <= 1e-9 * std::abs(h));
}
