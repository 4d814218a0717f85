#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "prymlab/symplectic.hpp"

using namespace prym;

namespace {

int exponent_intersection(const std::vector<int>& a, const std::vector<int>& b) {
  // (alpha1, beta1, alpha2, beta2) with alpha_j . beta_j = 1
  Eigen::Vector4i ha = Eigen::Vector4i::Zero(), hb = Eigen::Vector4i::Zero();
  for (int l : a) ha[std::abs(l) - 1] += l > 0 ? 1 : -1;
  for (int l : b) hb[std::abs(l) - 1] += l > 0 ? 1 : -1;
  return ha[0] * hb[1] - ha[1] * hb[0] + ha[2] * hb[3] - ha[3] * hb[2];
}

}  // namespace

TEST_CASE("germ cycle of the relator polygon") {
  const auto cyc = germ_cycle({1, 2, -1, -2, 3, 4, -3, -4});
  std::set<int> seen(cyc.begin(), cyc.end());
  CHECK(seen.size() == 8);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 7);
}

TEST_CASE("word crossings add up to the intersection number") {
  const auto ls = loop_set();
  int disjoint = 0, single = 0;
  for (std::size_t i = 0; i < ls.size(); ++i)
    for (std::size_t j = 0; j < ls.size(); ++j) {
      if (i == j) continue;
      const auto xs = word_crossings(ls[i], ls[j]);
      int total = 0;
      for (const auto& x : xs) total += x.sign;
      CHECK(total == exponent_intersection(ls[i], ls[j]));
      if (i < j) (xs.empty() ? disjoint : single) += 1;
      // swapping the loops flips every sign
      const auto ys = word_crossings(ls[j], ls[i]);
      CHECK(ys.size() == xs.size());
    }
  CHECK(disjoint == 13);
  CHECK(single == 15);
  CHECK(word_crossings({1}, {3}).empty());
  REQUIRE(word_crossings({1}, {2}).size() == 1);
  CHECK(word_crossings({1}, {2})[0].sign == 1);
}

TEST_CASE("covariance sigmas") {
  for (const auto& sg : covariance_sigmas()) {
    CHECK(sg.symplectic());
    CHECK(sg.C != Eigen::Matrix2i::Zero());
  }
}

TEST_CASE("canonical momenta rebuild N") {
  const Surface s = test::example_surface();
  const PeriodData pd = compute_periods(s, standard_marking(s));
  const Vec3c p = canonical_momenta(s, pd);
  for (cplx x : {cplx(0.3, 0.2), cplx(-1.7, 0.9)}) {
    const Vec2c u = pd.vnorm * Vec2c(1.0, x);
    const cplx n = p[0] * u[0] * u[0] + p[1] * u[0] * u[1] + p[2] * u[1] * u[1];
    CHECK(std::abs(n - s.N(x)) <= 1e-12 * std::abs(s.N(x)));
  }
  const Vec3c n0 = sigma_shifted_n(s, pd, SpSigma{});
  CHECK((n0 - Vec3c(s.n[0], s.n[1], s.n[2])).norm() == 0.0);
}

TEST_CASE("flat coordinate") {
  const Surface s = test::example_surface();
  const cplx x = s.n_roots[0] + 0.08 * cplx(0.6, 0.8);
  const CoverPoint p{x, std::sqrt(s.P(x)), std::sqrt(s.N(x))};
  const cplx z = flat_coordinate(s, p);
  const CoverPoint q = solve_fixed_z(s, {x + 0.01, sqrt_near(s.P(x + 0.01), p.y), sqrt_near(s.N(x + 0.01), p.w)}, z);
  CHECK(std::abs(q.x - x) <= 1e-10);
  // z ~ (2/3) c (x - r)^{3/2} near a simple zero: |z| scales like d^{3/2}
  const cplx x2 = s.n_roots[0] + 0.02 * cplx(0.6, 0.8);
  const cplx z2 = flat_coordinate(s, {x2, std::sqrt(s.P(x2)), std::sqrt(s.N(x2))});
  CHECK(std::abs(z2) / std::abs(z) == doctest::Approx(std::pow(0.25, 1.5)).epsilon(0.05));
  const cplx far = s.n_roots[0] + 0.5;
  CHECK_THROWS_AS(flat_coordinate(s, {far, std::sqrt(s.P(far)), std::sqrt(s.N(far))}), Error);
}

TEST_CASE("brackets of periods") {
  const Surface s = test::example_surface();
  ModuliChart c = make_chart(s, standard_marking(s));
  BracketEngine be(c);
  CHECK(std::abs(be.bracket(period_observable(0), period_observable(3)) - 0.5) <= 1e-6);
  CHECK(std::abs(be.bracket(period_observable(0), period_observable(1))) <= 1e-6);
  CHECK(std::abs(be.bracket(period_observable(2), period_observable(5)) - 0.5) <= 1e-6);
  const cplx o = be.bracket(omega_observable(0, 0), omega_observable(1, 1));
  CHECK(std::abs(o) <= 1e-4);
  const cplx ab = be.bracket(period_observable(1), omega_observable(0, 1));
  CHECK(std::abs(ab + be.bracket(omega_observable(0, 1), period_observable(1))) <= 1e-8 * std::max(1.0, std::abs(ab)));
}
