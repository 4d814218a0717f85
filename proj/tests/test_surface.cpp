#include <doctest.h>

#include "fixtures.hpp"

using namespace prym;

namespace {

Err error_of(const CurveSpec& c, const QDiffSpec& q) {
  try {
    validate_surface(c, q);
  } catch (const Error& e) {
    return e.code;
  }
  FAIL("surface accepted");
  return Err::BadInput;
}

}  // namespace

TEST_CASE("example surface") {
  const Surface s = test::example_surface();
  CHECK(std::abs(s.n_roots[0] - cplx(0, -2)) < 1e-14);
  CHECK(std::abs(s.n_roots[1] - cplx(0, 1)) < 1e-14);
  CHECK(s.sep_all == doctest::Approx(1.0));
  CHECK(std::abs(s.x0 - cplx(0.375, 1.875)) < 1e-14);
  for (const auto& z : s.zeros) {
    CHECK(std::abs(s.N(z.x)) < 1e-13);
    CHECK(std::abs(z.y * z.y - s.P(z.x)) < 1e-12);
  }
  CHECK(std::abs(s.zeros[0].y + s.zeros[1].y) < 1e-14);
}

TEST_CASE("degenerate data is rejected") {
  CHECK(error_of({{-2, -1, 0, 1, 2, 3}}, {{0.0, 0.0, 1.0}}) == Err::DegenerateZeros);
  CHECK(error_of({{-2, -1, 0, 1, 2, 3}}, {{0.0, -1.0, 1.0}}) == Err::ZeroAtBranchPoint);
  CHECK(error_of({{-2, -1, 0, 1, 1, 3}}, {{2.0, kI, 1.0}}) == Err::DuplicateRoots);
}

TEST_CASE("genus of the cover") {
  CHECK(cover_genus(2) == 5);
  CHECK(cover_genus(3) == 9);
  CHECK(hminus_dim(2) == 6);
}

TEST_CASE("involution") {
  const Surface s = test::example_surface();
  const CoverPoint p0{0.0, std::sqrt(s.P(0.3)), std::sqrt(s.N(0.0))};
  const CoverPoint m0 = involution(p0);
  CHECK(m0.x == p0.x);
  CHECK(m0.y == p0.y);
  CHECK(m0.w == -p0.w);
  for (const auto& z : s.zeros) CHECK(std::abs(involution(z).w - z.w) == 0.0);

  for (cplx x : test::random_points(s, 20)) {
    const CoverPoint pt{x, std::sqrt(s.P(x)), std::sqrt(s.N(x))};
    const LocalData a = eval_local(s, pt), b = eval_local(s, involution(pt));
    CHECK(std::abs(a.v_rep + b.v_rep) <= 1e-15 * std::abs(a.v_rep));
    const LocalData c = eval_local(s, {x, -pt.y, -pt.w});
    CHECK(std::abs(a.Q_rep - c.Q_rep) == 0.0);
  }
}

TEST_CASE("Schwarzian of the flat coordinate against finite differences") {
  const Surface s = test::example_surface();
  for (cplx x : test::random_points(s, 6, 11)) {
    const cplx y = std::sqrt(s.P(x)), w = std::sqrt(s.N(x));
    // z' = w / y on the branch through (y, w); fourth-order stencils for z'' and z'''
    auto zp = [&](cplx t) { return sqrt_near(s.N(t), w) / sqrt_near(s.P(t), y); };
    const double h = 1e-3;
    const cplx f0 = zp(x), f1 = zp(x + h), fm1 = zp(x - h), f2 = zp(x + 2 * h), fm2 = zp(x - 2 * h);
    const cplx d1 = (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12 * h);
    const cplx d2 = (-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12 * h * h);
    const cplx fd = d2 / f0 - 1.5 * (d1 / f0) * (d1 / f0);
    const cplx sv = eval_local(s, {x, y, w}).Sv_rep;
    CHECK(std::abs(sv - fd) <= 1e-6 * std::abs(sv));
    CHECK(std::abs(sv - schwarzian_v(s, x)) <= 1e-14 * std::abs(sv));
  }
}

TEST_CASE("Schwarzian is even for even data") {
  // p and N even: S_v(-x) = S_v(x)
  CurveSpec cs{{-3, -1, -0.5, 0.5, 1, 3}};
  QDiffSpec q{{2.0, 0.0, 1.0}};
  const Surface s = validate_surface(cs, q);
  for (cplx x : {cplx(0, 0.3), cplx(0, 2.2), cplx(0.7, 0.4)})
    CHECK(std::abs(schwarzian_v(s, x) - schwarzian_v(s, -x)) <= 1e-13 * std::abs(schwarzian_v(s, x)));
}

TEST_CASE("exclusion disks") {
  const Surface s = test::example_surface();
  CHECK_THROWS_AS(eval_local(s, {0.01, std::sqrt(s.P(0.01)), std::sqrt(s.N(0.01))}), Error);
  CHECK(s.outside_exclusion(s.x0));
}
