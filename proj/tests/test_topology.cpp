#include <doctest.h>

#include "fixtures.hpp"
#include "prymlab/periods.hpp"

using namespace prym;

namespace {

SheetHistory around(const Surface& s, cplx c, double r) {
  const cplx start = c + cplx(0, r);
  Path p{circle_from(c, start, 48), std::sqrt(s.P(start)), std::sqrt(s.N(start))};
  return continue_sheets(s, p, 0.25 * r);
}

}  // namespace

TEST_CASE("sheets around single singular points") {
  const Surface s = test::example_surface();
  // root of p: y flips, w returns
  SheetHistory h = around(s, 0.0, 0.3);
  CHECK(std::abs(h.y.back() + h.y.front()) < 1e-12);
  CHECK(std::abs(h.w.back() - h.w.front()) < 1e-12);
  // root of N: w flips, y returns
  h = around(s, cplx(0, 1), 0.3);
  CHECK(std::abs(h.y.back() - h.y.front()) < 1e-12);
  CHECK(w_holonomy(h) == -1);
}

TEST_CASE("loop around both zeros of N") {
  const Surface s = test::example_surface();
  // thin band around -2i -> 1/2 -> i, crossing the real axis only inside the gap (0, 1)
  const std::vector<cplx> v = capsule({cplx(0, -2), 0.5, cplx(0, 1)}, 0.15);
  Path p{v, std::sqrt(s.P(v[0])), std::sqrt(s.N(v[0]))};
  const SheetHistory h = continue_sheets(s, p, 0.02);
  CHECK(w_holonomy(h) == 1);
}

TEST_CASE("standard marking") {
  const Surface s = test::example_surface();
  const Marking m = standard_marking(s);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const long long want = (j == i + 3) ? 1 : (i == j + 3 ? -1 : 0);
      CHECK(m.K(i, j) == Rational(want, 2));
    }
  // the base intersection form is the standard one
  Eigen::Matrix4i J4 = Eigen::Matrix4i::Zero();
  J4(0, 2) = J4(1, 3) = 1;
  J4(2, 0) = J4(3, 1) = -1;
  CHECK(m.base_int == J4);
  for (int j = 1; j <= 4; ++j) CHECK(w_holonomy(continue_sheets(s, word_path(m, expand_gens(m, {j}), true))) == 1);
  for (int z = 0; z < 2; ++z) {
    Path p{zero_loop(s, m, z), m.hub_y, m.hub_w};
    CHECK(w_holonomy(continue_sheets(s, p, 0.025 * s.sep_all)) == -1);
  }
  // intersection numbers of lifts are antisymmetric
  CHECK(m.lift_int == Eigen::MatrixXi(-m.lift_int.transpose()));
  CHECK(m.cover_int == Eigen::MatrixXi(-m.cover_int.transpose()));
}

TEST_CASE("classes in H-") {
  const Surface s = test::example_surface();
  const Marking m = standard_marking(s);
  for (int j = 0; j < 4; ++j) {
    const Vec<double, 6> c = class_in_hminus(s, m, {j + 1});
    Vec<double, 6> e = Vec<double, 6>::Zero();
    e[j % 2 == 0 ? j / 2 : 3 + j / 2] = 1;
    CHECK((c - e).norm() == 0.0);
  }
  CHECK(class_in_hminus(s, m, {1, 2, -1, -2}).norm() == 0.0);
  CHECK(class_in_hminus(s, m, {1, -1}).norm() == 0.0);
}

TEST_CASE("dual basis") {
  const Surface s = test::example_surface();
  const Marking m = standard_marking(s);
  const Mat<double, 6, 6> D = to_double(dual_matrix(m.K));
  CHECK((D - 2.0 * symplectic_j<double, 3>()).norm() == 0.0);
  CHECK(D(3, 0) == -2.0);
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 2) == Rational(0));
  CHECK(Rational(-3, -6) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(3, 4)).value() == doctest::Approx(0.5));
}

TEST_CASE("symplectic matrices") {
  SpSigma id;
  CHECK(id.symplectic());
  SpSigma sg;
  sg.C << 1, 1, 1, 0;
  CHECK(sg.symplectic());
  SpSigma bad;
  bad.A << 2, 0, 0, 1;
  CHECK_FALSE(bad.symplectic());
  const Surface s = test::example_surface();
  const Marking m = standard_marking(s);
  CHECK_THROWS_AS(apply_sp(s, m, bad), Error);
}

TEST_CASE("marking changes") {
  const Surface s = test::example_surface();
  const Marking m = standard_marking(s);
  const PeriodData pd = compute_periods(s, m);

  const PeriodData pi = compute_periods(s, apply_sp(s, m, SpSigma{}));
  CHECK((pi.P() - pd.P()).norm() == 0.0);

  auto period = [&](const Marking& mk, int j) {
    const SheetHistory h = continue_sheets(s, word_path(mk, expand_gens(mk, {j}), true), 0.025 * s.sep_all);
    return integrate_history<1>(s, h, [](cplx, cplx y, cplx w) { return Vec<cplx, 1>(w / y); })[0];
  };
  auto holonomy = [&](const Marking& mk, int j) {
    return w_holonomy(continue_sheets(s, word_path(mk, expand_gens(mk, {j}), true), 0.025 * s.sep_all));
  };
  for (int j = 0; j < 4; ++j) {
    const Marking once = adjust_generator(s, m, j, 0);
    const Marking twice = adjust_generator(s, once, j, 0);
    const cplx p0 = period(m, j + 1), p2 = period(twice, j + 1);
    CHECK(std::abs(p2 - p0) <= 1e-9 * std::abs(p0));
    CHECK(holonomy(once, j + 1) == -holonomy(m, j + 1));
    for (int k = 0; k < 4; ++k)
      if (k != j) CHECK(holonomy(once, k + 1) == 1);
  }
  CHECK_THROWS_AS(adjust_generator(s, m, 4, 0), Error);
}

TEST_CASE("crossing numbers") {
  const Surface s = test::example_surface();
  const Marking m = standard_marking(s);
  for (std::size_t i = 0; i < m.lifts.size(); ++i)
    for (std::size_t j = i + 1; j < m.lifts.size(); ++j)
      CHECK(crossing_number(s, m.lifts[j], m.lifts[i]) == -crossing_number(s, m.lifts[i], m.lifts[j]));
  // a cycle overlaps itself everywhere
  CHECK_THROWS_AS(crossing_number(s, m.lifts[0], m.lifts[0]), Error);
}
