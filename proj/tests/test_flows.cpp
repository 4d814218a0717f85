#include <doctest.h>

#include "fixtures.hpp"
#include "prymlab/flows.hpp"

using namespace prym;

TEST_CASE("actions and angles") {
  Vec6c P;
  P << 1.0, kI, 2.0 - kI, 0.5, 3.0, kI;
  const Vec3c H = hamiltonians(P);
  CHECK(std::abs(H[0] - 1.0 / (2 * kPi)) < 1e-15);
  CHECK(std::abs(H[1] + 1.0 / (2 * kPi)) < 1e-15);
  const ActionAngle aa = action_angle(P);
  CHECK((aa.I - H).norm() == 0.0);
  CHECK(std::abs(aa.phi[1] - 2 * kPi * 3.0 / kI) < 1e-14);
  // sign of w: P -> -P leaves both unchanged
  const ActionAngle bb = action_angle(-P);
  CHECK((bb.I - aa.I).norm() == 0.0);
  CHECK((bb.phi - aa.phi).norm() <= 1e-15);
}

TEST_CASE("single flow steps") {
  const Surface s = test::example_surface();
  ModuliChart c = make_chart(s, standard_marking(s));
  const FlowState st0 = flow_start(c);
  CHECK((st0.P - compute_periods(s, c.marking).P()).norm() <= 1e-12 * st0.P.norm());

  const FlowState same = flow(c, st0, 0, 0.0);
  CHECK((same.theta - st0.theta).norm() == 0.0);

  for (int i = 0; i < 3; ++i) {
    ModuliChart ci = c;
    const FlowState st = flow(ci, st0, i, 0.01);
    const Vec6c P = P_at(ci, st.theta);
    Vec6c want = st0.P;
    want[3 + i] += 0.01 * st0.P[i] / (2 * kPi);
    CHECK((P - want).norm() <= 1e-9 * st0.P.norm());
    CHECK((hamiltonians(P) - hamiltonians(st0.P)).norm() <= 1e-9 * hamiltonians(st0.P).norm());
    CHECK(st.t[i] == doctest::Approx(0.01));
  }
  CHECK(commutativity_defect(c, st0, 1, 1, 0.01) <= 1e-9);
  CHECK(commutativity_defect(c, st0, 0, 2, 0.01) <= 1e-6);
}

TEST_CASE("braid path") {
  const Surface s = test::example_surface();
  const BraidPath b = braid_path(s);
  cplx z1, z2, d1, d2;
  b.at(0.0, z1, z2, d1, d2);
  CHECK(std::abs(z1 - s.n_roots[0]) < 1e-14);
  CHECK(std::abs(z2 - s.n_roots[1]) < 1e-14);
  b.at(3.0, z1, z2, d1, d2);
  CHECK(std::abs(z1 - s.n_roots[1]) < 1e-12);
  CHECK(std::abs(z2 - s.n_roots[0]) < 1e-12);
  // the zeros stay apart and away from the roots of p
  for (int k = 0; k <= 300; ++k) {
    b.at(0.01 * k, z1, z2, d1, d2);
    CHECK(std::abs(z1 - z2) >= 2 * b.eps - 1e-12);
    for (cplx r : s.curve.p_roots) CHECK(std::min(std::abs(z1 - r), std::abs(z2 - r)) > 0.1);
  }

  ModuliChart c = make_chart(s, standard_marking(s));
  const auto path = braid_zeros_path(c, 1, 30);
  REQUIRE(path.size() >= 2);
  CHECK((path.front() - path.back()).norm() <= 1e-12 * path.front().norm());
  CHECK_THROWS_AS(braid_zeros_path(c, 2, 30), Error);
}
