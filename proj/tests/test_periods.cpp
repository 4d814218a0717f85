#include <doctest.h>

#include "fixtures.hpp"
#include "prymlab/chart.hpp"
#include "prymlab/periods.hpp"

using namespace prym;

// Frozen from tests/oracle/periods_oracle.py (mpmath, 30 digits, capsule integrals on the real axis).
namespace oracle {
const cplx A1(0.36904770057288965, -2.4610834706841815);   // capsule [2,3]
const cplx A2(2.2693485400315957, -0.20862424280937815);   // capsule [-1,0]
const cplx B1(3.0707166561502388, 0.51213542268720654);    // -capsule [1,2]
const cplx B2(0.29576542320612873, 1.7724309402381611);    // -capsule [-2,-1]
const cplx H3(0.3978294903713002, 0.10491481498258708);    // A3^2 / 2pi, loop around both zeros
const cplx Omega11(0, 1.1371422050243034), Omega12(0.33063761453635162, 0), Omega22(0, 0.78326067216428315);
}  // namespace oracle

namespace {

struct Fixture {
  Surface s = test::example_surface();
  Marking m = standard_marking(s);
  PeriodData pd = compute_periods(s, m);
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST_CASE("periods against the mpmath oracle") {
  const PeriodData& pd = fx().pd;
  CHECK(std::abs(pd.A[0] - oracle::A1) < 1e-12);
  CHECK(std::abs(pd.A[1] - oracle::A2) < 1e-12);
  CHECK(std::abs(pd.B[0] - oracle::B1) < 1e-12);
  CHECK(std::abs(pd.B[1] - oracle::B2) < 1e-12);
  CHECK(std::abs(pd.A[2] * pd.A[2] / (2 * kPi) - oracle::H3) < 1e-12);
  CHECK(std::abs(pd.Omega(0, 0) - oracle::Omega11) < 1e-12);
  CHECK(std::abs(pd.Omega(0, 1) - oracle::Omega12) < 1e-12);
  CHECK(std::abs(pd.Omega(1, 1) - oracle::Omega22) < 1e-12);
}

TEST_CASE("Riemann relations") {
  const PeriodData& pd = fx().pd;
  CHECK(std::abs(pd.Omega(0, 1) - pd.Omega(1, 0)) <= 1e-8);
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(pd.Omega.imag()).eigenvalues();
  CHECK(ev[0] > 0);
  CHECK((pd.Pi - pd.Pi.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
  const Eigen::Vector3d pev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(pd.Pi.imag()).eigenvalues();
  CHECK(pev[0] > 0);
  CHECK((pd.B - pd.Pi * pd.A).norm() <= 1e-8 * pd.A.norm());
  CHECK(pd.bilinear_residual() <= 1e-9);
}

TEST_CASE("normalizations") {
  const PeriodData& pd = fx().pd;
  // a-periods of the normalized differentials are the identity
  CHECK((pd.vnorm * pd.Aper.transpose() - Mat2c::Identity()).norm() < 1e-12);
  CHECK((pd.pnorm * pd.PA.transpose() - Mat3c::Identity()).norm() < 1e-12);
  // invariant differentials vanish on H-
  CHECK(pd.hminus_raw.leftCols<2>().cwiseAbs().maxCoeff() <= 1e-9 * pd.Aper.cwiseAbs().maxCoeff());
}

TEST_CASE("global sign of w") {
  const Surface& s = fx().s;
  const Surface sf = validate_surface(s.curve, s.qdiff, s.x0, -s.w0, s.y0);
  const PeriodData pf = compute_periods(sf, standard_marking(sf));
  CHECK((pf.P() + fx().pd.P()).norm() <= 1e-12 * fx().pd.P().norm());
  CHECK((pf.Omega - fx().pd.Omega).norm() <= 1e-12);
}

TEST_CASE("contractible and reversed paths") {
  const Surface& s = fx().s;
  const Marking& m = fx().m;
  auto f = [](cplx, cplx y, cplx w) { return Vec<cplx, 1>(w / y); };
  // a small circle avoiding every singular point
  const cplx c = s.x0 + 0.3;
  Path p{circle_from(c, c + 0.2, 32), std::sqrt(s.P(c + 0.2)), std::sqrt(s.N(c + 0.2))};
  const SheetHistory h = continue_sheets(s, p);
  CHECK(std::abs(integrate_history<1>(s, h, f)[0]) <= 1e-10);

  const SheetHistory& l = m.lifts[0];
  SheetHistory r = l;
  std::reverse(r.x.begin(), r.x.end());
  std::reverse(r.y.begin(), r.y.end());
  std::reverse(r.w.begin(), r.w.end());
  CHECK(std::abs(integrate_history<1>(s, l, f)[0] + integrate_history<1>(s, r, f)[0]) <= 1e-12);
}

TEST_CASE("period matrix under marking changes") {
  const Surface& s = fx().s;
  const PeriodData& pd = fx().pd;
  SpSigma t;  // C = 0, D = I: a pure b-shift
  t.B << 1, 0, 0, 0;
  const PeriodData pt = compute_periods(s, apply_sp(s, fx().m, t));
  CHECK((pt.Omega - (pd.Omega + t.B.cast<cplx>())).norm() <= 1e-8);
  SpSigma sg;
  sg.C << 1, 1, 1, 0;
  const PeriodData ps = compute_periods(s, apply_sp(s, fx().m, sg));
  const Mat2c want = pd.Omega * (sg.C.cast<cplx>() * pd.Omega + Mat2c::Identity()).inverse();
  CHECK((ps.Omega - want).norm() <= 1e-8 * want.norm());
}

TEST_CASE("chart Jacobian and Newton inversion") {
  ModuliChart c = make_chart(fx().s, fx().m);
  const Mat6c J = jacobian(c);
  const Eigen::JacobiSVD<Mat6c> svd(J);
  CHECK(svd.singularValues()[5] > 1e-6 * svd.singularValues()[0]);

  const Vec6c P0 = fx().pd.P();
  CHECK((P_at(c, c.theta) - P0).norm() <= 1e-12 * P0.norm());

  Vec6c dir;
  dir << 0.3, -kI, 0.5, 0.2 + 0.1 * kI, -0.4, 0.7 * kI;
  dir /= dir.norm();
  const Vec6c dth = c.fd_step * dir;
  CHECK((P_at(c, c.theta + dth) - P0 - J * dth).norm() <= 10 * c.fd_step * c.fd_step * P0.norm());

  NewtonResult nr = newton_invert(c, P0);
  CHECK((nr.theta - c.theta).norm() <= 1e-12);

  const Vec6c th = c.theta + 1e-3 * dir;
  nr = newton_invert(c, P_at(c, th), {1e-12, 50, false});
  CHECK((nr.theta - th).norm() <= 1e-9);

  Vec6c target = P0;
  target[3] += 1e-3 * P0[0];
  nr = newton_invert(c, target, {1e-12, 50, false});
  const Vec6c P1 = P_at(c, nr.theta);
  CHECK((P1.head<3>() - P0.head<3>()).norm() <= 1e-9 * P0.norm());
  CHECK(std::abs(P1[3] - target[3]) <= 1e-9 * P0.norm());
}

TEST_CASE("chart pins 0, 1, -1") {
  CurveSpec cs{{-2, -1, 0.1, 1, 2, 3}};
  const Surface s = validate_surface(cs, QDiffSpec{{2.0, kI, 1.0}});
  CHECK_THROWS_AS(make_chart(s, standard_marking(s)), Error);
}
