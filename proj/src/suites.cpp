#include "prymlab/suites.hpp"

#include <algorithm>
#include <chrono>

#include "prymlab/flows.hpp"
#include "prymlab/symplectic.hpp"

namespace prym {

namespace {

double rel(cplx a, cplx b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); }

CoverPoint cover_point(const Surface& s, cplx x, bool flip_y = false) {
  CoverPoint pt{x, std::sqrt(s.P(x)), std::sqrt(s.N(x))};
  if (flip_y) pt.y = -pt.y;
  return pt;
}

// Two fixed sample points well inside the chart of the example family.
std::array<CoverPoint, 2> sample_points(const Surface& s) {
  return {cover_point(s, s.x0 + s.sep_all * cplx(-0.6, -0.4)), cover_point(s, s.x0 + s.sep_all * cplx(0.5, -0.9), true)};
}

SheetHistory reversed(const SheetHistory& h) {
  SheetHistory r = h;
  std::reverse(r.x.begin(), r.x.end());
  std::reverse(r.y.begin(), r.y.end());
  std::reverse(r.w.begin(), r.w.end());
  return r;
}

cplx v_over(const Surface& s, const SheetHistory& h, const QuadOptions& q) {
  return integrate_history<1>(s, h, [](cplx, cplx y, cplx w) { return Vec<cplx, 1>(w / y); }, q)[0];
}

const char* gen_name(int j) {
  static const char* n[] = {"alpha1", "beta1", "alpha2", "beta2"};
  return n[j];
}

}  // namespace

std::vector<Check> verify_geometry(const Surface& s, const Marking& m, const PeriodData& pd, const RunOptions& opt) {
  std::vector<Check> out;

  double nz = 0;
  for (const auto& z : s.zeros) nz = std::max(nz, std::abs(s.N(z.x)) + std::abs(z.w));
  out.push_back(make_check("geometry.zeros", "four simple zeros of Q, fixed by the involution", s.zeros[0].x,
                           s.zeros[2].x, nz / std::abs(s.n[2]), 1e-12));
  out.push_back(make_check("geometry.cover_genus", "genus of the canonical cover and rank of H-",
                           double(cover_genus(2)), double(hminus_dim(2)),
                           (cover_genus(2) == 5 && hminus_dim(2) == 6) ? 0.0 : 1.0, 0.0));

  {
    const CoverPoint pt = sample_points(s)[0];
    const cplx v = eval_local(s, pt).v_rep, vm = eval_local(s, involution(pt)).v_rep;
    out.push_back(make_check("geometry.v_odd", "v changes sign under the involution", vm, -v, std::abs(v + vm), 0.0));
  }

  {
    int bad = 0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const long long want = (j == i + 3) ? 1 : (i == j + 3 ? -1 : 0);
        if (!(m.K(i, j) == Rational(want, 2))) ++bad;
      }
    out.push_back(make_check("geometry.intersection_form", "H- intersection form is half the standard form",
                             m.K(0, 3).value(), 0.5, double(bad), 0.0));
  }

  {
    int bad = 0;
    for (int j = 0; j < 4; ++j)
      if (w_holonomy(continue_sheets(s, word_path(m, expand_gens(m, {j + 1}), true))) != 1) ++bad;
    out.push_back(make_check("geometry.generator_holonomy", "generators lift to closed loops on the cover", double(bad),
                             0.0, double(bad), 0.0));
    int hz = 0;
    for (int z = 0; z < 2; ++z) {
      Path p{zero_loop(s, m, z), m.hub_y, m.hub_w};
      hz += w_holonomy(continue_sheets(s, p, 0.025 * s.sep_all)) == -1 ? 0 : 1;
    }
    out.push_back(make_check("geometry.zero_holonomy", "w changes sign around a single zero", double(hz), 0.0,
                             double(hz), 0.0));
  }

  {
    const Vec<double, 6> c1 = class_in_hminus(s, m, {1});
    const Vec<double, 6> c0 = class_in_hminus(s, m, {1, 2, -1, -2});
    Vec<double, 6> e1 = Vec<double, 6>::Zero();
    e1[0] = 1;
    out.push_back(make_check("geometry.class_alpha1", "alpha1 maps to a1-", c1[0], 1.0, (c1 - e1).norm(), 0.0));
    out.push_back(make_check("geometry.class_commutator", "a null-homologous loop has zero class", c0.norm(), 0.0,
                             c0.norm(), 0.0));
  }

  {
    // the period of v along the lift of alpha1 is A1
    const SheetHistory h = continue_sheets(s, word_path(m, expand_gens(m, {1}), true));
    const cplx direct = v_over(s, h, opt.quad);
    out.push_back(make_check("geometry.period_alpha1", "period of v over the lift of alpha1 is A1", direct, pd.A[0],
                             rel(direct, pd.A[0], std::abs(pd.A[0])), 1e-9));
    const cplx back = v_over(s, reversed(h), opt.quad);
    out.push_back(make_check("geometry.orientation", "reversing a path negates the period", direct, -back,
                             std::abs(direct + back), 1e-12 * std::max(1.0, std::abs(direct))));
  }

  {
    const double scale = pd.Aper.cwiseAbs().maxCoeff();
    const double inv = pd.hminus_raw.leftCols<2>().cwiseAbs().maxCoeff() / scale;
    out.push_back(make_check("geometry.anti_invariance", "invariant differentials have no H- periods",
                             pd.hminus_raw(2, 0), 0.0, inv, 1e-9));
  }

  {
    // the move twice winds twice around a zero, which adds nothing to the period
    const Marking m2 = adjust_generator(s, adjust_generator(s, m, 0, 0), 0, 0);
    const cplx p0 = v_over(s, continue_sheets(s, word_path(m, expand_gens(m, {1}), true), 0.025 * s.sep_all), opt.quad);
    const cplx p2 = v_over(s, continue_sheets(s, word_path(m2, expand_gens(m2, {1}), true), 0.025 * s.sep_all), opt.quad);
    out.push_back(make_check("geometry.adjust_twice", "adjusting a generator twice keeps its period", p2, p0,
                             rel(p2, p0, std::abs(p0)), 1e-9));
  }

  {
    const Surface sf = validate_surface(s.curve, s.qdiff, s.x0, -s.w0, s.y0);
    const PeriodData pf = compute_periods(sf, standard_marking(sf), opt.quad);
    const double d = (pf.P() + pd.P()).norm() / pd.P().norm();
    out.push_back(make_check("geometry.w_sign", "flipping the sign of w negates the coordinates", pf.A[0], -pd.A[0], d,
                             1e-9));
  }
  return out;
}

std::vector<Check> verify_periods(const Surface& s, const Marking& m, const PeriodData& pd, const RunOptions& opt) {
  std::vector<Check> out;
  const double Oscale = pd.Omega.norm();
  out.push_back(make_check("periods.Omega_symmetric", "period matrix is symmetric", pd.Omega(0, 1), pd.Omega(1, 0),
                           std::abs(pd.Omega(0, 1) - pd.Omega(1, 0)) / Oscale, 1e-8));
  {
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(pd.Omega.imag()).eigenvalues();
    out.push_back(make_check("periods.ImOmega_positive", "imaginary part of the period matrix is positive definite",
                             ev[0], 0.0, ev[0] > 0 ? 0.0 : -ev[0], 0.0));
  }
  out.push_back(make_check("periods.Pi_symmetric", "Prym matrix is symmetric", pd.Pi(0, 1), pd.Pi(1, 0),
                           (pd.Pi - pd.Pi.transpose()).cwiseAbs().maxCoeff() / pd.Pi.norm(), 1e-8));
  {
    const Vec3c r = pd.B - pd.Pi * pd.A;
    out.push_back(make_check("periods.B_PiA", "b-periods of v are the Prym matrix times the a-periods", pd.B[0],
                             (pd.Pi * pd.A)[0], r.norm() / pd.A.norm(), 1e-8));
  }
  out.push_back(make_check("periods.bilinear", "Riemann bilinear relation for holomorphic differentials",
                           pd.bilinear_residual(), 0.0, pd.bilinear_residual(), 1e-9));

  {
    // normalized Prym differentials over a_j + a_j^mu
    double worst = 0;
    cplx wl = 0;
    for (int j = 0; j < 2; ++j) {
      Vec3c raw;
      for (int k = 0; k < 3; ++k) raw[k] = pd.cover_raw(j, 2 + k) + pd.cover_raw(j + 2, 2 + k);
      const Vec3c per = pd.pnorm * raw;
      if (per.cwiseAbs().maxCoeff() > worst) worst = per.cwiseAbs().maxCoeff(), wl = per[0];
    }
    out.push_back(make_check("periods.prym_parity", "Prym differentials have no periods over invariant a-cycles", wl,
                             0.0, worst, 1e-8));
  }

  {
    const PeriodData pi = compute_periods(s, apply_sp(s, m, SpSigma{}), opt.quad);
    out.push_back(make_check("periods.sigma_identity", "identity marking change keeps the period matrix",
                             pi.Omega(0, 0), pd.Omega(0, 0), (pi.Omega - pd.Omega).norm() / Oscale, 1e-12));
    SpSigma sg;
    sg.C << 1, 1, 1, 0;
    const PeriodData ps = compute_periods(s, apply_sp(s, m, sg), opt.quad);
    const Mat2c want = (sg.A.cast<cplx>() * pd.Omega + sg.B.cast<cplx>()) *
                       (sg.C.cast<cplx>() * pd.Omega + sg.D.cast<cplx>()).inverse();
    out.push_back(make_check("periods.Omega_transform", "period matrix of a sigma-transformed marking",
                             ps.Omega(0, 0), want(0, 0), (ps.Omega - want).norm() / want.norm(), 1e-8));
  }

  ModuliChart c = make_chart(s, m, opt.fd_step);
  c.quad = opt.quad;
  c.threads = opt.threads;
  const Mat6c J = jacobian(c);
  {
    const Eigen::JacobiSVD<Mat6c> svd(J);
    const double ratio = svd.singularValues()[5] / svd.singularValues()[0];
    out.push_back(make_check("periods.jacobian_rank", "homological coordinates are local coordinates", ratio, 0.0,
                             ratio > 1e-8 ? 0.0 : 1.0, 0.0));
  }
  const Vec6c P0 = pd.P();
  Vec6c dir;
  dir << 1.0, kI, -0.5, 0.3 - 0.7 * kI, 0.8, -0.2 * kI;
  dir /= dir.norm();
  {
    const Vec6c dth = c.fd_step * dir;
    const Vec6c pred = J * dth, act = P_at(c, c.theta + dth) - P0;
    const double r = (act - pred).norm() / std::max(1.0, P0.norm());
    out.push_back(make_check("periods.jacobian_taylor", "Jacobian predicts the period change to second order",
                             act[0], pred[0], r, 10 * c.fd_step * c.fd_step));
  }
  {
    const Vec6c th = c.theta + 1e-3 * std::max(1.0, c.theta.norm()) * dir;
    const NewtonResult nr = newton_invert(c, P_at(c, th), {1e-12, 50, false});
    const double e = (nr.theta - th).norm() / std::max(1.0, th.norm());
    out.push_back(make_check("periods.newton_roundtrip", "theta to P and back", nr.theta[0], th[0], e, 1e-9));
  }
  {
    Vec6c target = P0;
    target[3] += 1e-3 * P0[0];
    const NewtonResult nr = newton_invert(c, target, {1e-12, 50, false});
    const Vec6c P1 = P_at(c, nr.theta);
    const double e = (P1 - target).norm() / P0.norm();
    out.push_back(make_check("periods.newton_shift_B1", "Newton reaches B1 + 1e-3 A1 with A fixed", P1[3], target[3], e,
                             1e-9));
  }
  return out;
}

std::vector<Check> verify_bergman(const Surface& s, const Marking& m, const PeriodData& pd, const RunOptions& opt) {
  std::vector<Check> out;
  const BergmanKernel K = make_bergman(s, m, pd, nullptr, opt.quad);
  const auto [P1, P2] = sample_points(s);
  const cplx b12 = bidifferential(s, K, P1, P2), b21 = bidifferential(s, K, P2, P1);

  {
    double worst = 0;
    for (const CoverPoint& pt : {P1, P2})
      worst = std::max(worst, bergman_a_periods(s, m, K, pt, opt.quad).cwiseAbs().maxCoeff());
    out.push_back(make_check("bergman.a_periods", "a-periods of the Bergman kernel vanish", worst, 0.0, worst, 1e-8));
  }
  {
    const double d = 1e-3;
    const CoverPoint Q{P1.x + d, sqrt_near(s.P(P1.x + d), P1.y), sqrt_near(s.N(P1.x + d), P1.w)};
    const cplx r = bidifferential(s, K, P1, Q) * d * d;
    out.push_back(make_check("bergman.biresidue", "double pole on the diagonal with biresidue 1", r, 1.0,
                             std::abs(r - 1.0), 1e-5));
  }
  out.push_back(make_check("bergman.symmetry", "kernel is symmetric", b12, b21, rel(b12, b21, std::abs(b12)), 1e-9));
  {
    const std::array<cplx, 2> xs{s.x0 + s.sep_all * cplx(-0.5, 0.2), s.x0 + s.sep_all * cplx(0.4, -1.2)};
    const BergmanKernel K2 = make_bergman(s, m, pd, &xs, opt.quad);
    const cplx b = bidifferential(s, K2, P1, P2);
    out.push_back(make_check("bergman.unique", "kernel does not depend on the normalization samples", b, b12,
                             rel(b, b12, std::abs(b12)), 1e-9));
  }
  {
    const DiagonalLimit r1 = s_bergman_richardson(s, K, P1);
    const DiagonalLimit r2 = s_bergman_richardson(s, K, P1, 0.5e-3 * s.sep_all);
    out.push_back(make_check("bergman.SB_offsets", "diagonal limit is stable under halving the offset", r1.value,
                             r2.value, rel(r1.value, r2.value, std::abs(r1.value)), 1e-6));
    const cplx closed = s_bergman(s, K, P1.x);
    out.push_back(make_check("bergman.SB_closed_form", "closed-form projective connection matches the diagonal limit",
                             closed, r1.value, rel(closed, r1.value, std::abs(closed)), 1e-6));
  }

  {
    SpSigma sg;
    sg.C << 1, 1, 1, 0;
    const Marking ms = apply_sp(s, m, sg);
    const PeriodData ps = compute_periods(s, ms, opt.quad);
    const BergmanKernel Ks = make_bergman(s, ms, ps, nullptr, opt.quad);
    double tr = 0, wp = 0, wc = 0;
    cplx trl = 0, trr = 0, wpl = 0, wpr = 0, wcl = 0, wcr = 0;
    for (const CoverPoint& pt : {P1, P2}) {
      const cplx d = s_bergman(s, Ks, pt.x) - s_bergman(s, K, pt.x);
      const cplx f = quad_in_v(pd, sb_transform_coeffs(pd.Omega, sg), pt.x, pt.y);
      if (rel(d, f, std::abs(d)) >= tr) tr = rel(d, f, std::abs(d)), trl = d, trr = f;
      for (int k = 0; k < 2; ++k) {
        const cplx cst = k == 0 ? wirtinger_constant_printed() : wirtinger_constant_consistent();
        const cplx w1 = s_bergman(s, K, pt.x) + quad_in_v(pd, wirtinger_delta(pd.Omega, cst), pt.x, pt.y);
        const cplx w2 = s_bergman(s, Ks, pt.x) + quad_in_v(ps, wirtinger_delta(ps.Omega, cst), pt.x, pt.y);
        const double r = rel(w2, w1, std::abs(w1));
        double& slot = k == 0 ? wp : wc;
        if (r >= slot) {
          slot = r;
          (k == 0 ? wpl : wcl) = w2;
          (k == 0 ? wpr : wcr) = w1;
        }
      }
    }
    out.push_back(make_check("bergman.transform", "change of the Bergman connection under a marking change", trl, trr,
                             tr, 1e-6));
    out.push_back(make_check("bergman.wirtinger_independence", "Wirtinger connection with the printed constant",
                             wpl, wpr, wp, 1e-6));
    out.push_back(make_check("bergman.wirtinger_independence.consistent_constant",
                             "Wirtinger connection with the constant implied by the theta transformation", wcl, wcr, wc,
                             1e-6));
  }

  {
    // (z - z1)^2 u near the first zero, z from a substituted midpoint rule
    const cplx x1 = s.n_roots[0];
    const cplx x = x1 + 1e-3 * s.sep_all * cplx(0.6, 0.8);
    const CoverPoint pc = cover_point(s, x);
    const int n = 2000;
    cplx z = 0;
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) / n;
      const cplx xx = x1 + (x - x1) * t * t;
      z += sqrt_near(s.N(xx), pc.w) / sqrt_near(s.P(xx), pc.y) * (x - x1) * 2.0 * t / double(n);
    }
    const cplx val = z * z * potential_u(s, K, x);
    out.push_back(make_check("bergman.u_pole", "u has coefficient -5/36 at the zeros", val, -5.0 / 36.0,
                             std::abs(val + 5.0 / 36.0) / (5.0 / 36.0), 1e-2));
  }
  {
    const cplx h12 = h_kernel(s, K, P1, P2), h21 = h_kernel(s, K, P2, P1);
    const cplx hm = h_kernel(s, K, involution(P1), P2);
    out.push_back(make_check("bergman.h_symmetry", "h is symmetric and invariant under the involution", h12, h21,
                             std::max(rel(h12, h21, std::abs(h12)), rel(hm, h12, std::abs(h12))), 1e-9));
  }

  // theta function sanity on the period matrix
  {
    const Vec2c z(0.1 + 0.2 * kI, -0.3 + 0.05 * kI);
    const cplx tp = theta(z, pd.Omega), tm = theta(-z, pd.Omega);
    out.push_back(make_check("bergman.theta_even", "theta is even", tp, tm, rel(tp, tm, std::abs(tp)), 1e-12));
    double odd = 0;
    for (const auto& ch : all_characteristics())
      if (!ch.even()) odd = std::max(odd, std::abs(theta(Vec2c::Zero(), pd.Omega, ch)));
    out.push_back(make_check("bergman.theta_odd_zero", "odd theta constants vanish", odd, 0.0, odd, 1e-12));
    const Vec2c mm(1, -2);
    const Vec2c zz = z + pd.Omega * mm;
    const cplx fac = std::exp(-kPi * kI * (mm.transpose() * pd.Omega * mm)(0) - 2.0 * kPi * kI * (mm.transpose() * z)(0));
    const cplx a = theta(zz, pd.Omega), b = fac * tp;
    out.push_back(make_check("bergman.theta_quasi_periodic", "theta quasi-periodicity", a, b, rel(a, b, std::abs(a)),
                             1e-10));
  }
  return out;
}

std::vector<Check> verify_monodromy(const Surface& s, const Marking& m, const PeriodData& pd, const RunOptions& opt) {
  std::vector<Check> out;
  const BergmanKernel K = make_bergman(s, m, pd, nullptr, opt.quad);
  const MonodromyRep rep = representation(s, m, K, opt.ode, opt.threads);

  for (int j = 0; j < 4; ++j) {
    const cplx d = rep.M[j].determinant();
    out.push_back(make_check(std::string("monodromy.det.") + gen_name(j), "monodromy matrices have determinant 1", d,
                             1.0, std::abs(d - 1.0), 1e-9));
  }
  out.push_back(make_check("monodromy.relation", "surface group relation holds", rep.relation_defect(), 0.0,
                           rep.relation_defect(), 1e-7));
  for (int z = 0; z < 4; ++z) {
    const Mat2c L = local_monodromy_zero(s, m, K, z, 0.05, false, opt.ode);
    const double d = (L - kI * Mat2c::Identity()).cwiseAbs().maxCoeff();
    out.push_back(make_check("monodromy.local_zero." + std::to_string(z + 1), "monodromy around a zero is i times identity",
                             L(0, 0), kI, d, 1e-6));
  }

  const std::vector<cplx> leg{s.x0 + s.sep_all * cplx(0.7, 0.4), s.x0};
  for (const auto& w : loop_set()) {
    const cplx moved = transport_word(s, m, K, w, leg, opt.ode).M.trace(), tr = rep.trace(w);
    out.push_back(make_check("monodromy.trace_basepoint." + word_name(w), "traces do not depend on the basepoint", moved,
                             tr, rel(moved, tr, std::max(1.0, std::abs(tr))), 1e-8));
  }
  {
    const cplx direct = transport_word(s, m, K, {1, 2}, {}, opt.ode).M.trace(), tr = rep.trace({1, 2});
    out.push_back(make_check("monodromy.composition", "transport along a product is the product of transports", direct,
                             tr, rel(direct, tr, std::max(1.0, std::abs(tr))), 1e-9));
  }
  {
    // phi-frame agrees with the psi-frame up to the sign of the trace
    double worst = 0;
    cplx l = 0, r = 0;
    for (int j = 1; j <= 4; ++j) {
      const SheetHistory h = continue_sheets(s, word_path(m, expand_gens(m, {j}), true));
      const cplx a = transport_phi(s, K, h, opt.ode).M.trace(), b = rep.trace({j});
      const double d = rel(a * a, b * b, std::max(1.0, std::abs(b * b)));
      if (d >= worst) worst = d, l = a * a, r = b * b;
    }
    out.push_back(make_check("monodromy.phi_frame", "second-order equation in x gives the same squared traces", l, r,
                             worst, 1e-8));
  }
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n{"geometry", "periods", "bergman", "monodromy", "symplectic", "flows"};
  return n;
}

std::vector<Check> run_suite(const std::string& name, const Surface& s, const RunOptions& opt) {
  if (name != "all" && std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
    throw Error(Err::BadInput, "unknown suite " + name);
  const Marking m = standard_marking(s);
  const PeriodData pd = compute_periods(s, m, opt.quad);
  auto want = [&](const char* n) { return name == "all" || name == n; };
  auto chart = [&] {
    ModuliChart c = make_chart(s, m, opt.fd_step);
    c.quad = opt.quad;
    c.threads = opt.threads;
    return c;
  };

  std::vector<Check> out;
  // every check of a batch carries the batch's wall time
  auto add = [&out](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Check> v = fn();
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (Check& c : v) c.wall_time = dt;
    out.insert(out.end(), v.begin(), v.end());
  };
  if (want("geometry")) add([&] { return verify_geometry(s, m, pd, opt); });
  if (want("periods")) add([&] { return verify_periods(s, m, pd, opt); });
  if (want("bergman")) add([&] { return verify_bergman(s, m, pd, opt); });
  if (want("monodromy")) add([&] { return verify_monodromy(s, m, pd, opt); });
  if (want("symplectic")) {
    ModuliChart c = chart();
    BracketEngine be(c);
    add([&] { return verify_bracket_basics(be); });
    add([&] { return verify_canonical(be); });
    add([&] { return verify_variational(c); });
    add([&] { return verify_prym_structure(be); });
    add([&] { return verify_marking_covariance(be); });
    const OdeOptions ode{std::min(opt.ode.tol, 1e-13), std::max(opt.ode.max_steps, 400000)};
    add([&] { return verify_goldman(be, goldman_pairs(), ode); });
  }
  if (want("flows")) {
    ModuliChart c = chart();
    add([&] { return verify_flows(c); });
    add([&] { return verify_picard_lefschetz(s, m, pd); });
  }
  std::stable_sort(out.begin(), out.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
  return out;
}

}  // namespace prym
