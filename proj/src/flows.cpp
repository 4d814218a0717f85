#include "prymlab/flows.hpp"

#include <algorithm>

#include "prymlab/periods.hpp"

namespace prym {

namespace {

double rel(cplx a, cplx b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); }

// smoothstep, so that the zeros stop at the phase boundaries
double ease(double u) { return u * u * (3 - 2 * u); }
double dease(double u) { return 6 * u * (1 - u); }

Surface with_zeros(const Surface& s, cplx z1, cplx z2) {
  Surface out = s;
  const cplx c2 = s.n[2];
  out.n << c2 * z1 * z2, -c2 * (z1 + z2), c2;
  out.n_roots = {z1, z2};
  return out;
}

Vec6c periods_over(const Surface& s, const Marking& m, const std::vector<SheetHistory>& lifts, const QuadOptions& quad) {
  Mat<cplx, Eigen::Dynamic, 1> li(lifts.size(), 1);
  for (std::size_t k = 0; k < lifts.size(); ++k)
    li(k, 0) = integrate_history<1>(s, lifts[k], [](cplx, cplx y, cplx w) { return Vec<cplx, 1>(w / y); }, quad)[0];
  return to_hminus<1>(m, to_cover<1>(m, li));
}

}  // namespace

ActionAngle action_angle(const Vec6c& P) {
  ActionAngle aa;
  aa.I = hamiltonians(P);
  for (int s = 0; s < 3; ++s) aa.phi[s] = 2 * kPi * P[3 + s] / P[s];
  return aa;
}

FlowState flow_start(ModuliChart& c) {
  FlowState st;
  st.theta = c.theta;
  st.P = P_at(c, c.theta);
  return st;
}

FlowState flow(ModuliChart& c, const FlowState& st, int i, double dt, double newton_tol) {
  if (dt == 0) return st;
  if ((c.theta - st.theta).norm() != 0) recenter(c, st.theta);
  std::function<FlowState(const FlowState&, double, int)> step = [&](const FlowState& s0, double h, int depth) {
    Vec6c target = s0.P;
    target[3 + i] += h * s0.P[i] / (2 * kPi);
    try {
      NewtonOptions opt;
      opt.tol = newton_tol;
      opt.recenter_on_success = true;
      NewtonResult r = newton_invert(c, target, opt);
      FlowState out = s0;
      out.theta = r.theta;
      out.P = target;
      out.t[i] += h;
      return out;
    } catch (const Error& e) {
      if ((e.code != Err::NoConvergence && e.code != Err::LeftChart) || depth >= 20) throw;
      FlowState mid = step(s0, 0.5 * h, depth + 1);
      return step(mid, 0.5 * h, depth + 1);
    }
  };
  return step(st, dt, 0);
}

double commutativity_defect(const ModuliChart& c, const FlowState& st, int i, int j, double dt) {
  ModuliChart c1 = c, c2 = c;
  FlowState a = flow(c1, flow(c1, st, i, dt), j, dt);
  FlowState b = flow(c2, flow(c2, st, j, dt), i, dt);
  return (a.theta - b.theta).norm();
}

std::vector<Check> verify_flows(ModuliChart& c) {
  std::vector<Check> out;
  const FlowState st0 = flow_start(c);
  const Vec3c H0 = hamiltonians(st0.P);
  const double Ascale = st0.P.head<3>().norm();

  // level sets and angles over t in [0, 0.1]
  for (int i = 0; i < 3; ++i) {
    ModuliChart ci = c;
    FlowState st = st0;
    double drift = 0, fit = 0;
    cplx worst_l = H0[0], worst_r = H0[0];
    const cplx phi0 = action_angle(st0.P).phi[i];
    for (int k = 1; k <= 10; ++k) {
      st = flow(ci, st, i, 0.01);
      const Vec6c P = P_at(ci, st.theta);
      const Vec3c H = hamiltonians(P);
      for (int j = 0; j < 3; ++j) {
        const double d = rel(H[j], H0[j], std::abs(H0[j]));
        if (d > drift) drift = d, worst_l = H[j], worst_r = H0[j];
      }
      fit = std::max(fit, std::abs(action_angle(P).phi[i] - phi0 - st.t[i]));
    }
    const std::string n = std::to_string(i + 1);
    out.push_back(make_check("flows.H_conservation.t" + n, "actions are constant along a homological flow", worst_l,
                             worst_r, drift, 1e-6));
    out.push_back(make_check("flows.angle_linearity.t" + n, "angle grows linearly in flow time", action_angle(st.P).phi[i],
                             phi0 + st.t[i], fit, 1e-5));
    const double moved = (st.theta - st0.theta).head<3>().norm(), moved_all = (st.theta - st0.theta).norm();
    out.push_back(make_check("flows.moves.t" + n, i < 2 ? "flow moves the base curve" : "flow acts on the chart",
                             i < 2 ? moved : moved_all, 0.0, moved_all > 1e-8 && (i == 2 || moved > 1e-8) ? 0.0 : 1.0,
                             0.0));
  }

  // commutativity
  double same = commutativity_defect(c, st0, 0, 0, 0.01);
  out.push_back(make_check("flows.commute.t1,t1", "a flow commutes with itself", same, 0.0, same, 1e-9));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double d1 = commutativity_defect(c, st0, i, j, 0.01);
      const double d2 = commutativity_defect(c, st0, i, j, 0.005);
      const std::string n = "t" + std::to_string(i + 1) + ",t" + std::to_string(j + 1);
      out.push_back(make_check("flows.commute." + n, "homological flows commute", d1, 0.0, d1, 1e-6));
      // at the Newton floor both defects are noise; otherwise the defect must shrink at least like dt^3
      const double floor = 1e-10 * std::max(1.0, st0.theta.norm());
      const double excess = d2 <= floor ? 0.0 : std::max(0.0, d2 - d1 / 8.0);
      out.push_back(make_check("flows.commute_scaling." + n, "commutator defect is third order in dt", d2, d1 / 8.0,
                               excess, 0.0));
    }

  // equations of motion of Omega and Pi: Richardson in t against quadrature over a_i-
  const ChartPoint cp0 = eval_at(c, st0.theta);
  const Surface& s = cp0.s;
  const PeriodData& pd = cp0.pd;
  auto integrand = [&pd](cplx x, cplx y, cplx w) {
    const Vec2c u = pd.vnorm * Vec2c(1.0, x);
    const Vec3c vp = v_prym(pd, x, y, w);
    Vec<cplx, 9> f;
    f.head<3>() = Vec3c(u[0] * u[0], u[0] * u[1], u[1] * u[1]) / (w * y);
    int k = 3;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) f[k++] = vp[a] * vp[b] * y / w;
    return f;
  };
  QuadOptions qo = c.quad;
  qo.rel_tol = 1e-12;
  const Mat<cplx, 6, 9> I = hminus_integrals<9>(s, cp0.m, integrand, qo);
  auto entries = [](const ChartPoint& cp) {
    Vec<cplx, 9> e;
    e.head<3>() = Vec3c(cp.pd.Omega(0, 0), cp.pd.Omega(0, 1), cp.pd.Omega(1, 1));
    int k = 3;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) e[k++] = cp.pd.Pi(a, b);
    return e;
  };
  const double dt = 0.02;
  for (int i = 0; i < 3; ++i) {
    std::array<Vec<cplx, 9>, 4> v;
    const double hs[4] = {dt, -dt, dt / 2, -dt / 2};
    for (int k = 0; k < 4; ++k) {
      ModuliChart ck = c;
      FlowState sk = flow(ck, st0, i, hs[k]);
      v[k] = entries(eval_at(ck, sk.theta));
    }
    const Vec<cplx, 9> d1 = (v[0] - v[1]) / (2 * dt), d2 = (v[2] - v[3]) / dt;
    const Vec<cplx, 9> lhs = (4.0 * d2 - d1) / 3.0;
    const Vec<cplx, 9> rhs = st0.P[i] / (2 * kPi) * I.row(i).transpose();
    const std::string n = std::to_string(i + 1);
    for (int grp = 0; grp < 2; ++grp) {
      const int lo = grp == 0 ? 0 : 3, len = grp == 0 ? 3 : 6;
      const double scale = std::max(rhs.segment(lo, len).norm(), 1e-12 * Ascale);
      double res = 0;
      int worst = lo;
      for (int k = lo; k < lo + len; ++k)
        if (rel(lhs[k], rhs[k], scale) > res) res = rel(lhs[k], rhs[k], scale), worst = k;
      out.push_back(make_check(grp == 0 ? "flows.Omega_motion.t" + n : "flows.Pi_motion.t" + n,
                               grp == 0 ? "Omega moves by a-periods of v_j v_k / v" : "Pi moves by a-periods of v-_j v-_k / v",
                               lhs[worst], rhs[worst], res, 1e-4));
    }
  }

  // flipping the sign of w changes P to -P and leaves H alone
  {
    const Surface sf = validate_surface(c.base.curve, c.base.qdiff, c.base.x0, -c.base.w0, c.base.y0);
    const PeriodData pf = compute_periods(sf, standard_marking(sf), c.quad);
    const Vec3c Hf = hamiltonians(pf.P());
    double d = 0;
    for (int j = 0; j < 3; ++j) d = std::max(d, rel(Hf[j], H0[j], std::abs(H0[j])));
    out.push_back(make_check("flows.sign_robust", "actions do not see the sign of w", Hf[0], H0[0], d, 1e-8));
  }
  return out;
}

void BraidPath::at(double s, cplx& z1, cplx& z2, cplx& dz1, cplx& dz2) const {
  const int ph = std::clamp(int(std::floor(s)), 0, 2);
  const double u = s - ph, k = ease(u), dk = dease(u);
  const cplx q1 = g + eps * e, q2 = g - eps * e;
  if (ph == 0) {
    z1 = r1 + k * (q1 - r1), dz1 = dk * (q1 - r1);
    z2 = r2 + k * (q2 - r2), dz2 = dk * (q2 - r2);
  } else if (ph == 1) {
    const double sg = reverse ? -1.0 : 1.0;
    const cplx rot = std::polar(1.0, sg * kPi * k), drot = kI * sg * kPi * dk * rot;
    z1 = g + eps * e * rot, dz1 = eps * e * drot;
    z2 = g - eps * e * rot, dz2 = -eps * e * drot;
  } else {
    z1 = q2 + k * (r2 - q2), dz1 = dk * (r2 - q2);
    z2 = q1 + k * (r1 - q1), dz2 = dk * (r1 - q1);
  }
}

BraidPath braid_path(const Surface& s, bool reverse) {
  BraidPath b;
  b.r1 = s.n_roots[0];
  b.r2 = s.n_roots[1];
  b.g = 0.5 * (s.root(2) + s.root(3));
  const cplx d = (b.r1 - b.g) / std::abs(b.r1 - b.g) - (b.r2 - b.g) / std::abs(b.r2 - b.g);
  if (std::abs(d) < 1e-8) throw Error(Err::CollisionCourse, "zeros on the same side of the gap");
  b.e = d / std::abs(d);
  b.eps = 0.1 * s.sep_all;
  b.reverse = reverse;
  // the slides must keep clear of the roots of p
  for (const auto& seg : {std::pair{b.r1, b.g + b.eps * b.e}, std::pair{b.r2, b.g - b.eps * b.e}})
    for (int k = 0; k < 6; ++k)
      if (seg_point_dist(seg.first, seg.second, s.curve.p_roots[k]) < 2 * s.excl())
        throw Error(Err::CollisionCourse, "zero would pass too close to a root of p");
  for (int k = 0; k < 6; ++k)
    if (std::abs(s.curve.p_roots[k] - b.g) < 2 * b.eps) throw Error(Err::CollisionCourse, "gap too narrow");
  return b;
}

std::vector<Vec6c> braid_zeros_path(const ModuliChart& c, int k, int steps, bool reverse) {
  if (k != 1) throw Error(Err::BadInput, "genus 2 has one pair of zeros");
  const BraidPath b = braid_path(c.base, reverse);
  std::vector<Vec6c> out;
  const cplx c2 = c.base.n[2];
  for (int n = 0; n <= 3 * steps; ++n) {
    cplx z1, z2, d1, d2;
    b.at(double(n) / steps, z1, z2, d1, d2);
    Vec6c th = c.theta;
    th[3] = c2 * z1 * z2;
    th[4] = -c2 * (z1 + z2);
    th[5] = c2;
    out.push_back(th);
  }
  return out;
}

BraidTracking track_braid(const Surface& s, const Marking& m, bool reverse, int steps_per_phase,
                          const QuadOptions& quad) {
  const BraidPath b = braid_path(s, reverse);
  const double sep = s.sep_all, hmax = 0.04 * sep, margin = 0.02 * sep;
  const auto roots = s.curve.p_roots;

  // velocity field: each zero carries a disc rigidly, fading out by half the distance to the next singular point
  auto field = [&](double t, cplx x) {
    cplx z[2], dz[2];
    b.at(t, z[0], z[1], dz[0], dz[1]);
    cplx v = 0;
    for (int k = 0; k < 2; ++k) {
      double d = std::abs(z[k] - z[1 - k]);
      for (const cplx& r : roots) d = std::min(d, std::abs(z[k] - r));
      const double rho = 0.25 * d, r = std::abs(x - z[k]);
      if (r < rho) v += dz[k];
      else if (r < 2 * rho) v += dz[k] * (1.0 - ease((r - rho) / rho));
    }
    return v;
  };

  std::vector<std::vector<cplx>> poly;
  std::vector<cplx> ys, ws;
  for (const auto& h : m.lifts) {
    poly.push_back(h.x);
    ys.push_back(h.y.front());
    ws.push_back(h.w.front());
  }

  BraidTracking tr;
  auto record = [&](double t) {
    cplx z1, z2, d1, d2;
    b.at(t, z1, z2, d1, d2);
    const Surface st = with_zeros(s, z1, z2);
    std::vector<SheetHistory> lifts;
    for (std::size_t l = 0; l < poly.size(); ++l) lifts.push_back(continue_sheets(st, Path{poly[l], ys[l], ws[l]}, margin));
    const Vec6c P = periods_over(st, m, lifts, quad);
    if (!tr.P.empty()) tr.max_jump = std::max(tr.max_jump, (P - tr.P.back()).norm() / P.norm());
    tr.s.push_back(t);
    tr.P.push_back(P);
  };
  record(0.0);

  const int n = 3 * steps_per_phase;
  const double h = 1.0 / steps_per_phase;
  for (int step = 0; step < n; ++step) {
    const double t = step * h;
    for (auto& pl : poly) {
      for (auto& x : pl) {
        const cplx k1 = field(t, x), k2 = field(t + h / 2, x + h / 2 * k1), k3 = field(t + h / 2, x + h / 2 * k2),
                   k4 = field(t + h, x + h * k3);
        x += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      std::vector<cplx> fine{pl.front()};
      for (std::size_t i = 1; i < pl.size(); ++i) {
        const int parts = std::max(1, int(std::ceil(std::abs(pl[i] - pl[i - 1]) / hmax)));
        for (int q = 1; q <= parts; ++q) fine.push_back(pl[i - 1] + (pl[i] - pl[i - 1]) * (double(q) / parts));
      }
      pl.swap(fine);
    }
    cplx z1, z2, d1, d2;
    b.at(t + h, z1, z2, d1, d2);
    const Surface st = with_zeros(s, z1, z2);
    for (std::size_t l = 0; l < poly.size(); ++l) {
      ys[l] = sqrt_near(st.P(poly[l].front()), ys[l]);
      ws[l] = sqrt_near(st.N(poly[l].front()), ws[l]);
    }
    if ((step + 1) % (steps_per_phase / 4) == 0) record(t + h);
  }
  if (tr.s.back() != 3.0) record(3.0);
  tr.P_start = tr.P.front();
  tr.P_end = tr.P.back();
  return tr;
}

std::vector<Check> verify_picard_lefschetz(const Surface& s, const Marking& m, const PeriodData& pd) {
  std::vector<Check> out;
  const Vec6c P0 = pd.P();
  const double scale = P0.head<3>().norm();

  const BraidTracking fw = track_braid(s, m, false);
  const BraidTracking bw = track_braid(s, m, true);

  out.push_back(make_check("pl.start", "carried cycles start at the marking", fw.P_start[0], P0[0],
                           (fw.P_start - P0).norm() / P0.norm(), 1e-9));
  // the loop closes: the zeros end on each other's start
  {
    cplx z1, z2, d1, d2;
    braid_path(s).at(3.0, z1, z2, d1, d2);
    const double d = std::abs(z1 - s.n_roots[1]) + std::abs(z2 - s.n_roots[0]);
    out.push_back(make_check("pl.endpoint", "zeros are exchanged", z1, s.n_roots[1], d, 1e-14));
  }
  for (const auto* tr : {&fw, &bw}) {
    const std::string tag = tr == &fw ? "" : ".reverse";
    const double sign = tr == &fw ? 1.0 : -1.0;
    const Vec6c dP = tr->P_end - P0;
    out.push_back(make_check("pl.delta_A" + tag, "a- periods come back", dP.head<3>().norm(), 0.0,
                             dP.head<3>().norm() / scale, 1e-6));
    out.push_back(make_check("pl.delta_B3" + tag, "b3- shifts by the vanishing period", dP[5], sign * P0[2],
                             std::abs(dP[5] - sign * P0[2]) / std::abs(P0[2]), 1e-6));
    // in genus 2 the zeros of Q come in hyperelliptic pairs, so exchanging the roots of N exchanges two pairs
    out.push_back(make_check("pl.delta_B3_both_pairs" + tag, "each exchanged pair of zeros shifts b3- once", dP[5],
                             2.0 * sign * P0[2], std::abs(dP[5] - 2.0 * sign * P0[2]) / std::abs(P0[2]), 1e-6));
    const double other = std::hypot(std::abs(dP[3]), std::abs(dP[4]));
    out.push_back(make_check("pl.delta_B12" + tag, "other b- periods come back", other, 0.0,
                             other / P0.tail<3>().norm(), 1e-6));
    const Vec3c I0 = hamiltonians(P0), I1 = hamiltonians(tr->P_end);
    out.push_back(make_check("pl.actions" + tag, "actions depend on the level set only", I1[2], I0[2],
                             (I1 - I0).norm() / I0.norm(), 1e-8));
  }
  return out;
}

}  // namespace prym
