#include "prymlab/symplectic.hpp"

#include <algorithm>

namespace prym {

namespace {

double max_abs(const MatXc& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// u_j(x) u_k(x) as coefficients of 1, x, x^2
Vec3c product_coeffs(const Mat2c& vn, int j, int k) {
  return Vec3c(vn(j, 0) * vn(k, 0), vn(j, 0) * vn(k, 1) + vn(j, 1) * vn(k, 0), vn(j, 1) * vn(k, 1));
}

// exponent sums of a generator word in (a1, a2, b1, b2)
Eigen::Vector4i homology_of(const std::vector<int>& w) {
  const int slot[4] = {0, 2, 1, 3};
  Eigen::Vector4i h = Eigen::Vector4i::Zero();
  for (int g : w) h[slot[std::abs(g) - 1]] += g > 0 ? 1 : -1;
  return h;
}

int start_germ(int letter) { return 2 * (std::abs(letter) - 1) + (letter > 0 ? 0 : 1); }
int end_germ(int letter) { return 2 * (std::abs(letter) - 1) + (letter > 0 ? 1 : 0); }

std::vector<int> inverse_word(const std::vector<int>& w) {
  std::vector<int> out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// 2-form 2 sum_i dA_i ^ dB_i on theta tangents, from dP/dtheta
Mat6c homological_two_form(const MatXc& dP) {
  Mat6c w = Mat6c::Zero();
  for (int k = 0; k < 6; ++k)
    for (int l = 0; l < 6; ++l)
      for (int i = 0; i < 3; ++i) w(k, l) += 2.0 * (dP(i, k) * dP(3 + i, l) - dP(i, l) * dP(3 + i, k));
  return w;
}

}  // namespace

BracketEngine::BracketEngine(ModuliChart& c) : c_(c) {
  if (!c_.has_J) jacobian(c_);
  K_ = to_double(c_.marking.K).cast<cplx>();
}

MatXc BracketEngine::gradients(const PointFn& f, double* gap) {
  MatXc G = fd_jacobian(c_, f, gap);
  // rows of G J^{-1}
  return c_.J.transpose().partialPivLu().solve(G.transpose()).transpose();
}

VecXc BracketEngine::gradient(const Observable& f) {
  auto it = cache_.find(f.name);
  if (it != cache_.end()) return it->second;
  auto ev = f.eval;
  MatXc G = gradients([ev](const ChartPoint& cp) -> VecXc { return VecXc::Constant(1, ev(cp)); });
  VecXc g = G.row(0).transpose();
  cache_[f.name] = g;
  return g;
}

cplx BracketEngine::bracket(const Observable& f, const Observable& g) {
  VecXc a = gradient(f), b = gradient(g);
  return (a.transpose() * K_ * b)(0);
}

Observable period_observable(int i) {
  static const char* names[6] = {"A1", "A2", "A3", "B1", "B2", "B3"};
  return {names[i], "period", [i](const ChartPoint& cp) { return cp.pd.P()[i]; }};
}

Observable omega_observable(int j, int k) {
  return {"Omega" + std::to_string(j + 1) + std::to_string(k + 1), "period",
          [j, k](const ChartPoint& cp) { return cp.pd.Omega(j, k); }};
}

Vec3c canonical_momenta(const Surface& s, const PeriodData& pd) {
  Mat3c M;
  M.col(0) = product_coeffs(pd.vnorm, 0, 0);
  M.col(1) = product_coeffs(pd.vnorm, 0, 1);
  M.col(2) = product_coeffs(pd.vnorm, 1, 1);
  return M.partialPivLu().solve(Vec3c(s.n[0], s.n[1], s.n[2]));
}

Vec3c omega_entries(const PeriodData& pd) { return Vec3c(pd.Omega(0, 0), pd.Omega(0, 1), pd.Omega(1, 1)); }

cplx flat_coordinate(const Surface& s, const CoverPoint& pt) {
  const cplx r = s.n_roots[0], d = pt.x - r;
  if (std::abs(d) > 0.25 * s.sep_all) throw Error(Err::BadInput, "point too far from the zero for the flat coordinate");
  // x = r + d t^2 removes the square-root behaviour of w at the zero; y and w follow as ratios near 1
  auto f = [&](double t) {
    const cplx x = r + d * t * t;
    const cplx w = pt.w * t * std::sqrt((x - s.n_roots[1]) / (pt.x - s.n_roots[1]));
    cplx y = pt.y;
    for (const auto& e : s.curve.p_roots) y *= std::sqrt((x - e) / (pt.x - e));
    return w / y * 2.0 * d * t;
  };
  cplx sum = 0;
  const int panels = 8;
  for (int p = 0; p < panels; ++p) {
    const double a = double(p) / panels, hw = 0.5 / panels, mid = a + hw;
    cplx part = gk::wk[7] * f(mid);
    for (int i = 0; i < 7; ++i) part += gk::wk[i] * (f(mid - hw * gk::xk[i]) + f(mid + hw * gk::xk[i]));
    sum += hw * part;
  }
  return sum;
}

CoverPoint solve_fixed_z(const Surface& s, const CoverPoint& guess, cplx z) {
  CoverPoint pt{guess.x, sqrt_near(s.P(guess.x), guess.y), sqrt_near(s.N(guess.x), guess.w)};
  for (int it = 0; it < 40; ++it) {
    const cplx dz = flat_coordinate(s, pt) - z;
    if (std::abs(dz) <= 1e-15 * (1.0 + std::abs(z))) return pt;
    const cplx x = pt.x - dz * pt.y / pt.w;
    pt = {x, sqrt_near(s.P(x), pt.y), sqrt_near(s.N(x), pt.w)};
    if (it > 3 && std::abs(dz) <= 1e-13 * (1.0 + std::abs(z))) return pt;
  }
  throw Error(Err::NoConvergence, "fixed-z point did not converge");
}

std::vector<CoverPoint> fixed_z_samples(const Surface& s, const Marking& m, int count) {
  const cplx r = s.n_roots[0];
  const double rad = 0.08 * s.sep_all;
  double clearance = 1e300;
  for (const auto& h : m.lifts)
    for (std::size_t i = 0; i + 1 < h.x.size(); ++i) clearance = std::min(clearance, seg_point_dist(h.x[i], h.x[i + 1], r));
  if (clearance < rad + 0.03 * s.sep_all) throw Error(Err::MarkingFailure, "a cycle passes too close to the first zero");
  std::vector<CoverPoint> out;
  for (int k = 0; k < count; ++k) {
    const cplx x = r + std::polar(rad, 2 * kPi * (k + 0.25) / count);
    out.push_back({x, sqrt_near(s.P(x), s.zeros[0].y), std::sqrt(s.N(x))});
  }
  return out;
}

MatXc fd_along_P(ModuliChart& c, const PointFn& f, double h, double* gap) {
  if (!c.has_J) jacobian(c);
  const Vec6c P0 = P_at(c, c.theta);
  if (h <= 0) h = 2e-3 * std::max(1.0, P0.norm());
  NewtonOptions nopt;
  nopt.tol = 1e-13;
  std::vector<Vec6c> thetas;
  for (int k = 0; k < 6; ++k)
    for (double step : {h, -h, 0.5 * h, -0.5 * h}) {
      Vec6c target = P0;
      target[k] += step;
      thetas.push_back(newton_invert(c, target, nopt).theta);
    }
  auto vals = eval_many(c, thetas, f);
  MatXc jac(vals[0].size(), 6);
  double g = 0;
  for (int k = 0; k < 6; ++k) {
    VecXc d1 = (vals[4 * k] - vals[4 * k + 1]) / (2 * h);
    VecXc d2 = (vals[4 * k + 2] - vals[4 * k + 3]) / h;
    jac.col(k) = (4.0 * d2 - d1) / 3.0;
    g = std::max(g, (jac.col(k) - d2).cwiseAbs().maxCoeff());
  }
  if (gap) *gap = g;
  return jac;
}

std::vector<Check> verify_bracket_basics(BracketEngine& be) {
  const cplx al(0.7, 0.2), bt(-1.3, 0.4);
  MatXc G = be.gradients([al, bt](const ChartPoint& cp) -> VecXc {
    VecXc v(11);
    v.head<6>() = cp.pd.P();
    v.segment<3>(6) = omega_entries(cp.pd);
    v[9] = cp.pd.B[2] * cp.pd.Omega(0, 1);
    v[10] = al * v[9] + bt * cp.pd.Omega(0, 0);
    return v;
  });
  MatXc M = be.bracket_matrix(G);
  std::vector<Check> out;
  out.push_back(make_check("bracket.A1_B1", "bracket of dual periods", M(0, 3), 0.5, std::abs(M(0, 3) - 0.5), 1e-6));
  out.push_back(make_check("bracket.A1_A2", "bracket of disjoint a-periods", M(0, 1), 0.0, std::abs(M(0, 1)), 1e-6));
  const double sc = std::max(1.0, max_abs(G.middleRows(6, 3)));
  out.push_back(make_check("bracket.Omega11_Omega22", "entries of the period matrix commute", M(6, 8), 0.0,
                           std::abs(M(6, 8)) / (sc * sc), 1e-4));
  const double scale = std::max(1e-300, max_abs(M));
  out.push_back(make_check("bracket.antisymmetry", "antisymmetry of the bracket", max_abs(M + M.transpose()), 0.0,
                           max_abs(M + M.transpose()) / scale, 1e-8));
  // {al f + bt g, h} against al {f, h} + bt {g, h}
  double lin = 0;
  for (int h = 0; h < 9; ++h) lin = std::max(lin, std::abs(M(10, h) - al * M(9, h) - bt * M(6, h)));
  out.push_back(make_check("bracket.bilinearity", "bilinearity of the bracket", lin, 0.0, lin / scale, 1e-8));
  return out;
}

std::vector<Check> verify_canonical(BracketEngine& be) {
  ModuliChart& c = be.chart();
  const ChartPoint cp = eval_at(c, c.theta);
  const Vec6c P = cp.pd.P();
  const Vec3c p = canonical_momenta(cp.s, cp.pd);
  double gap = 0;
  MatXc D = fd_jacobian(
      c,
      [](const ChartPoint& q) -> VecXc {
        VecXc v(13);
        v.head<6>() = q.pd.P();
        v.segment<3>(6) = omega_entries(q.pd);
        v.segment<3>(9) = canonical_momenta(q.s, q.pd);
        v[12] = (q.pd.A.transpose() * q.pd.B)(0);
        return v;
      },
      &gap);
  VecXc th_hom(6), th_can(6), dG(6), th_A(6);
  for (int k = 0; k < 6; ++k) {
    th_hom[k] = th_can[k] = th_A[k] = 0;
    for (int i = 0; i < 3; ++i) {
      th_hom[k] += P[i] * D(3 + i, k) - P[3 + i] * D(i, k);
      th_A[k] += 2.0 * P[i] * D(3 + i, k);
    }
    for (int d = 0; d < 3; ++d) th_can[k] += p[d] * D(6 + d, k);
    dG[k] = D(12, k);
  }
  std::vector<Check> out;
  const double sc = max_abs(th_can);
  const Eigen::Index k1 = 0;
  double r1 = max_abs(th_hom - th_can) / sc;
  out.push_back(make_check("canonical.potential", "homological potential equals the canonical potential", th_hom[k1],
                           th_can[k1], r1, 1e-5));
  VecXc rhs = th_A - th_can;
  double r2 = max_abs(dG - rhs) / std::max(max_abs(rhs), max_abs(dG));
  out.push_back(make_check("canonical.generating_function", "sum A_i B_i generates the change to canonical coordinates",
                           dG[k1], rhs[k1], r2, 1e-5));
  // exterior derivative of the difference of potentials, by the product rule on first derivatives
  Mat6c w_hom = homological_two_form(D);
  Mat6c w_can = Mat6c::Zero();
  for (int k = 0; k < 6; ++k)
    for (int l = 0; l < 6; ++l)
      for (int d = 0; d < 3; ++d) w_can(k, l) += D(9 + d, k) * D(6 + d, l) - D(9 + d, l) * D(6 + d, k);
  double r3 = max_abs(w_hom - w_can) / max_abs(w_can);
  out.push_back(make_check("canonical.curl", "exterior derivative of the potential difference vanishes", w_hom(0, 3),
                           w_can(0, 3), r3, 1e-4));
  return out;
}

std::vector<Check> verify_variational(ModuliChart& c) {
  if (!c.has_J) jacobian(c);
  const ChartPoint cp = eval_at(c, c.theta);
  const Surface& s = cp.s;
  const BergmanKernel K = make_bergman(s, cp.m, cp.pd);
  const std::vector<CoverPoint> pts = fixed_z_samples(s, cp.m, 3);
  std::array<cplx, 3> z0, QX;
  for (int a = 0; a < 3; ++a) {
    z0[a] = flat_coordinate(s, pts[a]);
    QX[a] = s.N(pts[a].x) / s.P(pts[a].x);
  }
  const Mat2c vn = cp.pd.vnorm;

  // contour integrals over the H- basis; columns: t^k/(wy) k=0..2, varfa (a, j), varQ (a)
  auto integrand = [&](cplx t, cplx y, cplx w) {
    Vec<cplx, 12> f;
    f[0] = 1.0 / (w * y);
    f[1] = t * f[0];
    f[2] = t * f[1];
    const CoverPoint tp{t, y, w};
    const Vec2c u = vn * Vec2c(1.0, t);
    for (int a = 0; a < 3; ++a) {
      const cplx B = bidifferential(s, K, pts[a], tp);
      for (int j = 0; j < 2; ++j) f[3 + 2 * a + j] = u[j] / w * B * pts[a].y / pts[a].w;
      f[9 + a] = B * B * y / (w * QX[a]);
    }
    return f;
  };
  QuadOptions qo = c.quad;
  qo.rel_tol = std::min(qo.rel_tol, 1e-11);
  const Mat<cplx, 6, 12> I = hminus_integrals<12>(s, cp.m, integrand, qo);
  const Mat6c Dual = to_double(dual_matrix(cp.m.K)).cast<cplx>();
  // the duals are the columns of K^{-T}; row i of Is is the integral over s_i^*
  const Mat<cplx, 6, 12> Is = Dual.transpose() * I;

  // analytic side: rows (Omega11, Omega12, Omega22, f_j(x_a), qhat(x_a)), columns P_i
  MatXc rhs(12, 6);
  const int jk[3][2] = {{0, 0}, {0, 1}, {1, 1}};
  for (int i = 0; i < 6; ++i) {
    for (int e = 0; e < 3; ++e) {
      Vec3c pc = product_coeffs(vn, jk[e][0], jk[e][1]);
      rhs(e, i) = 0.5 * (pc[0] * Is(i, 0) + pc[1] * Is(i, 1) + pc[2] * Is(i, 2));
    }
    for (int a = 0; a < 3; ++a) {
      for (int j = 0; j < 2; ++j) rhs(3 + 2 * a + j, i) = Is(i, 3 + 2 * a + j) / (4.0 * kPi * kI);
      rhs(9 + a, i) = 3.0 * Is(i, 9 + a) / (4.0 * kPi * kI);
    }
  }

  // finite differences along P with the sample points held at fixed z
  PointFn obs = [&pts, &z0, &c](const ChartPoint& q) -> VecXc {
    (void)c;
    VecXc v(12);
    v.head<3>() = omega_entries(q.pd);
    const BergmanKernel Kq = make_bergman(q.s, q.m, q.pd);
    for (int a = 0; a < 3; ++a) {
      const CoverPoint x = solve_fixed_z(q.s, pts[a], z0[a]);
      const Vec2c u = q.pd.vnorm * Vec2c(1.0, x.x);
      v[3 + 2 * a] = u[0] / x.w;
      v[4 + 2 * a] = u[1] / x.w;
      v[9 + a] = qhat(q.s, Kq, x.x);
    }
    return v;
  };
  double gap = 0;
  MatXc fd = fd_along_P(c, obs, -1.0, &gap);

  std::vector<Check> out;
  auto block_residual = [&](int r0, int nr, int& wr, int& wc) {
    const double sc = max_abs(rhs.middleRows(r0, nr));
    double worst = 0;
    for (int r = r0; r < r0 + nr; ++r)
      for (int i = 0; i < 6; ++i) {
        const double res = std::abs(fd(r, i) - rhs(r, i)) / std::max(std::abs(rhs(r, i)), 1e-2 * sc);
        if (res >= worst) worst = res, wr = r, wc = i;
      }
    return worst;
  };
  int wr = 0, wc = 0;
  double rO = block_residual(0, 3, wr, wc);
  out.push_back(make_check("variational.Omega", "period matrix variation over 18 pairs", fd(wr, wc), rhs(wr, wc), rO, 1e-4));
  double rf = block_residual(3, 6, wr, wc);
  out.push_back(make_check("variational.f", "variation of v_j/v at fixed z, 3 points", fd(wr, wc), rhs(wr, wc), rf, 1e-4));
  double rq = block_residual(9, 3, wr, wc);
  out.push_back(make_check("variational.qhat", "variation of the Bergman potential at fixed z, 3 points", fd(wr, wc),
                           rhs(wr, wc), rq, 1e-3));
  double dres = std::abs(Dual(3, 0) + 2.0);
  for (int j = 0; j < 6; ++j)
    if (j != 3) dres += std::abs(Dual(j, 0));
  out.push_back(make_check("variational.dual_a1", "dual of a1- is -2 b1-", Dual(3, 0), -2.0, dres, 0.0));
  return out;
}

std::vector<Check> verify_prym_structure(BracketEngine& be) {
  ModuliChart& c = be.chart();
  const ChartPoint cp = eval_at(c, c.theta);
  const Mat3c Pi = cp.pd.Pi;
  // rows: Omega (3), Pi (9, row-major), V_j G = B_j + (Pi A)_j (3)
  MatXc G = be.gradients([](const ChartPoint& q) -> VecXc {
    VecXc v(15);
    v.head<3>() = omega_entries(q.pd);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) v[3 + 3 * a + b] = q.pd.Pi(a, b);
    v.tail<3>() = q.pd.B + q.pd.Pi * q.pd.A;
    return v;
  });
  // V_i applied to every row
  MatXc V(G.rows(), 3);
  for (int i = 0; i < 3; ++i) {
    V.col(i) = G.col(i);
    for (int j = 0; j < 3; ++j) V.col(i) += Pi(i, j) * G.col(3 + j);
  }
  std::vector<Check> out;
  const double scO = max_abs(G.topRows(3));
  const double rv = max_abs(V.topRows(3)) / scO;
  out.push_back(make_check("prym.vertical_fields", "V_i annihilates the period matrix", V(0, 0), 0.0, rv, 1e-4));

  double rg = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rg = std::max(rg, std::abs(0.5 * V(12 + j, i) - Pi(i, j)));
  rg /= max_abs(Pi);
  out.push_back(make_check("prym.second_lie_derivative", "Prym matrix from second Lie derivatives of sum A B",
                           0.5 * V(12, 0), Pi(0, 0), rg, 1e-4));

  const double scP = max_abs(G.middleRows(3, 9));
  double rs = 0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) rs = std::max(rs, std::abs(V(3 + 3 * k + l, j) - V(3 + 3 * j + l, k)));
  rs /= scP;
  out.push_back(make_check("prym.system", "compatibility system for the Prym matrix", V(3 + 3 * 1 + 2, 0),
                           V(3 + 0 + 2, 1), rs, 1e-3));

  // [V1, V2] = sum_r (V1 Pi_2r - V2 Pi_1r) d/dB_r
  cplx comm = 0;
  for (int r = 0; r < 3; ++r) comm += (V(3 + 3 * 1 + r, 0) - V(3 + 3 * 0 + r, 1)) * G(0, 3 + r);
  const double rc = std::abs(comm) / (scP * scO);
  out.push_back(make_check("prym.commutator", "V1 and V2 commute on Omega11", comm, 0.0, rc, 1e-3));
  return out;
}

std::vector<GoldmanPair> goldman_pairs() {
  auto ls = loop_set();
  std::vector<GoldmanPair> out;
  for (std::size_t i = 0; i < ls.size(); ++i)
    for (std::size_t j = i + 1; j < ls.size(); ++j) out.push_back({ls[i], ls[j]});
  return out;
}

std::array<int, 8> germ_cycle(const std::vector<int>& relation) {
  // corners of the relator polygon: (end of x_i, start of x_{i+1}); chaining them walks once around the vertex
  const int n = int(relation.size());
  std::vector<std::pair<int, int>> corner(n);
  for (int i = 0; i < n; ++i) corner[i] = {end_germ(relation[i]), start_germ(relation[(i + 1) % n])};
  std::array<int, 8> cyc{};
  int c = 0;
  for (int k = 0; k < n; ++k) {
    cyc[k] = corner[c].first;
    int next = -1;
    for (int d = 0; d < n; ++d)
      if (corner[d].first == corner[c].second) next = d;
    c = next;
  }
  return cyc;
}

std::vector<WordCrossing> word_crossings(const std::vector<int>& a, const std::vector<int>& b) {
  for (int g : a)
    if (g < 0) throw Error(Err::BadInput, "crossing enumeration expects positive letters");
  for (int g : b)
    if (g < 0) throw Error(Err::BadInput, "crossing enumeration expects positive letters");
  std::array<int, 8> pos{};
  {
    const auto cyc = germ_cycle({1, 2, -1, -2, 3, 4, -3, -4});
    // the relator polygon walks the vertex clockwise in our marking
    for (int k = 0; k < 8; ++k) pos[cyc[k]] = 7 - k;
  }
  const int n = int(a.size()), m = int(b.size());
  auto A = [](const std::vector<int>& w, int j) { return end_germ(w[j % w.size()]); };
  auto B = [](const std::vector<int>& w, int j) { return start_germ(w[(j + 1) % w.size()]); };
  // sign of the crossing of chords p0->p1 and q0->q1 on a circle with npts positions, 0 if they do not cross
  auto chord_sign = [](int p0, int p1, int q0, int q1, int npts) {
    auto pt = [npts](int k) { return std::polar(1.0, 2 * kPi * k / npts); };
    auto between = [npts](int x, int lo, int hi) { return (x - lo + npts) % npts < (hi - lo + npts) % npts && x != lo; };
    if (between(q0, p0, p1) == between(q1, p0, p1)) return 0;
    const cplx u = pt(p1) - pt(p0), v = pt(q1) - pt(q0);
    return (std::conj(u) * v).imag() > 0 ? 1 : -1;
  };
  std::vector<WordCrossing> out;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < m; ++l) {
      const int a0 = A(a, j), a1 = B(a, j), b0 = A(b, l), b1 = B(b, l);
      if (a0 != b0 && a1 != b1) {
        const int sg = chord_sign(pos[a0], pos[a1], pos[b0], pos[b1], 8);
        if (sg) out.push_back({j, l, sg});
      } else if (a0 != b0 && a1 == b1) {
        // the strands merge here; follow the common letters to where they split
        int t = 1;
        for (; t <= n * m; ++t)
          if (B(a, j + t) != B(b, l + t)) break;
        if (t > n * m) throw Error(Err::BadInput, "words are powers of a common word");
        const int as = A(a, j + t), e1 = B(a, j + t), e2 = B(b, l + t);
        // glue the merge disk (cut at a1) to the split disk (cut at as) along the band
        auto in1 = [&](int g) { return (pos[g] - pos[a1] - 1 + 8) % 8; };
        auto in2 = [&](int g) { return 7 + (pos[g] - pos[as] - 1 + 8) % 8; };
        const int sg = chord_sign(in1(a0), in2(e1), in1(b0), in2(e2), 14);
        if (sg) out.push_back({j, l, sg});
      }
    }
  return out;
}

std::vector<int> rotate_word(const std::vector<int>& w, int start) {
  std::vector<int> out;
  for (std::size_t k = 0; k < w.size(); ++k) out.push_back(w[(start + k) % w.size()]);
  return out;
}

std::vector<Check> verify_goldman(BracketEngine& be, const std::vector<GoldmanPair>& pairs, const OdeOptions& ode) {
  ModuliChart& c = be.chart();
  std::vector<std::vector<int>> loops;
  auto index_of = [&](const std::vector<int>& w) {
    for (std::size_t i = 0; i < loops.size(); ++i)
      if (loops[i] == w) return int(i);
    loops.push_back(w);
    return int(loops.size() - 1);
  };
  std::vector<std::pair<int, int>> idx;
  for (const auto& p : pairs) {
    int a = index_of(p.a);
    int b = index_of(p.b);
    idx.push_back({a, b});
  }
  MatXc G = be.gradients([&loops, ode](const ChartPoint& q) -> VecXc {
    const BergmanKernel K = make_bergman(q.s, q.m, q.pd);
    const MonodromyRep rep = representation(q.s, q.m, K, ode);
    VecXc v(loops.size());
    for (std::size_t i = 0; i < loops.size(); ++i) v[i] = rep.trace(loops[i]);
    return v;
  });
  MatXc L = be.bracket_matrix(G);
  const ChartPoint cp = eval_at(c, c.theta);
  const BergmanKernel K = make_bergman(cp.s, cp.m, cp.pd);
  const MonodromyRep rep = representation(cp.s, cp.m, K, ode);
  const Eigen::Matrix4i I = cp.m.base_int;

  std::vector<Check> out;
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const auto& p = pairs[n];
    const int inter = homology_of(p.a).dot(I * homology_of(p.b));
    const auto xs = word_crossings(p.a, p.b);
    int total = 0;
    cplx rhs = 0;
    for (const auto& x : xs) {
      total += x.sign;
      const auto ra = rotate_word(p.a, x.j + 1), rb = rotate_word(p.b, x.l + 1);
      rhs += -0.5 * double(x.sign) * (rep.trace(concat(ra, rb)) - rep.trace(concat(ra, inverse_word(rb))));
    }
    const cplx lhs = L(idx[n].first, idx[n].second);
    const std::string id = "goldman." + word_name(p.a) + "," + word_name(p.b);
    if (total != inter)
      out.push_back(make_check(id + ".crossings", "crossing signs add up to the intersection number", double(total),
                               double(inter), std::abs(total - inter), 0.0));
    if (xs.empty())
      out.push_back(make_check(id, "traces of disjoint loops commute", lhs, 0.0, std::abs(lhs), 1e-4));
    else
      out.push_back(make_check(id, xs.size() == 1 ? "trace bracket at one intersection" : "trace bracket summed over intersections",
                               lhs, rhs, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12), 1e-3));
  }
  return out;
}

Vec3c sigma_shifted_n(const Surface& s, const PeriodData& pd, const SpSigma& sigma) {
  const Mat2c W = sb_transform_coeffs(pd.Omega, sigma);
  Vec3c n(s.n[0], s.n[1], s.n[2]);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) n -= 0.5 * W(j, k) * product_coeffs(pd.vnorm, j, k);
  return n;
}

std::vector<SpSigma> covariance_sigmas() {
  std::vector<SpSigma> out;
  const int cs[][4] = {{1, 0, 0, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, 0, 0, -1}, {1, 0, 0, 1}, {0, 1, 1, 0}};
  for (const auto& e : cs) {
    SpSigma sg;
    sg.C << e[0], e[1], e[2], e[3];
    out.push_back(sg);
  }
  return out;
}

std::vector<Check> verify_marking_covariance(BracketEngine& be) {
  ModuliChart& c = be.chart();
  const ChartPoint cp = eval_at(c, c.theta);

  // first candidate sigma whose shifted differential is a valid surface with a standard marking
  SpSigma sigma;
  Surface s_sig;
  Marking m_sig;
  bool found = false;
  for (const auto& sg : covariance_sigmas()) {
    try {
      const Vec3c n = sigma_shifted_n(cp.s, cp.pd, sg);
      s_sig = validate_surface(cp.s.curve, QDiffSpec{{n[0], n[1], n[2]}}, cp.s.x0);
      if (s_sig.sep_all < 0.2 * cp.s.sep_all) continue;
      m_sig = standard_marking(s_sig);
      sigma = sg;
      found = true;
      break;
    } catch (const Error&) {
    }
  }
  if (!found) throw Error(Err::MarkingFailure, "no test sigma gives a usable shifted differential");

  const Marking m2 = apply_sp(cp.s, cp.m, sigma);
  const Mat2c Cs = sigma.C.cast<cplx>(), Ds = sigma.D.cast<cplx>();
  const cplx det0 = (Cs * cp.pd.Omega + Ds).determinant();

  // rows: P (6), P^sigma (6), P~ (6), 6 pi i log det (1), Omega (3), sum AB - sum A~B~ (1)
  PointFn f = [&](const ChartPoint& q) -> VecXc {
    const Vec3c n = sigma_shifted_n(q.s, q.pd, sigma);
    Surface s2;
    try {
      s2 = validate_surface(q.s.curve, QDiffSpec{{n[0], n[1], n[2]}}, q.s.x0, s_sig.w0, s_sig.y0);
    } catch (const Error& e) {
      throw Error(Err::LeftChart, e.what());
    }
    align_zeros(s2, s_sig);
    const PeriodData pd2 = compute_periods(s2, follow_marking(s2, m_sig), c.quad);
    const PeriodData pd3 = compute_periods(q.s, follow_marking(q.s, m2), c.quad);
    const cplx det = (Cs * q.pd.Omega + Ds).determinant();
    VecXc v(23);
    v.head<6>() = q.pd.P();
    v.segment<6>(6) = pd2.P();
    v.segment<6>(12) = pd3.P();
    v[18] = 6.0 * kPi * kI * (std::log(det / det0) + std::log(det0));
    v.segment<3>(19) = omega_entries(q.pd);
    v[22] = (q.pd.A.transpose() * q.pd.B)(0) - (pd3.A.transpose() * pd3.B)(0);
    return v;
  };
  const MatXc D = fd_jacobian(c, f);
  const VecXc base = f(cp);

  std::vector<Check> out;
  const Mat6c w1 = homological_two_form(D.topRows(6));
  const Mat6c w2 = homological_two_form(D.middleRows(6, 6));
  out.push_back(make_check("covariance.two_form", "homological 2-forms agree for sigma-related markings", w2(0, 3),
                           w1(0, 3), max_abs(w1 - w2) / max_abs(w1), 1e-4));

  // Q - Q^sigma = 1/2 sum W_jk v_j v_k, so theta_B - theta_B^sigma = sum over (11, 12, 22) of dq dOmega
  const Mat2c W = sb_transform_coeffs(cp.pd.Omega, sigma);
  const Vec3c dq(0.5 * W(0, 0), 0.5 * (W(0, 1) + W(1, 0)), 0.5 * W(1, 1));
  VecXc lhs(6), rhs(6);
  for (int k = 0; k < 6; ++k) {
    lhs[k] = D(18, k);
    rhs[k] = -(dq[0] * D(19, k) + dq[1] * D(20, k) + dq[2] * D(21, k));
  }
  out.push_back(make_check("covariance.sp_generating_function", "6 pi i log det(C Omega + D) generates the marking change",
                           lhs[0], rhs[0], max_abs(lhs - rhs) / max_abs(lhs), 1e-5));

  // theta - theta~ = d(sum A B - sum A~ B~) with theta = 2 sum A dB
  VecXc gl(6), gr(6);
  for (int k = 0; k < 6; ++k) {
    gl[k] = D(22, k);
    gr[k] = 0;
    for (int i = 0; i < 3; ++i) gr[k] += 2.0 * (base[i] * D(3 + i, k) - base[12 + i] * D(15 + i, k));
  }
  out.push_back(make_check("covariance.homological_change", "sum A B - sum A~ B~ generates the change of homological basis",
                           gl[0], gr[0], max_abs(gl - gr) / max_abs(gr), 1e-5));
  double kdev = (to_double(m2.K) - to_double(cp.m.K)).cwiseAbs().maxCoeff();
  out.push_back(make_check("covariance.intersection_form", "intersection form unchanged by sigma", kdev, 0.0, kdev, 0.0));
  return out;
}

}  // namespace prym
