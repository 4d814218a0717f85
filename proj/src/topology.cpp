#include "prymlab/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace prym {

namespace {

long long gcd_ll(long long a, long long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

cplx unit(cplx z) { return z / std::abs(z); }

// Lift indices in Marking::lifts.
enum LiftId { A1, A1M, B1, B1M, A2, A2M, B2, B2M, AT, ATM, BT, BTM, NLIFT };

// Geometry shared by the standard construction and by follow_marking.
struct Layout {
  std::array<cplx, 6> e;
  std::array<cplx, 6> rail;  // rail vertices near each spine root
  cplx hub;
  std::array<std::vector<cplx>, 4> caps;  // capsules for a1, b1, a2, b2
  std::vector<cplx> at, bt;
  std::vector<std::vector<cplx>> elem;
};

constexpr double kRhoA = 0.2, kRhoB = 0.3, kRhoRail = 0.15, kRhoAt = 0.13, kRhoBt = 0.16, kRhoZero = 0.15;

// generator words over elementary loops gamma_1..gamma_6 (path order)
const std::array<Word, 4> kGens = {Word{6, 5}, Word{4, 5}, Word{3, 2}, Word{1, 2}};
// spine intervals surrounded by the capsules of a1, b1, a2, b2
const std::array<std::array<int, 2>, 4> kCapSpan = {{{4, 5}, {3, 4}, {1, 2}, {0, 1}}};

Layout make_layout(const Surface& s) {
  Layout L;
  const double sep = s.sep_all;
  for (int k = 0; k < 6; ++k) L.e[k] = s.root(k);

  std::array<cplx, 5> nrm;
  for (int k = 0; k < 5; ++k) nrm[k] = kI * unit(L.e[k + 1] - L.e[k]);
  for (int k = 0; k < 6; ++k) {
    cplx m;
    if (k == 0) m = nrm[0];
    else if (k == 5) m = nrm[4];
    else {
      double dot = (std::conj(nrm[k - 1]) * nrm[k]).real();
      m = (nrm[k - 1] + nrm[k]) / (1.0 + dot);
    }
    L.rail[k] = L.e[k] + kRhoRail * sep * m;
  }
  L.hub = 0.5 * (L.rail[2] + L.rail[3]);

  for (int g = 0; g < 4; ++g) {
    std::vector<cplx> spine;
    for (int k = kCapSpan[g][0]; k <= kCapSpan[g][1]; ++k) spine.push_back(L.e[k]);
    L.caps[g] = capsule(spine, (g % 2 == 0 ? kRhoA : kRhoB) * sep);
  }

  const cplx r1 = s.n_roots[0], r2 = s.n_roots[1];
  const cplx gap = 0.5 * (L.e[2] + L.e[3]);
  L.at = capsule({r1, gap, r2}, kRhoAt * sep);
  const cplx eb = std::abs(L.e[2] - r1) <= std::abs(L.e[3] - r1) ? L.e[2] : L.e[3];
  std::vector<cplx> once = capsule({r1, eb}, kRhoBt * sep);
  L.bt = once;
  L.bt.insert(L.bt.end(), once.begin() + 1, once.end());

  // elementary loops: along the rail from the hub, once around the root, back
  for (int k = 0; k < 6; ++k) {
    std::vector<cplx> out{L.hub};
    if (k <= 2)
      for (int j = 2; j >= k; --j) out.push_back(L.rail[j]);
    else
      for (int j = 3; j <= k; ++j) out.push_back(L.rail[j]);
    std::vector<cplx> loop = out;
    std::vector<cplx> c = circle_from(L.e[k], L.rail[k]);
    loop.insert(loop.end(), c.begin() + 1, c.end());
    for (int j = int(out.size()) - 2; j >= 0; --j) loop.push_back(out[j]);
    L.elem.push_back(loop);
  }
  for (int z = 0; z < 2; ++z) {
    const cplx r = s.n_roots[z];
    const cplx start = r + kRhoZero * sep * unit(L.hub - r);
    std::vector<cplx> loop{L.hub, start};
    std::vector<cplx> c = circle_from(r, start);
    loop.insert(loop.end(), c.begin() + 1, c.end());
    loop.push_back(L.hub);
    L.elem.push_back(loop);
  }
  return L;
}

void require_clear(const Surface& s, const std::vector<cplx>& v, const char* what) {
  if (!path_clear(s, v, s.excl())) throw Error(Err::MarkingFailure, std::string("cannot route ") + what);
}

SheetHistory lift_from(const Surface& s, const std::vector<cplx>& poly, cplx y, cplx w) {
  return continue_sheets(s, Path{poly, y, w});
}

SheetHistory mu(const SheetHistory& h) {
  SheetHistory m = h;
  for (auto& w : m.w) w = -w;
  return m;
}

// sheets at the end of a straight continuation from the hub
std::pair<cplx, cplx> sheets_from_hub(const Surface& s, const Marking& m, cplx target, const char* what) {
  std::vector<cplx> seg{m.hub, target};
  require_clear(s, seg, what);
  SheetHistory h = continue_sheets(s, Path{seg, m.hub_y, m.hub_w});
  return {h.y.back(), h.w.back()};
}

Vec3c base_forms(const Surface& s, const SheetHistory& h) {
  return integrate_history<3>(s, h, [](cplx x, cplx y, cplx w) { return Vec3c(1.0 / y, x / y, w / y); });
}

void finish_hminus(Marking& m) {
  // cover basis rows: 0 a1, 1 a2, 2 a1mu, 3 a2mu, 4 at, 5 b1, 6 b2, 7 b1mu, 8 b2mu, 9 bt
  m.hminus = RatMat(6, 10);
  const Rational h(1, 2), mh(-1, 2);
  m.hminus(0, 0) = h, m.hminus(0, 2) = mh;
  m.hminus(1, 1) = h, m.hminus(1, 3) = mh;
  m.hminus(2, 4) = Rational(1);
  m.hminus(3, 5) = h, m.hminus(3, 7) = mh;
  m.hminus(4, 6) = h, m.hminus(4, 8) = mh;
  m.hminus(5, 9) = Rational(1);

  m.cover_int = m.cover * m.lift_int * m.cover.transpose();
  m.K = RatMat(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      Rational acc;
      for (int p = 0; p < 10; ++p)
        for (int q = 0; q < 10; ++q) {
          if (m.hminus(i, p).num == 0 || m.hminus(j, q).num == 0 || m.cover_int(p, q) == 0) continue;
          acc = acc + m.hminus(i, p) * m.hminus(j, q) * Rational(m.cover_int(p, q));
        }
      int roots = int(m.inv_sqrt2[i]) + int(m.inv_sqrt2[j]);
      if (roots == 1 && acc.num != 0) throw Error(Err::MarkingFailure, "H- form is not rational");
      if (roots == 2) acc = acc * Rational(1, 2);
      m.K(i, j) = acc;
    }
}

Eigen::MatrixXi lift_intersections(const Surface& s, const std::vector<SheetHistory>& lifts) {
  const int n = int(lifts.size());
  Eigen::MatrixXi I = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      I(i, j) = crossing_number(s, lifts[i], lifts[j]);
      I(j, i) = -I(i, j);
    }
  return I;
}

Marking build(const Surface& s, const Marking* ref) {
  Marking m;
  Layout L = make_layout(s);
  m.hub = L.hub;
  m.stem = {s.x0, L.hub};
  require_clear(s, m.stem, "the stem from the basepoint");
  m.base_y = s.y0;
  m.base_w = s.w0;
  SheetHistory st = continue_sheets(s, Path{m.stem, s.y0, s.w0});
  m.hub_y = st.y.back();
  m.hub_w = st.w.back();
  m.elem = L.elem;
  for (auto& e : m.elem) require_clear(s, e, "an elementary loop");
  m.gens = ref ? ref->gens : kGens;

  m.lifts.resize(NLIFT);
  m.lift_names = {"a1", "a1mu", "b1", "b1mu", "a2", "a2mu", "b2", "b2mu", "at", "atmu", "bt", "btmu"};
  const int ids[4] = {A1, B1, A2, B2};
  for (int g = 0; g < 4; ++g) {
    require_clear(s, L.caps[g], "a capsule");
    const cplx c0 = L.caps[g][0];
    cplx y, w;
    if (ref) {
      y = sqrt_near(s.P(c0), ref->lifts[ids[g]].y.front());
      w = sqrt_near(s.N(c0), ref->lifts[ids[g]].w.front());
    } else {
      // choose the lift homologous to the generator word
      Word word = m.gens[g];
      SheetHistory hw = continue_sheets(s, word_path(m, word, true));
      Vec3c target = base_forms(s, hw);
      y = std::sqrt(s.P(c0));
      w = std::sqrt(s.N(c0));
      Vec3c got = base_forms(s, lift_from(s, L.caps[g], y, w));
      const double scale = target.cwiseAbs().maxCoeff();
      int sy = (target.head<2>() - got.head<2>()).norm() <= (target.head<2>() + got.head<2>()).norm() ? 1 : -1;
      int sv = std::abs(target[2] - got[2]) <= std::abs(target[2] + got[2]) ? 1 : -1;
      y *= double(sy);
      w *= double(sy * sv);
      Vec3c chk(double(sy) * got[0], double(sy) * got[1], double(sv) * got[2]);
      if ((chk - target).cwiseAbs().maxCoeff() > 1e-6 * scale)
        throw Error(Err::MarkingFailure, "capsule is not homologous to its generator word");
    }
    m.lifts[ids[g]] = lift_from(s, L.caps[g], y, w);
    m.lifts[ids[g] + 1] = mu(m.lifts[ids[g]]);
  }

  require_clear(s, L.at, "the zero-pair loop");
  require_clear(s, L.bt, "the threading loop");
  auto start_sheet = [&](const std::vector<cplx>& poly, int id, const char* what) {
    if (ref) return std::make_pair(sqrt_near(s.P(poly[0]), ref->lifts[id].y.front()),
                                   sqrt_near(s.N(poly[0]), ref->lifts[id].w.front()));
    return sheets_from_hub(s, m, poly[0], what);
  };
  auto [ya, wa] = start_sheet(L.at, AT, "to the zero-pair loop");
  m.lifts[AT] = lift_from(s, L.at, ya, wa);
  m.lifts[ATM] = mu(m.lifts[AT]);
  auto [yb, wb] = start_sheet(L.bt, BT, "to the threading loop");
  m.lifts[BT] = lift_from(s, L.bt, yb, wb);
  m.lifts[BTM] = mu(m.lifts[BT]);
  for (int k : {AT, BT}) {
    const auto& h = m.lifts[k];
    if (std::abs(h.y.back() - h.y.front()) > 1e-8 * std::abs(h.y.front()) ||
        std::abs(h.w.back() - h.w.front()) > 1e-8 * std::abs(h.w.front()))
      throw Error(Err::MarkingFailure, "cover loop does not close");
  }

  m.lift_int = lift_intersections(s, m.lifts);

  if (ref) {
    m.cover = ref->cover;
    m.base_int = ref->base_int;
    m.fixes = ref->fixes;
    finish_hminus(m);
    return m;
  }

  const Eigen::MatrixXi& I = m.lift_int;
  m.cover = Eigen::MatrixXi::Zero(10, NLIFT);
  const int rows[10] = {A1, A2, A1M, A2M, AT, B1, B2, B1M, B2M, BT};
  for (int r = 0; r < 10; ++r) m.cover(r, rows[r]) = 1;

  // base intersections of (a1, a2, b1, b2)
  const int bl[4] = {A1, A2, B1, B2};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m.base_int(i, j) = i == j ? 0 : crossing_number(s, m.lifts[bl[i]], m.lifts[bl[j]], false);
  for (int j = 0; j < 2; ++j)
    if (m.base_int(j, j + 2) != 1)
      throw Error(Err::MarkingFailure, "generator capsules give a" + std::to_string(j + 1) + " o b" +
                                           std::to_string(j + 1) + " = " + std::to_string(m.base_int(j, j + 2)));

  // make at, bt orthogonal to the lifted base cycles by adding anti-invariant combinations
  auto orthogonalize = [&](int row) {
    Eigen::VectorXi x = m.cover.row(row).transpose();
    Eigen::VectorXi corr = x;
    for (int j = 0; j < 2; ++j) {
      const int a = j == 0 ? A1 : A2, am = a + 1, b = j == 0 ? B1 : B2, bm = b + 1;
      int xa = (x.transpose() * I.col(a))(0), xb = (x.transpose() * I.col(b))(0);
      // (b - bmu) o a = -1 and (a - amu) o b = 1
      corr[b] += xa, corr[bm] -= xa;
      corr[a] -= xb, corr[am] += xb;
      if (xa != 0 || xb != 0)
        m.fixes.push_back(m.lift_names[row == 4 ? AT : BT] + " shifted by (" + std::to_string(-xb) + ")(a" +
                          std::to_string(j + 1) + "-a" + std::to_string(j + 1) + "mu) + (" + std::to_string(xa) +
                          ")(b" + std::to_string(j + 1) + "-b" + std::to_string(j + 1) + "mu)");
    }
    m.cover.row(row) = corr.transpose();
  };
  orthogonalize(4);
  orthogonalize(9);
  int tb = (m.cover.row(4) * I * m.cover.row(9).transpose())(0);
  if (tb == -1) {
    m.cover.row(9) *= -1;
    m.fixes.push_back("bt reversed");
  } else if (tb != 1) {
    throw Error(Err::MarkingFailure, "at o bt = " + std::to_string(tb));
  }

  finish_hminus(m);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      Rational want = (j == i + 3) ? Rational(1, 2) : (i == j + 3) ? Rational(-1, 2) : Rational(0);
      if (!(m.K(i, j) == want)) throw Error(Err::MarkingFailure, "intersection table is not canonical");
    }
  return m;
}

}  // namespace

Rational::Rational(long long n, long long d) {
  if (d == 0) throw Error(Err::BadInput, "zero denominator");
  if (d < 0) n = -n, d = -d;
  long long g = gcd_ll(n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

double seg_point_dist(cplx a, cplx b, cplx p) {
  cplx d = b - a;
  double L2 = std::norm(d);
  double t = L2 > 0 ? std::clamp(((p - a) * std::conj(d)).real() / L2, 0.0, 1.0) : 0.0;
  return std::abs(a + t * d - p);
}

bool path_clear(const Surface& s, const std::vector<cplx>& v, double margin) {
  for (auto q : s.singular()) {
    if (v.size() == 1 && std::abs(v[0] - q) <= margin) return false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (seg_point_dist(v[i], v[i + 1], q) <= margin) return false;
  }
  return true;
}

SheetHistory continue_sheets(const Surface& s, const Path& path, double margin) {
  if (margin < 0) margin = s.excl();
  if (path.v.empty()) return {};
  if (!path_clear(s, path.v, margin)) throw Error(Err::NearSingularPoint, "path enters an exclusion disk");
  SheetHistory h;
  h.x.push_back(path.v[0]);
  h.y.push_back(sqrt_near(s.P(path.v[0]), path.y0));
  h.w.push_back(sqrt_near(s.N(path.v[0]), path.w0));
  const double hmin = 1e-6 * s.sep_all;
  const double hmax = 0.5 * s.sep_all;
  struct Seg {
    cplx a, b;
  };
  for (std::size_t i = 0; i + 1 < path.v.size(); ++i) {
    const cplx a = path.v[i], b = path.v[i + 1];
    if (a == b) continue;
    int n = std::max(1, int(std::ceil(std::abs(b - a) / hmax)));
    for (int k = 0; k < n; ++k) {
      std::vector<Seg> stack{{a + (b - a) * (double(k) / n), k + 1 == n ? b : a + (b - a) * (double(k + 1) / n)}};
      while (!stack.empty()) {
        Seg sg = stack.back();
        stack.pop_back();
        const cplx ya = h.y.back(), wa = h.w.back();
        const cplx yb = sqrt_near(s.P(sg.b), ya), wb = sqrt_near(s.N(sg.b), wa);
        if (std::abs(yb - ya) <= 0.2 * std::abs(yb) && std::abs(wb - wa) <= 0.2 * std::abs(wb)) {
          h.x.push_back(sg.b);
          h.y.push_back(yb);
          h.w.push_back(wb);
          continue;
        }
        if (std::abs(sg.b - sg.a) < hmin) throw Error(Err::AmbiguousContinuation, "branches cannot be separated");
        const cplx mid = 0.5 * (sg.a + sg.b);
        stack.push_back({mid, sg.b});
        stack.push_back({sg.a, mid});
      }
    }
  }
  return h;
}

std::vector<cplx> capsule(const std::vector<cplx>& spine, double rho, int cap_pts) {
  const int n = int(spine.size());
  std::vector<cplx> nrm(n - 1);
  for (int k = 0; k + 1 < n; ++k) nrm[k] = kI * unit(spine[k + 1] - spine[k]);
  auto miter = [&](int k) -> cplx {
    if (k == 0) return nrm[0];
    if (k == n - 1) return nrm[n - 2];
    double dot = (std::conj(nrm[k - 1]) * nrm[k]).real();
    return (nrm[k - 1] + nrm[k]) / (1.0 + dot);
  };
  std::vector<cplx> out;
  for (int k = 0; k < n; ++k) out.push_back(spine[k] - rho * miter(k));
  const double a_end = std::arg(-nrm[n - 2]);
  for (int j = 1; j < cap_pts; ++j) out.push_back(spine[n - 1] + rho * std::polar(1.0, a_end + kPi * j / cap_pts));
  for (int k = n - 1; k >= 0; --k) out.push_back(spine[k] + rho * miter(k));
  const double a_start = std::arg(nrm[0]);
  for (int j = 1; j < cap_pts; ++j) out.push_back(spine[0] + rho * std::polar(1.0, a_start + kPi * j / cap_pts));
  out.push_back(out.front());
  return out;
}

std::vector<cplx> circle_from(cplx c, cplx start, int n) {
  std::vector<cplx> out;
  const cplx r = start - c;
  for (int j = 0; j < n; ++j) out.push_back(c + r * std::polar(1.0, 2.0 * kPi * j / n));
  out.push_back(start);
  return out;
}

int w_holonomy(const SheetHistory& h) {
  return std::abs(h.w.back() - h.w.front()) <= std::abs(h.w.back() + h.w.front()) ? 1 : -1;
}

int crossing_number(const Surface& s, const SheetHistory& c1, const SheetHistory& c2, bool cover) {
  int total = 0;
  const double tiny = 1e-12;
  for (std::size_t i = 0; i + 1 < c1.size(); ++i) {
    const cplx a1 = c1.x[i], b1 = c1.x[i + 1], d1 = b1 - a1;
    const double xmin1 = std::min(a1.real(), b1.real()), xmax1 = std::max(a1.real(), b1.real());
    const double ymin1 = std::min(a1.imag(), b1.imag()), ymax1 = std::max(a1.imag(), b1.imag());
    for (std::size_t j = 0; j + 1 < c2.size(); ++j) {
      const cplx a2 = c2.x[j], b2 = c2.x[j + 1];
      if (std::max(a2.real(), b2.real()) < xmin1 || std::min(a2.real(), b2.real()) > xmax1 ||
          std::max(a2.imag(), b2.imag()) < ymin1 || std::min(a2.imag(), b2.imag()) > ymax1)
        continue;
      const cplx d2 = b2 - a2;
      const double den = cross(d1, d2);
      const double scale = std::abs(d1) * std::abs(d2);
      auto same_sheet = [&](cplx X, double t, double u) {
        cplx y1 = sqrt_near(s.P(X), c1.y[i] + t * (c1.y[i + 1] - c1.y[i]));
        cplx y2 = sqrt_near(s.P(X), c2.y[j] + u * (c2.y[j + 1] - c2.y[j]));
        if (std::abs(y1 - y2) > std::abs(y1 + y2)) return false;
        if (!cover) return true;
        cplx w1 = sqrt_near(s.N(X), c1.w[i] + t * (c1.w[i + 1] - c1.w[i]));
        cplx w2 = sqrt_near(s.N(X), c2.w[j] + u * (c2.w[j + 1] - c2.w[j]));
        return std::abs(w1 - w2) <= std::abs(w1 + w2);
      };
      if (std::abs(den) <= tiny * scale) {
        // parallel: only an overlap on matching sheets is a problem
        if (std::abs(cross(a2 - a1, d1)) > tiny * std::abs(d1) * (std::abs(a2 - a1) + std::abs(d1))) continue;
        const double L2 = std::norm(d1);
        double t0 = ((a2 - a1) * std::conj(d1)).real() / L2, t1 = ((b2 - a1) * std::conj(d1)).real() / L2;
        double lo = std::max(0.0, std::min(t0, t1)), hi = std::min(1.0, std::max(t0, t1));
        if (lo > hi) continue;
        double tm = 0.5 * (lo + hi);
        cplx X = a1 + tm * d1;
        double um = std::abs(d2) > 0 ? ((X - a2) * std::conj(d2)).real() / std::norm(d2) : 0.0;
        if (same_sheet(X, tm, um)) throw Error(Err::TangencyDetected, "overlapping segments on one sheet");
        continue;
      }
      const double t = cross(a2 - a1, d2) / den;
      const double u = cross(a2 - a1, d1) / den;
      const double eps = 1e-10;
      if (t < -eps || t > 1 + eps || u < -eps || u > 1 + eps) continue;
      const cplx X = a1 + t * d1;
      const bool edge = t < eps || t > 1 - eps || u < eps || u > 1 - eps;
      if (!same_sheet(X, std::clamp(t, 0.0, 1.0), std::clamp(u, 0.0, 1.0))) continue;
      if (edge) throw Error(Err::TangencyDetected, "crossing at a vertex");
      total += den > 0 ? 1 : -1;
    }
  }
  return total;
}

bool SpSigma::symplectic() const {
  Eigen::Matrix4i S;
  S << A, B, C, D;
  Eigen::Matrix4i J = Eigen::Matrix4i::Zero();
  J.topRightCorner<2, 2>().setIdentity();
  J.bottomLeftCorner<2, 2>() = -Eigen::Matrix2i::Identity();
  return S.transpose() * J * S == J;
}

Eigen::Matrix4i SpSigma::action() const {
  Eigen::Matrix4i M;
  M << D, C, B, A;
  return M;
}

Marking standard_marking(const Surface& s) { return build(s, nullptr); }

Marking follow_marking(const Surface& s, const Marking& ref) { return build(s, &ref); }

Path word_path(const Marking& m, const Word& w, bool with_stem) {
  Path p;
  p.v = with_stem ? m.stem : std::vector<cplx>{m.hub};
  for (int letter : w) {
    const auto& loop = m.elem.at(std::abs(letter) - 1);
    if (letter > 0)
      p.v.insert(p.v.end(), loop.begin() + 1, loop.end());
    else
      p.v.insert(p.v.end(), loop.rbegin() + 1, loop.rend());
  }
  if (with_stem) p.v.push_back(m.stem.front());
  p.y0 = with_stem ? m.base_y : m.hub_y;
  p.w0 = with_stem ? m.base_w : m.hub_w;
  return p;
}

Word expand_gens(const Marking& m, const std::vector<int>& gen_word) {
  Word out;
  for (int g : gen_word) {
    const Word& w = m.gens.at(std::abs(g) - 1);
    if (g > 0)
      out.insert(out.end(), w.begin(), w.end());
    else
      for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  }
  return out;
}

Vec<double, 6> class_in_hminus(const Surface& s, const Marking& m, const std::vector<int>& gen_word) {
  SheetHistory h = continue_sheets(s, word_path(m, expand_gens(m, gen_word), false));
  if (w_holonomy(h) != 1) throw Error(Err::NontrivialHolonomy, "loop flips the sheet of w");
  Vec<double, 6> c = Vec<double, 6>::Zero();
  // generator order alpha1, beta1, alpha2, beta2 -> H- slots a1-, b1-, a2-, b2-
  const int slot[4] = {0, 3, 1, 4};
  for (int g : gen_word) c[slot[std::abs(g) - 1]] += g > 0 ? 1.0 : -1.0;
  return c;
}

Marking adjust_generator(const Surface& s, const Marking& m, int j, int zero_id) {
  if (j < 0 || j > 3) throw Error(Err::InvalidMove, "generator index out of range");
  if (zero_id < 0 || zero_id > 1) throw Error(Err::InvalidMove, "no such zero in the routing data");
  Marking out = m;
  out.gens[j].push_back(7 + zero_id);
  (void)s;
  return out;
}

Marking apply_sp(const Surface& s, const Marking& m, const SpSigma& sigma) {
  if (!sigma.symplectic()) throw Error(Err::NotSymplectic, "sigma^T J sigma != J");
  (void)s;
  Marking out = m;
  const Eigen::Matrix4i act = sigma.action();
  // old base rows in the cover basis: a1 ->0, a2 ->1, b1 ->5, b2 ->6 and mu images 2, 3, 7, 8
  const int plus[4] = {0, 1, 5, 6}, minus[4] = {2, 3, 7, 8};
  Eigen::MatrixXi cov = m.cover;
  for (int r = 0; r < 4; ++r) {
    Eigen::RowVectorXi p = Eigen::RowVectorXi::Zero(m.cover.cols()), q = p;
    for (int c = 0; c < 4; ++c) {
      p += act(r, c) * m.cover.row(plus[c]);
      q += act(r, c) * m.cover.row(minus[c]);
    }
    cov.row(plus[r]) = p;
    cov.row(minus[r]) = q;
  }
  out.cover = cov;
  Eigen::Matrix4i A = act.cast<int>();
  out.base_int = A * m.base_int * A.transpose();
  finish_hminus(out);
  return out;
}

Mat<double, 6, 6> to_double(const RatMat& r) {
  Mat<double, 6, 6> d;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) d(i, j) = r(i, j).value();
  return d;
}

RatMat dual_matrix(const RatMat& K) {
  // K = 1/2 J for a canonical table, so K^{-T} = 2 J; computed exactly by Gauss-Jordan over Q.
  const int n = K.rows;
  RatMat a(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = K(j, i);
    a(i, n + i) = Rational(1);
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && a(p, c).num == 0) ++p;
    if (p == n) throw Error(Err::MarkingFailure, "singular intersection form");
    for (int j = 0; j < 2 * n; ++j) std::swap(a(c, j), a(p, j));
    Rational inv(a(c, c).den, a(c, c).num);
    for (int j = 0; j < 2 * n; ++j) a(c, j) = a(c, j) * inv;
    for (int r = 0; r < n; ++r) {
      if (r == c || a(r, c).num == 0) continue;
      Rational f = a(r, c);
      for (int j = 0; j < 2 * n; ++j) a(r, j) = a(r, j) - f * a(c, j);
    }
  }
  RatMat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = a(i, n + j);
  return out;
}

std::vector<cplx> zero_loop(const Surface& s, const Marking& m, int zero_id, double radius_factor) {
  const cplx r = s.n_roots.at(zero_id);
  const double rad = radius_factor * s.sep_all;
  const cplx start = r + rad * unit(m.hub - r);
  std::vector<cplx> loop{m.hub, start};
  std::vector<cplx> c = circle_from(r, start, 24);
  loop.insert(loop.end(), c.begin() + 1, c.end());
  loop.push_back(m.hub);
  return loop;
}

}  // namespace prym
