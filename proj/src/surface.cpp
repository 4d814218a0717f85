#include "prymlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace prym {

const char* err_name(Err e) {
  switch (e) {
    case Err::DuplicateRoots: return "DuplicateRoots";
    case Err::DegenerateZeros: return "DegenerateZeros";
    case Err::ZeroAtBranchPoint: return "ZeroAtBranchPoint";
    case Err::NearSingularPoint: return "NearSingularPoint";
    case Err::AmbiguousContinuation: return "AmbiguousContinuation";
    case Err::MarkingFailure: return "MarkingFailure";
    case Err::InvalidMove: return "InvalidMove";
    case Err::TangencyDetected: return "TangencyDetected";
    case Err::NontrivialHolonomy: return "NontrivialHolonomy";
    case Err::NotSymplectic: return "NotSymplectic";
    case Err::CollisionCourse: return "CollisionCourse";
    case Err::PrecisionLoss: return "PrecisionLoss";
    case Err::SingularNormalization: return "SingularNormalization";
    case Err::IllConditioned: return "IllConditioned";
    case Err::NoConvergence: return "NoConvergence";
    case Err::LeftChart: return "LeftChart";
    case Err::NotPositiveDefinite: return "NotPositiveDefinite";
    case Err::DiagonalTooClose: return "DiagonalTooClose";
    case Err::ExtrapolationUnstable: return "ExtrapolationUnstable";
    case Err::WirtingerSingular: return "WirtingerSingular";
    case Err::StepFailure: return "StepFailure";
    case Err::PathThroughZero: return "PathThroughZero";
    case Err::BadInput: return "BadInput";
  }
  return "Unknown";
}

cplx Surface::dP(cplx x) const { return horner(poly_derivative(p), x); }
cplx Surface::ddP(cplx x) const { return horner(poly_derivative(poly_derivative(p)), x); }

std::array<cplx, 8> Surface::singular() const {
  std::array<cplx, 8> s;
  for (int k = 0; k < 6; ++k) s[k] = curve.p_roots[k];
  s[6] = n_roots[0];
  s[7] = n_roots[1];
  return s;
}

double Surface::dist_singular(cplx x) const {
  double d = 1e300;
  for (auto s : singular()) d = std::min(d, std::abs(x - s));
  return d;
}

int cover_genus(int g) {
  if (g < 2) throw Error(Err::BadInput, "genus must be at least 2");
  return 4 * g - 3;
}

int hminus_dim(int g) { return 6 * g - 6; }

Surface validate_surface(const CurveSpec& curve, const QDiffSpec& qdiff, std::optional<cplx> basepoint,
                         std::optional<cplx> w_ref, std::optional<cplx> y_ref) {
  Surface s;
  s.curve = curve;
  s.qdiff = qdiff;

  std::array<int, 6> perm = curve.label_order;
  std::sort(perm.begin(), perm.end());
  for (int k = 0; k < 6; ++k)
    if (perm[k] != k) throw Error(Err::BadInput, "label_order is not a permutation");

  double scale = 1.0;
  for (auto r : curve.p_roots) scale = std::max(scale, std::abs(r));

  s.sep_p = 1e300;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) s.sep_p = std::min(s.sep_p, std::abs(curve.p_roots[i] - curve.p_roots[j]));
  if (s.sep_p <= 1e-10 * scale) throw Error(Err::DuplicateRoots, "p has a repeated root");

  s.p.setZero();
  s.p[0] = 1.0;
  for (auto r : curve.p_roots) {
    Vec<cplx, 7> q = Vec<cplx, 7>::Zero();
    for (int k = 0; k < 6; ++k) {
      q[k + 1] += s.p[k];
      q[k] -= r * s.p[k];
    }
    s.p = q;
  }
  for (int k = 0; k < 3; ++k) s.n[k] = qdiff.n_coeffs[k];

  const double cmax = std::max({std::abs(s.n[0]), std::abs(s.n[1]), std::abs(s.n[2])});
  if (cmax == 0.0 || std::abs(s.n[2]) <= 1e-12 * cmax) throw Error(Err::DegenerateZeros, "deg N < 2");
  cplx disc = s.n[1] * s.n[1] - 4.0 * s.n[0] * s.n[2];
  cplx sq = std::sqrt(disc);
  cplx r1 = (-s.n[1] + sq) / (2.0 * s.n[2]);
  cplx r2 = (-s.n[1] - sq) / (2.0 * s.n[2]);
  double rscale = std::max({1.0, std::abs(r1), std::abs(r2)});
  if (std::abs(r1 - r2) <= 1e-10 * rscale) throw Error(Err::DegenerateZeros, "N has a double root");
  auto lex = [](cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); };
  if (lex(r2, r1)) std::swap(r1, r2);
  s.n_roots = {r1, r2};
  for (auto r : s.n_roots)
    for (auto e : curve.p_roots)
      if (std::abs(r - e) <= 1e-10 * std::max(scale, rscale))
        throw Error(Err::ZeroAtBranchPoint, "N and p share a root");

  auto sing = s.singular();
  s.sep_all = 1e300;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) s.sep_all = std::min(s.sep_all, std::abs(sing[i] - sing[j]));

  for (int k = 0; k < 2; ++k) {
    cplx y = std::sqrt(s.P(s.n_roots[k]));
    s.zeros[2 * k] = {s.n_roots[k], y, 0.0};
    s.zeros[2 * k + 1] = {s.n_roots[k], -y, 0.0};
  }

  if (basepoint) {
    s.x0 = *basepoint;
  } else {
    cplx c = std::accumulate(sing.begin(), sing.end(), cplx(0.0)) / 8.0;
    s.x0 = c + 2.0 * s.sep_all * kI;
  }
  if (!s.outside_exclusion(s.x0)) throw Error(Err::NearSingularPoint, "basepoint inside an exclusion disk");
  s.y0 = y_ref ? sqrt_near(s.P(s.x0), *y_ref) : std::sqrt(s.P(s.x0));
  s.w0 = w_ref ? sqrt_near(s.N(s.x0), *w_ref) : std::sqrt(s.N(s.x0));
  return s;
}

void align_zeros(Surface& s, const Surface& ref) {
  const auto& a = s.n_roots;
  const auto& b = ref.n_roots;
  if (std::abs(a[0] - b[1]) + std::abs(a[1] - b[0]) < std::abs(a[0] - b[0]) + std::abs(a[1] - b[1])) {
    std::swap(s.n_roots[0], s.n_roots[1]);
    std::swap(s.zeros[0], s.zeros[2]);
    std::swap(s.zeros[1], s.zeros[3]);
  }
  for (int k = 0; k < 2; ++k) {
    cplx y = sqrt_near(s.P(s.n_roots[k]), ref.zeros[2 * k].y);
    s.zeros[2 * k].y = y;
    s.zeros[2 * k + 1].y = -y;
  }
}

CoverPoint involution(const CoverPoint& pt) { return {pt.x, pt.y, -pt.w}; }

cplx schwarzian_v(const Surface& s, cplx x) {
  cplx P = s.P(x), dP = s.dP(x), ddP = s.ddP(x);
  cplx N = s.N(x), dN = s.dN(x), ddN = 2.0 * s.n[2];
  cplx mu = 0.5 * (dN / N - dP / P);
  cplx dmu = 0.5 * ((ddN * N - dN * dN) / (N * N) - (ddP * P - dP * dP) / (P * P));
  return dmu - 0.5 * mu * mu;
}

LocalData eval_local_unchecked(const Surface& s, const CoverPoint& pt) {
  return {pt.w / pt.y, s.N(pt.x) / s.P(pt.x), schwarzian_v(s, pt.x)};
}

LocalData eval_local(const Surface& s, const CoverPoint& pt) {
  if (!s.outside_exclusion(pt.x)) throw Error(Err::NearSingularPoint, "evaluation point inside an exclusion disk");
  return eval_local_unchecked(s, pt);
}

}  // namespace prym
