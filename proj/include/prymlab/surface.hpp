#pragma once

#include <array>
#include <optional>

#include "prymlab/types.hpp"

namespace prym {

struct CurveSpec {
  std::array<cplx, 6> p_roots;
  // label_order[k] is the index into p_roots of the k-th root along the spine.
  std::array<int, 6> label_order{0, 1, 2, 3, 4, 5};
};

struct QDiffSpec {
  std::array<cplx, 3> n_coeffs;  // N(x) = c0 + c1 x + c2 x^2
};

struct CoverPoint {
  cplx x, y, w;
};

struct LocalData {
  cplx v_rep;   // w / y
  cplx Q_rep;   // N / p
  cplx Sv_rep;  // Schwarzian of z(x) = int v
};

class Surface {
 public:
  static constexpr int genus = 2;

  CurveSpec curve;
  QDiffSpec qdiff;
  Vec<cplx, 7> p;     // monic, ascending
  Vec<cplx, 3> n;
  std::array<cplx, 2> n_roots;   // lexicographic (Re, Im)
  std::array<CoverPoint, 4> zeros;  // (r1,+y), (r1,-y), (r2,+y), (r2,-y)
  cplx x0, y0, w0;
  double sep_p = 0, sep_all = 0;

  double excl() const { return 0.1 * sep_all; }
  const cplx& root(int k) const { return curve.p_roots[curve.label_order[k]]; }

  cplx P(cplx x) const { return horner(p, x); }
  cplx dP(cplx x) const;
  cplx ddP(cplx x) const;
  cplx N(cplx x) const { return horner(n, x); }
  cplx dN(cplx x) const { return n[1] + 2.0 * n[2] * x; }

  // all 8 singular x-values: roots of p, then roots of N
  std::array<cplx, 8> singular() const;
  double dist_singular(cplx x) const;
  bool outside_exclusion(cplx x) const { return dist_singular(x) > excl(); }

  CoverPoint point_at_x0() const { return {x0, y0, w0}; }
};

int cover_genus(int g);
int hminus_dim(int g);

Surface validate_surface(const CurveSpec& curve, const QDiffSpec& qdiff,
                         std::optional<cplx> basepoint = std::nullopt,
                         std::optional<cplx> w_ref = std::nullopt, std::optional<cplx> y_ref = std::nullopt);

// Relabels the N-roots and the sheets of the zeros of s to follow a nearby surface.
void align_zeros(Surface& s, const Surface& ref);

CoverPoint involution(const CoverPoint& pt);

LocalData eval_local(const Surface& s, const CoverPoint& pt);
// Same data without the exclusion check; used by the integrators on admissible paths.
LocalData eval_local_unchecked(const Surface& s, const CoverPoint& pt);
cplx schwarzian_v(const Surface& s, cplx x);

}  // namespace prym
