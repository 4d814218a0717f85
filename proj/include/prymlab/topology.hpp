#pragma once

#include <array>
#include <numeric>
#include <string>
#include <vector>

#include "prymlab/quadrature.hpp"
#include "prymlab/surface.hpp"

namespace prym {

struct Path {
  std::vector<cplx> v;
  cplx y0, w0;
};

struct Rational {
  long long num = 0, den = 1;
  Rational() = default;
  Rational(long long n, long long d = 1);
  Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
  Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
  Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  double value() const { return double(num) / double(den); }
};

struct RatMat {
  int rows = 0, cols = 0;
  std::vector<Rational> d;
  RatMat() = default;
  RatMat(int r, int c) : rows(r), cols(c), d(std::size_t(r) * c) {}
  Rational& operator()(int i, int j) { return d[std::size_t(i) * cols + j]; }
  const Rational& operator()(int i, int j) const { return d[std::size_t(i) * cols + j]; }
};

// Refines the path and continues y = sqrt(p), w = sqrt(N) by nearest-branch selection.
// margin < 0 means the exclusion radius of the surface.
SheetHistory continue_sheets(const Surface& s, const Path& path, double margin = -1.0);

double seg_point_dist(cplx a, cplx b, cplx p);
bool path_clear(const Surface& s, const std::vector<cplx>& v, double margin);

// Closed ccw polygon at distance rho around a spine polyline.
std::vector<cplx> capsule(const std::vector<cplx>& spine, double rho, int cap_pts = 8);
// Closed ccw circle around c starting and ending at start.
std::vector<cplx> circle_from(cplx c, cplx start, int n = 16);

// Signed count of sheet-matched transverse crossings. On the base curve only y is matched.
int crossing_number(const Surface& s, const SheetHistory& c1, const SheetHistory& c2, bool cover = true);

// Holonomy of w along a history: +1 if w returns to itself.
int w_holonomy(const SheetHistory& h);

// Integer symplectic matrix in (A B; C D) blocks acting on (a, b) as
// a' = D a + C b, b' = B a + A b.
struct SpSigma {
  Eigen::Matrix2i A = Eigen::Matrix2i::Identity(), B = Eigen::Matrix2i::Zero(), C = Eigen::Matrix2i::Zero(),
                  D = Eigen::Matrix2i::Identity();
  bool symplectic() const;
  Eigen::Matrix4i action() const;  // rows: new (a1, a2, b1, b2) in old (a1, a2, b1, b2)
};

// Letters: +k / -k is the k-th elementary loop (1-based) or its inverse.
using Word = std::vector<int>;

struct Marking {
  // based loops at the hub, all with trivial w-holonomy
  cplx hub;
  std::vector<cplx> stem;                  // x0 -> hub
  std::vector<std::vector<cplx>> elem;     // gamma_1..gamma_6 around spine roots, rho_1, rho_2 around N roots
  std::array<Word, 4> gens;                // alpha1, beta1, alpha2, beta2
  cplx base_y, base_w;  // sheets at x0
  cplx hub_y, hub_w;

  // closed lifts on the cover
  std::vector<SheetHistory> lifts;
  std::vector<std::string> lift_names;

  // cover basis {a1, a2, a1mu, a2mu, at, b1, b2, b1mu, b2mu, bt} as integer chains over lifts
  Eigen::MatrixXi cover;       // 10 x L
  Eigen::MatrixXi lift_int;    // L x L crossing numbers
  Eigen::MatrixXi cover_int;   // 10 x 10
  Eigen::Matrix4i base_int;    // (a1, a2, b1, b2) on the base curve

  // H_- basis (a1-, a2-, a3-, b1-, b2-, b3-): rational rows over the cover basis; rows 2 and 5 carry 1/sqrt2
  RatMat hminus;
  std::array<bool, 6> inv_sqrt2{false, false, true, false, false, true};
  RatMat K;  // exact 6x6 intersection form on the H_- basis

  std::vector<std::string> fixes;  // orientation and sheet corrections applied during construction
};

Marking standard_marking(const Surface& s);
// Rebuilds the geometric data for a nearby surface, keeping every discrete choice of ref.
Marking follow_marking(const Surface& s, const Marking& ref);

Marking adjust_generator(const Surface& s, const Marking& m, int j, int zero_id);
Marking apply_sp(const Surface& s, const Marking& m, const SpSigma& sigma);

// Path of the word concatenated at the hub, with the stem from x0 in front and back.
Path word_path(const Marking& m, const Word& w, bool with_stem = true);
// Word in generator letters (+-1..4 for alpha1, beta1, alpha2, beta2) expanded to elementary letters.
Word expand_gens(const Marking& m, const std::vector<int>& gen_word);

// H_- coordinates of a generator word (exponent sums); rejects nontrivial w-holonomy.
Vec<double, 6> class_in_hminus(const Surface& s, const Marking& m, const std::vector<int>& gen_word);

Mat<double, 6, 6> to_double(const RatMat& r);
RatMat dual_matrix(const RatMat& K);  // K^{-T}, exact for the 6x6 form

// closed path around one zero of Q at radius r, as a based loop at the hub
std::vector<cplx> zero_loop(const Surface& s, const Marking& m, int zero_id, double radius_factor = 0.05);

}  // namespace prym
