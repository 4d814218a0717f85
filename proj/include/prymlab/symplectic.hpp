#pragma once

#include <map>

#include "prymlab/chart.hpp"
#include "prymlab/check.hpp"
#include "prymlab/monodromy.hpp"

namespace prym {

struct Observable {
  std::string name;
  std::string category;  // period, trace, kernel-sample
  std::function<cplx(const ChartPoint&)> eval;
};

// Brackets {f, g} = grad_P f^T K grad_P g with the exact H_- intersection form K.
class BracketEngine {
 public:
  explicit BracketEngine(ModuliChart& c);

  // dF/dP, one row per component of f
  MatXc gradients(const PointFn& f, double* gap = nullptr);
  VecXc gradient(const Observable& f);
  cplx bracket(const Observable& f, const Observable& g);
  MatXc bracket_matrix(const MatXc& grads) const { return grads * K_ * grads.transpose(); }
  const Mat6c& K() const { return K_; }
  ModuliChart& chart() { return c_; }

 private:
  ModuliChart& c_;
  Mat6c K_;
  std::map<std::string, VecXc> cache_;
};

Observable period_observable(int i);             // P_i = (A1, A2, A3, B1, B2, B3)_i
Observable omega_observable(int j, int k);

// N = sum over (11, 12, 22) of p_jk u_j u_k, u_j = (vnorm (1, x))_j: coefficients (p11, p12, p22).
Vec3c canonical_momenta(const Surface& s, const PeriodData& pd);
Vec3c omega_entries(const PeriodData& pd);

// Flat coordinate z(x) = int v from the first zero of Q along the straight segment.
// The point must lie within 0.25 sep of that zero.
cplx flat_coordinate(const Surface& s, const CoverPoint& pt);
// Point near guess (sheets continued from guess) with flat_coordinate = z.
CoverPoint solve_fixed_z(const Surface& s, const CoverPoint& guess, cplx z);

// Sample points at 0.08 sep from the first zero of Q, inside every cycle of the marking.
std::vector<CoverPoint> fixed_z_samples(const Surface& s, const Marking& m, int count = 3);

// Derivatives of f along the P coordinates, through Newton inversion at P +- h e_i and +- h/2 e_i.
// h < 0: 2e-3 max(1, |P|).
MatXc fd_along_P(ModuliChart& c, const PointFn& f, double h = -1.0, double* gap = nullptr);

std::vector<Check> verify_bracket_basics(BracketEngine& be);
std::vector<Check> verify_canonical(BracketEngine& be);
std::vector<Check> verify_variational(ModuliChart& c);
std::vector<Check> verify_prym_structure(BracketEngine& be);

struct GoldmanPair {
  std::vector<int> a, b;  // generator words
};
// Crossings of two cyclic words in positive generator letters, on the surface glued from the relator polygon.
// j, l: passages through the basepoint (after letter j of a and letter l of b); parallel runs count once.
struct WordCrossing {
  int j, l, sign;
};
std::vector<WordCrossing> word_crossings(const std::vector<int>& a, const std::vector<int>& b);
// Germs 2(g-1) (leaving along g) and 2(g-1)+1 (arriving along g), in cyclic order around the basepoint.
std::array<int, 8> germ_cycle(const std::vector<int>& relation);

// Pairs of distinct loops from loop_set().
std::vector<GoldmanPair> goldman_pairs();
std::vector<Check> verify_goldman(BracketEngine& be, const std::vector<GoldmanPair>& pairs,
                                  const OdeOptions& ode = {1e-13, 400000});

// N^sigma = N - 1/2 sum W_jk u_j u_k, with S_B^sigma - S_B = sum W_jk v_j v_k.
Vec3c sigma_shifted_n(const Surface& s, const PeriodData& pd, const SpSigma& sigma);
// Candidate sigmas with C != 0, in the order they are tried.
std::vector<SpSigma> covariance_sigmas();
std::vector<Check> verify_marking_covariance(BracketEngine& be);

}  // namespace prym
