#pragma once

#include "prymlab/bergman.hpp"

namespace prym {

struct TransferMatrix {
  Mat2c M = Mat2c::Identity();
  double err_est = 0;  // sum of accepted local error estimates
  int steps = 0;
};

struct OdeOptions {
  double tol = 1e-11;
  int max_steps = 200000;
};

// psi-frame: d Psi/dt = [[0, z'], [u z', 0]] Psi with z' = (w/y) x'; Psi(start) = I.
// margin < 0 uses the exclusion radius; smaller margins are allowed for loops around zeros.
TransferMatrix transport(const Surface& s, const BergmanKernel& K, const Path& path, double margin = -1.0,
                         const OdeOptions& opt = {});
TransferMatrix transport(const Surface& s, const BergmanKernel& K, const SheetHistory& h, const OdeOptions& opt = {});

// phi-frame in the x-chart: phi'' + 1/2 (S_B + 2 N/p) phi = 0, as a first-order system in (phi, phi').
TransferMatrix transport_phi(const Surface& s, const BergmanKernel& K, const SheetHistory& h,
                             const OdeOptions& opt = {});

// One loop of radius 0.05 sep around a zero, read in the frame of the returning w-sheet.
Mat2c local_monodromy_zero(const Surface& s, const Marking& m, const BergmanKernel& K, int zero_id,
                           double radius_factor = 0.05, bool reversed = false, const OdeOptions& opt = {});

// Anti-representation: the path gamma1 then gamma2 maps to M_gamma2 M_gamma1.
struct MonodromyRep {
  std::array<Mat2c, 4> M;  // alpha1, beta1, alpha2, beta2
  cplx x0;
  Mat2c word(const std::vector<int>& gen_word) const;  // letters +-1..4
  cplx trace(const std::vector<int>& gen_word) const { return word(gen_word).trace(); }
  double relation_defect() const;
};

MonodromyRep representation(const Surface& s, const Marking& m, const BergmanKernel& K, const OdeOptions& opt = {},
                            int threads = 1);

// Generator words of the loop set: alpha1, alpha2, beta1, beta2, alpha1 alpha2, alpha1 beta1, alpha1 beta2, alpha2 beta2.
std::vector<std::vector<int>> loop_set();
std::string word_name(const std::vector<int>& gen_word);

// Transport along the concatenated path of a generator word, from x0 (or from an extra leg start).
TransferMatrix transport_word(const Surface& s, const Marking& m, const BergmanKernel& K,
                              const std::vector<int>& gen_word, const std::vector<cplx>& extra_leg = {},
                              const OdeOptions& opt = {});

}  // namespace prym
