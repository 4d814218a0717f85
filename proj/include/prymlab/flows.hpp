#pragma once

#include "prymlab/chart.hpp"
#include "prymlab/check.hpp"

namespace prym {

// Homological flows: H_i = A_i^2 / 2pi moves B_i by t A_i / 2pi and nothing else.
struct FlowState {
  Vec6c theta;
  Vec6c P;
  Eigen::Vector3d t = Eigen::Vector3d::Zero();
};

struct ActionAngle {
  Vec3c I, phi;  // I = A^2 / 2pi, phi = 2pi B / A
};

inline Vec3c hamiltonians(const Vec6c& P) { return P.head<3>().array().square() / (2 * kPi); }
ActionAngle action_angle(const Vec6c& P);

// The chart is recentred on the state after every accepted step.
FlowState flow_start(ModuliChart& c);
// Halves dt (up to 20 times) when Newton fails or the step leaves the chart.
FlowState flow(ModuliChart& c, const FlowState& st, int i, double dt, double newton_tol = 1e-12);
double commutativity_defect(const ModuliChart& c, const FlowState& st, int i, int j, double dt);

std::vector<Check> verify_flows(ModuliChart& c);

// Half-twist of the two zeros of N along the arc through the gap used by the a~ cycle:
// slide towards the gap, rotate by pi about it, slide out to the other zero's place.
struct BraidPath {
  cplx r1, r2, g, e;
  double eps;
  bool reverse = false;
  // s in [0, 3]; positions and d/ds of both zeros
  void at(double s, cplx& z1, cplx& z2, cplx& dz1, cplx& dz2) const;
};
BraidPath braid_path(const Surface& s, bool reverse = false);
// The same loop as chart parameters (free roots fixed, N coefficients moving).
std::vector<Vec6c> braid_zeros_path(const ModuliChart& c, int k, int steps, bool reverse = false);

struct BraidTracking {
  Vec6c P_start, P_end;
  std::vector<double> s;
  std::vector<Vec6c> P;     // tracked periods at checkpoints
  double max_jump = 0;      // largest checkpoint-to-checkpoint change relative to |P|
};
// Carries every cycle of the marking along the braid by the flow of a vector field that vanishes at
// the roots of p and follows the zeros of N, and integrates v over the carried cycles.
BraidTracking track_braid(const Surface& s, const Marking& m, bool reverse = false, int steps_per_phase = 200,
                          const QuadOptions& quad = {});

std::vector<Check> verify_picard_lefschetz(const Surface& s, const Marking& m, const PeriodData& pd);

}  // namespace prym
