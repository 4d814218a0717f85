#pragma once

#include <functional>

#include "prymlab/periods.hpp"

namespace prym {

// Everything computed at one point of the chart.
struct ChartPoint {
  Surface s;
  Marking m;
  PeriodData pd;
};

// theta = (three free roots of p, c0, c1, c2); the roots 0, 1, -1 stay pinned and x0 stays put.
struct ModuliChart {
  Surface base;
  Marking marking;
  Vec6c theta;
  std::array<int, 3> free_idx;  // indices into p_roots
  double fd_step = 0;
  Mat6c J = Mat6c::Zero();
  double cond_J = 0;
  bool has_J = false;
  QuadOptions quad;
  int threads = 1;
};

ModuliChart make_chart(const Surface& s, const Marking& m, double fd_step = -1.0);
double default_fd_step(const Surface& s, const Vec6c& theta);

// Throws LeftChart when the surface at theta is degenerate or x0 falls into an exclusion disk.
Surface surface_at(const ModuliChart& c, const Vec6c& theta);
ChartPoint eval_at(const ModuliChart& c, const Vec6c& theta);
Vec6c P_at(const ModuliChart& c, const Vec6c& theta);

// Moves the reference point of the chart, carrying the marking along.
void recenter(ModuliChart& c, const Vec6c& theta);

using PointFn = std::function<VecXc(const ChartPoint&)>;

// Evaluates f at each theta, in parallel when threads > 1; output order follows input order.
std::vector<VecXc> eval_many(const ModuliChart& c, const std::vector<Vec6c>& thetas, const PointFn& f);

// d f / d theta at the chart centre: central differences at h and h/2 combined by Richardson.
// gap receives the largest difference between the two central estimates.
MatXc fd_jacobian(const ModuliChart& c, const PointFn& f, double* gap = nullptr);

const Mat6c& jacobian(ModuliChart& c);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  bool recenter_on_success = false;
};

struct NewtonResult {
  Vec6c theta;
  double residual = 0;
  int iterations = 0;
  int jacobian_refreshes = 0;
};

NewtonResult newton_invert(ModuliChart& c, const Vec6c& P_target, const NewtonOptions& opt = {});

// Lifts a chart-independent gradient dF/dtheta to dF/dP.
inline Vec6c grad_P(const ModuliChart& c, const Vec6c& grad_theta) {
  return c.J.transpose().partialPivLu().solve(grad_theta);
}

}  // namespace prym
