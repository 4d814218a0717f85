#include "prymlab/chart.hpp"

#include <algorithm>
#include <thread>

namespace prym {

namespace {

bool is_pinned(cplx r) { return r == cplx(0.0) || r == cplx(1.0) || r == cplx(-1.0); }

}  // namespace

double default_fd_step(const Surface& s, const Vec6c& theta) {
  return std::min(1e-5 * (1.0 + theta.norm()), 0.01 * s.sep_all);
}

ModuliChart make_chart(const Surface& s, const Marking& m, double fd_step) {
  ModuliChart c;
  c.base = s;
  c.marking = m;
  int k = 0, pinned = 0;
  for (int i = 0; i < 6; ++i) {
    if (is_pinned(s.curve.p_roots[i])) {
      ++pinned;
    } else if (k < 3) {
      c.free_idx[k] = i;
      c.theta[k++] = s.curve.p_roots[i];
    }
  }
  if (pinned != 3 || k != 3) throw Error(Err::BadInput, "chart needs the roots 0, 1, -1 among the roots of p");
  for (int j = 0; j < 3; ++j) c.theta[3 + j] = s.n[j];
  c.fd_step = fd_step > 0 ? std::min(fd_step, 0.01 * s.sep_all) : default_fd_step(s, c.theta);
  return c;
}

Surface surface_at(const ModuliChart& c, const Vec6c& theta) {
  CurveSpec cs = c.base.curve;
  for (int k = 0; k < 3; ++k) cs.p_roots[c.free_idx[k]] = theta[k];
  QDiffSpec q{{theta[3], theta[4], theta[5]}};
  Surface s;
  try {
    s = validate_surface(cs, q, c.base.x0, c.base.w0, c.base.y0);
  } catch (const Error& e) {
    throw Error(Err::LeftChart, e.what());
  }
  align_zeros(s, c.base);
  return s;
}

ChartPoint eval_at(const ModuliChart& c, const Vec6c& theta) {
  ChartPoint cp;
  cp.s = surface_at(c, theta);
  try {
    cp.m = follow_marking(cp.s, c.marking);
  } catch (const Error& e) {
    if (e.code == Err::NearSingularPoint || e.code == Err::AmbiguousContinuation || e.code == Err::TangencyDetected)
      throw Error(Err::LeftChart, e.what());
    throw;
  }
  cp.pd = compute_periods(cp.s, cp.m, c.quad);
  return cp;
}

Vec6c P_at(const ModuliChart& c, const Vec6c& theta) { return eval_at(c, theta).pd.P(); }

void recenter(ModuliChart& c, const Vec6c& theta) {
  ChartPoint cp = eval_at(c, theta);
  c.base = cp.s;
  c.marking = cp.m;
  c.theta = theta;
  c.has_J = false;
}

std::vector<VecXc> eval_many(const ModuliChart& c, const std::vector<Vec6c>& thetas, const PointFn& f) {
  std::vector<VecXc> out(thetas.size());
  const int nt = std::max(1, std::min<int>(c.threads, int(thetas.size())));
  if (nt == 1) {
    for (std::size_t i = 0; i < thetas.size(); ++i) out[i] = f(eval_at(c, thetas[i]));
    return out;
  }
  std::vector<std::exception_ptr> errs(nt);
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < thetas.size(); i += nt) out[i] = f(eval_at(c, thetas[i]));
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

MatXc fd_jacobian(const ModuliChart& c, const PointFn& f, double* gap) {
  const double h = c.fd_step;
  std::vector<Vec6c> pts;
  for (int k = 0; k < 6; ++k)
    for (double step : {h, -h, 0.5 * h, -0.5 * h}) {
      Vec6c t = c.theta;
      t[k] += step;
      pts.push_back(t);
    }
  auto vals = eval_many(c, pts, f);
  const Eigen::Index dim = vals[0].size();
  MatXc jac(dim, 6);
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

const Mat6c& jacobian(ModuliChart& c) {
  c.J = fd_jacobian(c, [](const ChartPoint& cp) -> VecXc { return cp.pd.P(); });
  Eigen::JacobiSVD<Mat6c> svd(c.J);
  auto sv = svd.singularValues();
  c.cond_J = sv[0] / sv[5];
  c.has_J = true;
  if (!(c.cond_J <= 1e8)) throw Error(Err::IllConditioned, "cond(J) = " + std::to_string(c.cond_J));
  return c.J;
}

NewtonResult newton_invert(ModuliChart& c, const Vec6c& P_target, const NewtonOptions& opt) {
  if (!c.has_J) jacobian(c);
  const double scale = std::max(1.0, P_target.norm());
  NewtonResult res;
  res.theta = c.theta;
  Vec6c r = P_at(c, res.theta) - P_target;
  res.residual = r.norm();
  Eigen::PartialPivLU<Mat6c> lu(c.J);
  Mat6c Jcur = c.J;
  for (int it = 0; it < opt.max_iter && res.residual > opt.tol * scale; ++it) {
    res.iterations = it + 1;
    Vec6c dth = -lu.solve(r);
    double lam = 1.0;
    Vec6c th_new, r_new;
    bool accepted = false;
    for (int half = 0; half < 12; ++half, lam *= 0.5) {
      th_new = res.theta + lam * dth;
      try {
        r_new = P_at(c, th_new) - P_target;
      } catch (const Error& e) {
        if (e.code != Err::LeftChart) throw;
        if (half == 11) throw;
        continue;
      }
      if (r_new.norm() < res.residual) {
        accepted = true;
        break;
      }
    }
    if (!accepted) throw Error(Err::NoConvergence, "damped Newton step failed to reduce the residual");
    const double ratio = r_new.norm() / res.residual;
    res.theta = th_new;
    r = r_new;
    res.residual = r.norm();
    // chord iteration; refresh the Jacobian at the current point when contraction is poor
    if (ratio > 0.25 && res.residual > opt.tol * scale) {
      ModuliChart tmp = c;
      recenter(tmp, res.theta);
      Jcur = jacobian(tmp);
      lu.compute(Jcur);
      ++res.jacobian_refreshes;
    }
  }
  if (res.residual > opt.tol * scale) throw Error(Err::NoConvergence, "residual " + std::to_string(res.residual));
  if (opt.recenter_on_success) recenter(c, res.theta);
  return res;
}

}  // namespace prym
