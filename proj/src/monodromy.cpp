#include "prymlab/monodromy.hpp"

#include <thread>

namespace prym {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// Integrates Y' = A(t) Y on [0, 1] from Y(0) = Y0.
template <class AF>
Mat2c dopri(AF&& A, Mat2c Y, const OdeOptions& opt, double& err_sum, int& steps) {
  double t = 0, h = 0.05;
  Mat2c k1 = A(0.0) * Y;
  while (t < 1.0) {
    if (h > 1.0 - t) h = 1.0 - t;
    if (++steps > opt.max_steps) throw Error(Err::StepFailure, "step budget exhausted");
    Mat2c k2 = A(t + c2 * h) * (Y + h * a21 * k1);
    Mat2c k3 = A(t + c3 * h) * (Y + h * (a31 * k1 + a32 * k2));
    Mat2c k4 = A(t + c4 * h) * (Y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Mat2c k5 = A(t + c5 * h) * (Y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Mat2c k6 = A(t + h) * (Y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Mat2c Yn = Y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Mat2c k7 = A(t + h) * Yn;
    Mat2c E = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double scale = opt.tol * (1.0 + Y.cwiseAbs().maxCoeff());
    const double err = E.cwiseAbs().maxCoeff() / scale;
    if (err <= 1.0) {
      t += h;
      Y = Yn;
      k1 = k7;
      err_sum += err * scale;
    }
    double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    if (h < 1e-14) throw Error(Err::StepFailure, "step size underflow");
  }
  return Y;
}

template <class SegA>
TransferMatrix run_history(const SheetHistory& h, const OdeOptions& opt, SegA&& seg_matrix) {
  TransferMatrix T;
  for (std::size_t i = 0; i + 1 < h.x.size(); ++i) {
    auto A = seg_matrix(i);
    T.M = dopri(A, T.M, opt, T.err_est, T.steps);
  }
  return T;
}

}  // namespace

TransferMatrix transport(const Surface& s, const BergmanKernel& K, const SheetHistory& h, const OdeOptions& opt) {
  return run_history(h, opt, [&](std::size_t i) {
    const cplx xa = h.x[i], dx = h.x[i + 1] - h.x[i];
    const cplx ya = h.y[i], dy = h.y[i + 1] - h.y[i];
    const cplx wa = h.w[i], dw = h.w[i + 1] - h.w[i];
    return [&s, &K, xa, dx, ya, dy, wa, dw](double t) {
      const cplx x = xa + t * dx;
      const cplx y = sqrt_near(s.P(x), ya + t * dy), w = sqrt_near(s.N(x), wa + t * dw);
      const cplx zd = w / y * dx;
      Mat2c A;
      A << 0.0, zd, potential_u(s, K, x) * zd, 0.0;
      return A;
    };
  });
}

TransferMatrix transport(const Surface& s, const BergmanKernel& K, const Path& path, double margin,
                         const OdeOptions& opt) {
  if (path.v.size() < 2) return {};
  const double mg = margin < 0 ? s.excl() : margin;
  for (auto r : s.n_roots)
    for (std::size_t i = 0; i + 1 < path.v.size(); ++i)
      if (seg_point_dist(path.v[i], path.v[i + 1], r) <= mg) throw Error(Err::PathThroughZero, "path meets a zero of Q");
  return transport(s, K, continue_sheets(s, path, margin), opt);
}

TransferMatrix transport_phi(const Surface& s, const BergmanKernel& K, const SheetHistory& h, const OdeOptions& opt) {
  return run_history(h, opt, [&](std::size_t i) {
    const cplx xa = h.x[i], dx = h.x[i + 1] - h.x[i];
    return [&s, &K, xa, dx](double t) {
      const cplx x = xa + t * dx;
      const cplx pot = 0.5 * (s_bergman(s, K, x) + 2.0 * s.N(x) / s.P(x));
      Mat2c A;
      A << 0.0, dx, -pot * dx, 0.0;
      return A;
    };
  });
}

Mat2c local_monodromy_zero(const Surface& s, const Marking& m, const BergmanKernel& K, int zero_id,
                           double radius_factor, bool reversed, const OdeOptions& opt) {
  if (zero_id < 0 || zero_id > 3) throw Error(Err::BadInput, "zero id must be 0..3");
  std::vector<cplx> loop = zero_loop(s, m, zero_id / 2, radius_factor);
  if (reversed) {
    std::vector<cplx> r(loop.rbegin(), loop.rend());
    loop = r;
  }
  const double margin = 0.5 * radius_factor * s.sep_all;
  // pick the hub sheet of y that lands on the requested zero
  Path leg{{loop[0], loop[1]}, m.hub_y, m.hub_w};
  SheetHistory lh = continue_sheets(s, leg, margin);
  const cplx y_end = lh.y.back();
  const cplx yz = s.zeros[zero_id].y;
  const bool flip = std::abs(y_end - yz) > std::abs(y_end + yz);
  Path p{loop, flip ? -m.hub_y : m.hub_y, m.hub_w};
  SheetHistory h = continue_sheets(s, p, margin);
  TransferMatrix T = transport(s, K, h, opt);
  if (w_holonomy(h) == 1) return T.M;
  Mat2c s3;
  s3 << 1, 0, 0, -1;
  return s3 * T.M;
}

Mat2c MonodromyRep::word(const std::vector<int>& gen_word) const {
  Mat2c R = Mat2c::Identity();
  for (int g : gen_word) {
    const Mat2c& X = M.at(std::abs(g) - 1);
    Mat2c Xs;
    if (g > 0) Xs = X;
    else Xs << X(1, 1), -X(0, 1), -X(1, 0), X(0, 0);
    R = Xs * R;
  }
  return R;
}

double MonodromyRep::relation_defect() const {
  Mat2c R = word({1, 2, -1, -2, 3, 4, -3, -4});
  return (R - Mat2c::Identity()).cwiseAbs().maxCoeff();
}

TransferMatrix transport_word(const Surface& s, const Marking& m, const BergmanKernel& K,
                              const std::vector<int>& gen_word, const std::vector<cplx>& extra_leg,
                              const OdeOptions& opt) {
  Path p = word_path(m, expand_gens(m, gen_word), true);
  if (!extra_leg.empty()) {
    // extra_leg runs from a new basepoint to x0; find its starting sheets by walking back from x0
    Path back{std::vector<cplx>(extra_leg.rbegin(), extra_leg.rend()), m.base_y, m.base_w};
    SheetHistory bh = continue_sheets(s, back);
    Path full;
    full.v = extra_leg;
    full.v.insert(full.v.end(), p.v.begin() + 1, p.v.end());
    full.v.insert(full.v.end(), back.v.begin() + 1, back.v.end());
    full.y0 = bh.y.back();
    full.w0 = bh.w.back();
    p = full;
  }
  return transport(s, K, p, -1.0, opt);
}

MonodromyRep representation(const Surface& s, const Marking& m, const BergmanKernel& K, const OdeOptions& opt,
                            int threads) {
  MonodromyRep rep;
  rep.x0 = s.x0;
  auto one = [&](int j) { rep.M[j] = transport_word(s, m, K, {j + 1}, {}, opt).M; };
  if (threads <= 1) {
    for (int j = 0; j < 4; ++j) one(j);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < 4; ++j) pool.emplace_back(one, j);
    for (auto& t : pool) t.join();
  }
  return rep;
}

std::vector<std::vector<int>> loop_set() { return {{1}, {3}, {2}, {4}, {1, 3}, {1, 2}, {1, 4}, {3, 4}}; }

std::string word_name(const std::vector<int>& gen_word) {
  static const char* names[4] = {"alpha1", "beta1", "alpha2", "beta2"};
  std::string out;
  for (int g : gen_word) {
    if (!out.empty()) out += "*";
    out += names[std::abs(g) - 1];
    if (g < 0) out += "^-1";
  }
  return out;
}

}  // namespace prym
