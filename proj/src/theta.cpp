#include "prymlab/theta.hpp"

#include <cmath>

namespace prym {

namespace {

// Upper bound for the sum of exp(-q(v)) over shifted lattice points with q(v) > R2,
// where q(v) >= pi lam |v|^2. Counts at most 4 pi (k+1) points with |v| in [k, k+1).
double tail_bound(double R2, double lam) {
  double t = 0;
  for (int k = 0; k < 100000; ++k) {
    double e = std::max(R2, kPi * lam * double(k) * k);
    double term = 4 * kPi * (k + 1) * std::exp(-e);
    t += term;
    if (kPi * lam * double(k) * k > R2 + 50) break;
  }
  return t;
}

}  // namespace

ThetaValue theta_full(const Vec2c& z, const Mat2c& Omega, const ThetaChar& ch, double tol) {
  Eigen::Matrix2d Y = Omega.imag();
  Y = 0.5 * (Y + Y.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Y);
  const double lam = es.eigenvalues()[0];
  if (!(lam > 0)) throw Error(Err::NotPositiveDefinite, "Im Omega is not positive definite");

  Eigen::Vector2d c = Y.ldlt().solve(z.imag());
  const double growth = kPi * c.dot(Y * c);
  // polynomial factors of the derivatives are absorbed by a few extra units of R2
  double R2 = 1.0;
  while (tail_bound(R2, lam) * std::exp(growth) > tol * 1e-3) R2 += 0.5;

  const double rad = std::sqrt(R2 / (kPi * lam)) + 1.0;
  ThetaValue out;
  out.val = 0;
  out.grad.setZero();
  out.hess.setZero();
  const Eigen::Vector2d ctr = -(ch.a + c);
  const int n0lo = int(std::floor(ctr[0] - rad)), n0hi = int(std::ceil(ctr[0] + rad));
  const int n1lo = int(std::floor(ctr[1] - rad)), n1hi = int(std::ceil(ctr[1] + rad));
  const cplx tpi = 2.0 * kPi * kI;
  for (int n0 = n0lo; n0 <= n0hi; ++n0)
    for (int n1 = n1lo; n1 <= n1hi; ++n1) {
      Eigen::Vector2d m(n0 + ch.a[0], n1 + ch.a[1]);
      Eigen::Vector2d v = m + c;
      if (kPi * v.dot(Y * v) > R2) continue;
      Vec2c mc = m.cast<cplx>();
      cplx e = kPi * kI * (mc.transpose() * Omega * mc)(0) + tpi * (mc.transpose() * (z + ch.b.cast<cplx>()))(0);
      cplx t = std::exp(e);
      out.val += t;
      out.grad += tpi * mc * t;
      out.hess += tpi * tpi * (mc * mc.transpose()) * t;
      ++out.terms;
    }
  out.tail = tail_bound(R2, lam) * std::exp(growth);
  return out;
}

std::array<ThetaChar, 16> all_characteristics() {
  std::array<ThetaChar, 16> out;
  for (int k = 0; k < 16; ++k) {
    out[k].a = Eigen::Vector2d(0.5 * ((k >> 0) & 1), 0.5 * ((k >> 1) & 1));
    out[k].b = Eigen::Vector2d(0.5 * ((k >> 2) & 1), 0.5 * ((k >> 3) & 1));
  }
  return out;
}

EvenThetaConstants even_theta_constants(const Mat2c& Omega) {
  EvenThetaConstants etc;
  int n = 0;
  etc.product = 1.0;
  for (const auto& ch : all_characteristics()) {
    if (!ch.even()) continue;
    ThetaValue tv = theta_full(Vec2c::Zero(), Omega, ch);
    etc.chars[n] = ch;
    etc.values[n] = tv.val;
    etc.hess[n] = tv.hess;
    etc.product *= tv.val;
    if (std::abs(tv.val) < 1e-8) etc.near_null = true;
    ++n;
  }
  return etc;
}

Mat2c dlog_theta_product(const EvenThetaConstants& etc) {
  if (etc.near_null) throw Error(Err::WirtingerSingular, "a theta constant is close to zero");
  Mat2c d = Mat2c::Zero();
  for (int k = 0; k < 10; ++k) d += etc.hess[k] / etc.values[k];
  return d / (4.0 * kPi * kI);
}

Mat2c dlog_det_cod(const Mat2c& Omega, const Mat2c& C, const Mat2c& D) {
  Mat2c M = C * Omega + D;
  return (M.inverse() * C).transpose();
}

}  // namespace prym
