#pragma once

#include <array>
#include <cmath>

#include "prymlab/types.hpp"

namespace prym {

// Characteristic [a; b] with entries in {0, 1/2}.
struct ThetaChar {
  Eigen::Vector2d a = Eigen::Vector2d::Zero(), b = Eigen::Vector2d::Zero();
  bool even() const { return std::lround(4 * a.dot(b)) % 2 == 0; }
};

struct ThetaValue {
  cplx val;
  Vec2c grad;   // d/dz
  Mat2c hess;   // d2/dz dz
  int terms = 0;
  double tail = 0;  // bound on the omitted part of the sum for val
};

// Lattice sum of exp(pi i (n+a).Om(n+a) + 2 pi i (n+a).(z+b)) over the ellipsoid where the
// Gaussian factor exceeds the tolerance. Throws NotPositiveDefinite.
ThetaValue theta_full(const Vec2c& z, const Mat2c& Omega, const ThetaChar& ch = {}, double tol = 1e-12);
inline cplx theta(const Vec2c& z, const Mat2c& Omega, const ThetaChar& ch = {}, double tol = 1e-12) {
  return theta_full(z, Omega, ch, tol).val;
}

std::array<ThetaChar, 16> all_characteristics();

struct EvenThetaConstants {
  std::array<ThetaChar, 10> chars;
  std::array<cplx, 10> values;
  std::array<Mat2c, 10> hess;  // second z-derivatives at z = 0
  cplx product;
  bool near_null = false;  // some |theta[beta](0)| < 1e-8
};

EvenThetaConstants even_theta_constants(const Mat2c& Omega);

// d log(prod of even theta constants) / d Omega_jk, entries of Omega treated as independent
// (so the symmetric matrix pairs with v v^T by a full double sum). Uses the heat equation.
Mat2c dlog_theta_product(const EvenThetaConstants& etc);

// d log det(C Omega + D) / d Omega_jk in the same convention: ((C Omega + D)^-1 C)^T.
Mat2c dlog_det_cod(const Mat2c& Omega, const Mat2c& C, const Mat2c& D);

}  // namespace prym
