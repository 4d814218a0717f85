#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace prym {

using cplx = std::complex<double>;

template <class S, int R, int C> using Mat = Eigen::Matrix<S, R, C>;
template <class S, int N> using Vec = Eigen::Matrix<S, N, 1>;

using Vec2c = Vec<cplx, 2>;
using Vec3c = Vec<cplx, 3>;
using Vec6c = Vec<cplx, 6>;
using VecXc = Vec<cplx, Eigen::Dynamic>;
using Mat2c = Mat<cplx, 2, 2>;
using Mat3c = Mat<cplx, 3, 3>;
using Mat6c = Mat<cplx, 6, 6>;
using MatXc = Mat<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using Mat6r = Mat<double, 6, 6>;
using Mat4i = Mat<int, 4, 4>;

constexpr double kPi = 3.14159265358979323846;
inline const cplx kI{0.0, 1.0};

enum class Err {
  DuplicateRoots,
  DegenerateZeros,
  ZeroAtBranchPoint,
  NearSingularPoint,
  AmbiguousContinuation,
  MarkingFailure,
  InvalidMove,
  TangencyDetected,
  NontrivialHolonomy,
  NotSymplectic,
  CollisionCourse,
  PrecisionLoss,
  SingularNormalization,
  IllConditioned,
  NoConvergence,
  LeftChart,
  NotPositiveDefinite,
  DiagonalTooClose,
  ExtrapolationUnstable,
  WirtingerSingular,
  StepFailure,
  PathThroughZero,
  BadInput,
};

const char* err_name(Err e);

struct Error : std::runtime_error {
  Err code;
  Error(Err c, const std::string& what) : std::runtime_error(std::string(err_name(c)) + ": " + what), code(c) {}
};

// Horner evaluation, coefficients in ascending order.
template <class S, class V>
S horner(const V& c, S x) {
  S r(0);
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) r = r * x + S(c[k]);
  return r;
}

template <class V>
Vec<typename V::Scalar, Eigen::Dynamic> poly_derivative(const V& c) {
  Vec<typename V::Scalar, Eigen::Dynamic> d(std::max<Eigen::Index>(c.size() - 1, 1));
  d.setZero();
  for (Eigen::Index k = 1; k < c.size(); ++k) d[k - 1] = c[k] * double(k);
  return d;
}

// Nearest of the two square roots of s to ref.
inline cplx sqrt_near(cplx s, cplx ref) {
  cplx r = std::sqrt(s);
  return std::abs(r - ref) <= std::abs(r + ref) ? r : -r;
}

// Standard symplectic form [[0, I], [-I, 0]].
template <class S, int N>
Mat<S, 2 * N, 2 * N> symplectic_j() {
  Mat<S, 2 * N, 2 * N> j = Mat<S, 2 * N, 2 * N>::Zero();
  j.template topRightCorner<N, N>().setIdentity();
  j.template bottomLeftCorner<N, N>() = -Mat<S, N, N>::Identity();
  return j;
}

}  // namespace prym
