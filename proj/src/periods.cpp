#include "prymlab/periods.hpp"

namespace prym {

PeriodData compute_periods(const Surface& s, const Marking& m, const QuadOptions& opt) {
  PeriodData pd;
  auto lift = lift_integrals<5>(s, m, raw_forms, opt);
  pd.cover_raw = to_cover<5>(m, lift);
  pd.hminus_raw = to_hminus<5>(m, pd.cover_raw);

  // cover rows 0, 1 are a1, a2 and rows 5, 6 are b1, b2
  pd.Aper << pd.cover_raw(0, 0), pd.cover_raw(0, 1), pd.cover_raw(1, 0), pd.cover_raw(1, 1);
  pd.Bper << pd.cover_raw(5, 0), pd.cover_raw(5, 1), pd.cover_raw(6, 0), pd.cover_raw(6, 1);
  Eigen::PartialPivLU<Mat2c> lu(pd.Aper);
  if (std::abs(pd.Aper.determinant()) < 1e-12 * pd.Aper.squaredNorm())
    throw Error(Err::SingularNormalization, "a-period matrix is singular");
  Mat2c ainv = lu.inverse();
  pd.vnorm = ainv.transpose();
  pd.Omega = pd.Bper * ainv;

  pd.PA = pd.hminus_raw.block<3, 3>(0, 2);
  pd.PB = pd.hminus_raw.block<3, 3>(3, 2);
  if (std::abs(pd.PA.determinant()) < 1e-12 * std::pow(pd.PA.norm(), 3))
    throw Error(Err::SingularNormalization, "Prym a-period matrix is singular");
  Mat3c pinv = pd.PA.inverse();
  pd.pnorm = pinv.transpose();
  pd.Pi = (pd.PB * pinv).transpose();

  pd.A = pd.hminus_raw.block<3, 1>(0, 2);
  pd.B = pd.hminus_raw.block<3, 1>(3, 2);
  return pd;
}

double PeriodData::bilinear_residual() const {
  cplx r = 0;
  for (int j = 0; j < 2; ++j) r += Aper(j, 0) * Bper(j, 1) - Bper(j, 0) * Aper(j, 1);
  return std::abs(r);
}

}  // namespace prym
