#include "ptdiscord/gaussian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ptdiscord {

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

SymplecticInvariants invariants(const CovarianceMatrix& sigma) {
  SymplecticInvariants inv;
  const Eigen::Matrix4d& m = sigma.matrix();
  const double scale = sigma.max_abs();
  if (scale == 0.0) return inv;

  // Determinants of the rescaled matrix stay O(1); the scale factor moves
  // into the log representation so nothing overflows.
  const Eigen::Matrix4d n = m / scale;
  const double log_s2 = 2.0 * std::log(scale);
  const LogVal s2 = LogVal::from_log(1, log_s2);
  const LogVal s4 = LogVal::from_log(1, 2.0 * log_s2);

  inv.log_a = LogVal::from_value(n.topLeftCorner<2, 2>().determinant()) * s2;
  inv.log_b = LogVal::from_value(n.bottomRightCorner<2, 2>().determinant()) * s2;
  inv.log_c = LogVal::from_value(n.topRightCorner<2, 2>().determinant()) * s2;
  // LU determinant: the 4x4 cofactor expansion loses the small symplectic
  // direction noticeably earlier on ill-conditioned inputs.
  inv.log_d = LogVal::from_value(Eigen::PartialPivLU<Eigen::Matrix4d>(n).determinant()) * s4;

  if (scale < tol::log_domain_entry) {
    inv.a = m.topLeftCorner<2, 2>().determinant();
    inv.b = m.bottomRightCorner<2, 2>().determinant();
    inv.c = m.topRightCorner<2, 2>().determinant();
    inv.d = inv.log_d.value();
  } else {
    inv.a = inv.log_a.value();
    inv.b = inv.log_b.value();
    inv.c = inv.log_c.value();
    inv.d = inv.log_d.value();
  }
  return inv;
}

double entropy_f(double x) {
  if (!(x >= 1.0 - tol::entropy_domain))
    throw std::domain_error("entropy_f: argument below 1 (unphysical symplectic eigenvalue)");
  if (x <= 1.0) return 0.0;
  if (x > tol::entropy_asymptotic_x) return std::log(0.5 * x) + 1.0;
  if (x < 2.0) {
    const double u = 0.5 * (x + 1.0);
    const double v = 0.5 * (x - 1.0);
    return u * std::log(u) - (v > 0.0 ? v * std::log(v) : 0.0);
  }
  // u ln u - v ln v rearranged as u ln(u/v) + ln v; the direct difference
  // cancels catastrophically for large x.
  return 0.5 * (x + 1.0) * std::log1p(2.0 / (x - 1.0)) + std::log(0.5 * (x - 1.0));
}

double entropy_f_log(double log_x) {
  if (log_x > std::log(tol::entropy_asymptotic_x))
    return log_x - std::numbers::ln2 + 1.0;
  return entropy_f(std::exp(log_x));
}

std::pair<LogVal, LogVal> symplectic_eigenvalues_sq(const SymplecticInvariants& inv) {
  const LogVal two = LogVal::from_value(2.0);
  const LogVal four = LogVal::from_value(4.0);
  const LogVal delta = inv.log_a + inv.log_b + two * inv.log_c;
  LogVal disc = delta * delta - four * inv.log_d;
  // The subtraction leaves sqrt(eps)-scale noise when the spectrum is nearly
  // degenerate (pure states have Delta^2 = 4d exactly); below the propagated
  // noise floor the degenerate root is the right answer.
  const LogVal noise = LogVal::from_value(1e-13) *
                       (delta * delta + four * LogVal::from_log(inv.log_d.sign() == 0 ? 0 : 1,
                                                                inv.log_d.log_abs()));
  if (disc.sign() < 0) {
    if (disc.value() < -1e-12 && LogVal::from_log(1, disc.log_abs()) > noise)
      throw std::runtime_error("symplectic_eigenvalues: Delta^2 - 4d < -1e-12 (inconsistent invariants)");
    disc = LogVal{};
  } else if (disc < noise) {
    disc = LogVal{};
  }
  const LogVal nu_plus_sq = (delta + disc.sqrt()) / two;
  if (inv.log_d.sign() <= 0)
    throw std::domain_error("symplectic_eigenvalues: det sigma <= 0 (not positive-definite)");
  const LogVal nu_minus_sq = inv.log_d / nu_plus_sq;
  return {nu_minus_sq, nu_plus_sq};
}

std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix& sigma) {
  auto [nm2, np2] = symplectic_eigenvalues_sq(invariants(sigma));
  return {std::exp(0.5 * nm2.log_abs()), std::exp(0.5 * np2.log_abs())};
}

TwoModeSpectrum analyze(const CovarianceMatrix& sigma) {
  const SymplecticInvariants inv = invariants(sigma);
  TwoModeSpectrum s;
  s.a = inv.log_a;
  s.b = inv.log_b;
  s.c = inv.log_c;
  s.d = inv.log_d;
  std::tie(s.nu_minus_sq, s.nu_plus_sq) = symplectic_eigenvalues_sq(inv);

  // Partial transposition flips the sign of c; a, b, d are unchanged.
  SymplecticInvariants ppt = inv;
  ppt.c = -inv.c;
  ppt.log_c = -inv.log_c;
  std::tie(s.ppt_nu_minus_sq, s.ppt_nu_plus_sq) = symplectic_eigenvalues_sq(ppt);
  return s;
}

double ppt_min_symplectic_eig(const CovarianceMatrix& sigma) {
  Eigen::Matrix4d flipped = sigma.matrix();
  for (int i = 0; i < 4; ++i) {
    if (i == 3) continue;
    flipped(i, 3) = -flipped(i, 3);
    flipped(3, i) = -flipped(3, i);
  }
  auto [nm, np] = symplectic_eigenvalues(CovarianceMatrix(flipped));
  (void)np;
  return nm;
}

bool is_physical(const CovarianceMatrix& sigma, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(sigma.matrix());
  if (es.eigenvalues().minCoeff() <= 0.0) return false;
  auto [nm, np] = symplectic_eigenvalues(sigma);
  (void)np;
  return nm >= 1.0 - tol;
}

CovarianceMatrix lyapunov_solve(const Eigen::Matrix4d& y, const Eigen::Matrix4d& q) {
  Eigen::EigenSolver<Eigen::Matrix4d> es(y);
  std::array<double, 4> re{};
  for (int i = 0; i < 4; ++i) re[i] = es.eigenvalues()(i).real();
  std::sort(re.begin(), re.end());
  if (re.back() >= -tol::spectral)
    throw NoStationarySolution("lyapunov_solve: drift matrix is not Hurwitz", re);

  // Vectorized system (I (x) Y + Y (x) I) vec(sigma) = -vec(Q), column-major.
  Eigen::Matrix<double, 16, 16> big = Eigen::Matrix<double, 16, 16>::Zero();
  for (int j = 0; j < 4; ++j)
    big.block<4, 4>(4 * j, 4 * j) += y;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      big.block<4, 4>(4 * i, 4 * j) += y(i, j) * Eigen::Matrix4d::Identity();

  Eigen::Matrix<double, 16, 1> rhs;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) rhs(4 * j + i) = -q(i, j);

  Eigen::FullPivLU<Eigen::Matrix<double, 16, 16>> lu(big);
  Eigen::Matrix<double, 16, 1> x = lu.solve(rhs);
  // One round of iterative refinement keeps the residual at the noise floor.
  x += lu.solve(rhs - big * x);

  Eigen::Matrix4d sigma;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) sigma(i, j) = x(4 * j + i);
  return CovarianceMatrix(sigma);
}

}  // namespace ptdiscord
