#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <utility>

#include "ptdiscord/errors.hpp"
#include "ptdiscord/logval.hpp"
#include "ptdiscord/tolerances.hpp"

// Fixed-size Gaussian-state kernel: the covariance type, symplectic
// invariants and eigenvalues, the Gaussian entropy function, matrix
// exponentials and the stationary Lyapunov solve. Quadrature ordering is
// (x_L, p_L, x_G, p_G) throughout; a vacuum or coherent state has covariance
// equal to the 4x4 identity.

namespace ptdiscord {

/// Block-diagonal symplectic form matching the quadrature ordering:
/// Omega^2 = -1, Omega^T Omega = 1.
Eigen::Matrix4d symplectic_form();

/// Real symmetric 4x4 covariance matrix, vacuum-normalized. Symmetrized on
/// construction; immutable afterwards.
class CovarianceMatrix {
 public:
  CovarianceMatrix() : m_(Eigen::Matrix4d::Identity()) {}
  explicit CovarianceMatrix(const Eigen::Matrix4d& m) : m_(0.5 * (m + m.transpose())) {}

  static CovarianceMatrix vacuum() { return CovarianceMatrix{}; }

  const Eigen::Matrix4d& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Eigen::Matrix2d mode_l_block() const { return m_.topLeftCorner<2, 2>(); }
  Eigen::Matrix2d mode_g_block() const { return m_.bottomRightCorner<2, 2>(); }
  Eigen::Matrix2d cross_block() const { return m_.topRightCorner<2, 2>(); }

  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

 private:
  Eigen::Matrix4d m_;
};

/// Local symplectic invariants of a two-mode covariance: a = det L,
/// b = det G, c = det C, d = det sigma. Carried both as doubles and in
/// signed-log form; the linear fields saturate to +-inf once the log
/// representation leaves double range.
struct SymplecticInvariants {
  double a = 0, b = 0, c = 0, d = 0;
  LogVal log_a, log_b, log_c, log_d;
};

SymplecticInvariants invariants(const CovarianceMatrix& sigma);

/// Complete spectral description of a two-mode Gaussian state in log form:
/// invariants, symplectic eigenvalues squared and their partial-transpose
/// counterparts. Everything the correlation measures consume.
struct TwoModeSpectrum {
  LogVal a, b, c, d;
  LogVal nu_minus_sq, nu_plus_sq;
  LogVal ppt_nu_minus_sq, ppt_nu_plus_sq;
};

/// Direct route from a covariance matrix. Accurate while nu_+ / nu_- stays
/// below ~1e8 (double determinant conditioning); long-time trajectories use
/// the tracker in dynamics.hpp instead, which feeds the same struct.
TwoModeSpectrum analyze(const CovarianceMatrix& sigma);

/// Gaussian entropy f(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2),
/// in nats. Values in [1 - tol::entropy_domain, 1] clamp to 1; smaller x
/// throws std::domain_error. Above x = 1e8 the asymptotic branch
/// ln(x/2) + 1 is used (branches agree to ~1e-17 relative there).
double entropy_f(double x);

/// Same function evaluated from ln(x), for arguments beyond double range.
double entropy_f_log(double log_x);

/// Symplectic eigenvalue pair (nu_-, nu_+) of a positive-definite sigma:
/// moduli of the eigenvalues of i*Omega*sigma, computed from the invariants
/// via 2 nu_+^2 = Delta + sqrt(Delta^2 - 4d), nu_-^2 = d / nu_+^2.
std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix& sigma);

/// Invariant-space version returning (nu_-^2, nu_+^2) in log form.
/// Throws if Delta^2 - 4d < -1e-12 (inconsistent invariants).
std::pair<LogVal, LogVal> symplectic_eigenvalues_sq(const SymplecticInvariants& inv);

/// Smaller symplectic eigenvalue after partial transposition of mode G
/// (sign flip of the p_G row and column). nu~_- >= 1 certifies separability
/// for one-vs-one mode Gaussian states.
double ppt_min_symplectic_eig(const CovarianceMatrix& sigma);

/// Positive-definite with nu_- >= 1 - tol.
bool is_physical(const CovarianceMatrix& sigma, double tol = tol::physicality);

/// exp(M t) by scaling-and-squaring (no eigendecomposition, so defective
/// generators at the exceptional point are handled exactly like any other).
/// Throws OverflowError if any entry of the result exceeds 1e290.
template <typename Derived>
typename Derived::PlainObject matrix_exponential(const Eigen::MatrixBase<Derived>& m, double t) {
  using Mat = typename Derived::PlainObject;
  static_assert(Derived::RowsAtCompileTime == Derived::ColsAtCompileTime,
                "matrix_exponential: square matrices only");
  if (!m.allFinite() || !std::isfinite(t))
    throw std::invalid_argument("matrix_exponential: non-finite input");
  Mat scaled = m.derived() * t;
  Mat result = scaled.exp();
  if (!result.allFinite() || result.cwiseAbs().maxCoeff() > tol::exponential_overflow)
    throw OverflowError("matrix_exponential: result exceeds 1e290");
  return result;
}

/// Stationary solution of Y sigma + sigma Y^T + Q = 0 through the vectorized
/// 16x16 linear system. Y must be Hurwitz (all real parts < -1e-12), else
/// NoStationarySolution is thrown with the offending spectrum.
CovarianceMatrix lyapunov_solve(const Eigen::Matrix4d& y, const Eigen::Matrix4d& q);

}  // namespace ptdiscord
