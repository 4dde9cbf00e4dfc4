#include "ptdiscord/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptdiscord {

namespace {

double kind_sign(ChannelKind k) { return k == ChannelKind::Gain ? 1.0 : -1.0; }

bool rates_equal(const SystemParams& p) {
  const double scale = std::max({1.0, p.rate_l, p.rate_g});
  return std::abs(p.rate_l - p.rate_g) <= 1e-12 * scale;
}

Eigen::Matrix4d psd_sqrt(const Eigen::Matrix4d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m);
  Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
}

// e^{Y dt} and the Van Loan integral int_0^dt e^{Ys} 4D e^{Y^T s} ds from
// the exponential of [[Y, 4D], [0, -Y^T]].
void step_maps(const Eigen::Matrix4d& y, const Eigen::Matrix4d& d4, double dt,
               Eigen::Matrix4d& e, Eigen::Matrix4d& forcing) {
  Eigen::Matrix<double, 8, 8> aug = Eigen::Matrix<double, 8, 8>::Zero();
  aug.topLeftCorner<4, 4>() = y;
  aug.topRightCorner<4, 4>() = 4.0 * d4;
  aug.bottomRightCorner<4, 4>() = -y.transpose();
  Eigen::Matrix<double, 8, 8> expa = matrix_exponential(aug, dt);
  e = expa.topLeftCorner<4, 4>();
  forcing = expa.topRightCorner<4, 4>() * e.transpose();
  forcing = 0.5 * (forcing + forcing.transpose()).eval();
}

}  // namespace

SystemParams::SystemParams(double g_, double rate_l_, double rate_g_, ChannelKind kind_l_,
                           ChannelKind kind_g_)
    : g(g_), rate_l(rate_l_), rate_g(rate_g_), kind_l(kind_l_), kind_g(kind_g_) {
  if (!(g > 0.0)) throw std::invalid_argument("SystemParams: coupling g must be positive");
  if (rate_l < 0.0 || rate_g < 0.0)
    throw std::invalid_argument("SystemParams: channel rates must be nonnegative");
}

SystemParams SystemParams::gain_loss(double g, double gamma_gain, double gamma_loss) {
  return SystemParams(g, gamma_loss, gamma_gain, ChannelKind::Loss, ChannelKind::Gain);
}

SystemParams SystemParams::pt_symmetric(double g, double gamma) {
  return gain_loss(g, gamma, gamma);
}

Eigen::Matrix2cd mean_field_generator(const SystemParams& p) {
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd h;
  h << kind_sign(p.kind_l) * i * p.rate_l, p.g, p.g, kind_sign(p.kind_g) * i * p.rate_g;
  return h;
}

MeanFieldSpectrum mean_field_spectrum(const SystemParams& p) {
  // Closed form for [[d1, g], [g, d2]]: an iterative eigensolver loses the
  // degenerate root at the exceptional point to sqrt(eps) noise.
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> d1 = kind_sign(p.kind_l) * i * p.rate_l;
  const std::complex<double> d2 = kind_sign(p.kind_g) * i * p.rate_g;
  const std::complex<double> mean = 0.5 * (d1 + d2);
  const std::complex<double> root = std::sqrt(0.25 * (d1 - d2) * (d1 - d2) + p.g * p.g);

  MeanFieldSpectrum s;
  s.eigenvalues = {mean + root, mean - root};
  if (p.kind_l == ChannelKind::Loss && p.kind_g == ChannelKind::Gain && rates_equal(p)) {
    const double gamma = 0.5 * (p.rate_l + p.rate_g);
    if (std::abs(gamma - p.g) <= tol::spectral * p.g)
      s.pt_class = PTClass::ExceptionalPoint;
    else
      s.pt_class = gamma < p.g ? PTClass::ExactPhase : PTClass::BrokenPhase;
  }
  return s;
}

MeanField propagate_mean_field(const MeanField& psi0, const SystemParams& p, double t) {
  if (t < 0.0) throw std::invalid_argument("propagate_mean_field: t must be nonnegative");
  const std::complex<double> i(0.0, 1.0);
  const Eigen::Matrix2cd gen = -i * mean_field_generator(p);
  MeanField out;
  out.psi = matrix_exponential(gen, t) * psi0.psi;
  if (!out.psi.allFinite() || out.psi.cwiseAbs().maxCoeff() > tol::mean_field_overflow)
    throw OverflowError("propagate_mean_field: amplitude exceeds 1e150");
  return out;
}

Eigen::Matrix4d drift_matrix(const SystemParams& p) {
  const double dl = kind_sign(p.kind_l) * p.rate_l;
  const double dg = kind_sign(p.kind_g) * p.rate_g;
  Eigen::Matrix4d y;
  y << dl, 0, 0, p.g,
       0, dl, -p.g, 0,
       0, p.g, dg, 0,
       -p.g, 0, 0, dg;
  return y;
}

Eigen::Matrix4d diffusion_matrix(const SystemParams& p) {
  Eigen::Vector4d diag(p.rate_l, p.rate_l, p.rate_g, p.rate_g);
  return (0.5 * diag).asDiagonal();
}

CovarianceMatrix propagate_covariance(const CovarianceMatrix& sigma0, const SystemParams& p,
                                      double t, PropagationMethod method, double rk4_dt) {
  if (t < 0.0) throw std::invalid_argument("propagate_covariance: t must be nonnegative");
  if (t == 0.0) return sigma0;
  const Eigen::Matrix4d y = drift_matrix(p);
  const Eigen::Matrix4d d4 = diffusion_matrix(p);

  auto guard = [](const Eigen::Matrix4d& m) {
    if (!m.allFinite() || m.cwiseAbs().maxCoeff() > tol::covariance_overflow)
      throw OverflowError("propagate_covariance: entry exceeds 1e100");
  };

  if (method == PropagationMethod::ExactExponential) {
    Eigen::Matrix4d e, forcing;
    step_maps(y, d4, t, e, forcing);
    Eigen::Matrix4d s = e * sigma0.matrix() * e.transpose() + forcing;
    s = 0.5 * (s + s.transpose()).eval();
    guard(s);
    return CovarianceMatrix(s);
  }

  if (!(rk4_dt > 0.0)) throw std::invalid_argument("propagate_covariance: RK4 step must be positive");
  const auto rhs = [&](const Eigen::Matrix4d& s) -> Eigen::Matrix4d {
    return y * s + s * y.transpose() + 4.0 * d4;
  };
  Eigen::Matrix4d s = sigma0.matrix();
  const long nsteps = static_cast<long>(std::ceil(t / rk4_dt - 1e-12));
  const double h = t / static_cast<double>(nsteps);
  for (long k = 0; k < nsteps; ++k) {
    const Eigen::Matrix4d k1 = rhs(s);
    const Eigen::Matrix4d k2 = rhs(s + 0.5 * h * k1);
    const Eigen::Matrix4d k3 = rhs(s + 0.5 * h * k2);
    const Eigen::Matrix4d k4 = rhs(s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s = 0.5 * (s + s.transpose()).eval();
    guard(s);
  }
  return CovarianceMatrix(s);
}

StabilityClass stability_class(const SystemParams& p) {
  // Y is the realification of -iH, so its spectrum is {-i eps} with
  // conjugates: the four real parts are {Im eps_1 (x2), Im eps_2 (x2)}.
  const MeanFieldSpectrum mf = mean_field_spectrum(p);
  StabilityClass sc;
  sc.drift_spectrum_re = {mf.eigenvalues[0].imag(), mf.eigenvalues[0].imag(),
                          mf.eigenvalues[1].imag(), mf.eigenvalues[1].imag()};
  std::sort(sc.drift_spectrum_re.begin(), sc.drift_spectrum_re.end());
  sc.stability = sc.drift_spectrum_re.back() < -tol::spectral ? Stability::FullyStable
                                                              : Stability::Unstable;
  return sc;
}

CovarianceMatrix stationary_covariance(const SystemParams& p) {
  const StabilityClass sc = stability_class(p);
  if (!sc.fully_stable())
    throw NoStationarySolution("stationary_covariance: drift matrix is not Hurwitz",
                               sc.drift_spectrum_re);
  return lyapunov_solve(drift_matrix(p), 4.0 * diffusion_matrix(p));
}

CovarianceTracker::CovarianceTracker(const SystemParams& p, double dt) : dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("CovarianceTracker: dt must be positive");
  const Eigen::Matrix4d y = drift_matrix(p);
  step_maps(y, diffusion_matrix(p), dt, step_map_, forcing_);
  step_map_inv_ = matrix_exponential(y, -dt);
  forcing_sqrt_ = psd_sqrt(forcing_);
}

void CovarianceTracker::step() {
  // sigma update in normalized form: sigma_hat' = (E sigma_hat E^T +
  // e^{-ls} F) / rho with the max entry renormalized to 1.
  Eigen::Matrix4d s = step_map_ * sigma_hat_ * step_map_.transpose() +
                      std::exp(-log_scale_) * forcing_;
  s = 0.5 * (s + s.transpose()).eval();
  const double rho = s.cwiseAbs().maxCoeff();
  sigma_hat_ = s / rho;
  log_scale_ += std::log(rho);

  // Inverse update via Woodbury: (E sigma E^T + Fh Fh^T)^-1 with
  // (E sigma E^T)^-1 = E^-T Lambda E^-1. Everything stays O(1) because the
  // diffusion floor bounds sigma from below.
  Eigen::Matrix4d b = step_map_inv_.transpose() * inv_ * step_map_inv_;
  b = 0.5 * (b + b.transpose()).eval();
  const Eigen::Matrix4d bf = b * forcing_sqrt_;
  const Eigen::Matrix4d core =
      Eigen::Matrix4d::Identity() + forcing_sqrt_.transpose() * bf;
  Eigen::Matrix4d lam = b - bf * core.ldlt().solve(bf.transpose());
  inv_ = 0.5 * (lam + lam.transpose()).eval();

  t_ += dt_;
}

CovarianceMatrix CovarianceTracker::sigma() const {
  if (log_scale_ > std::log(tol::covariance_overflow))
    throw OverflowError("CovarianceTracker: entry exceeds 1e100");
  return CovarianceMatrix(std::exp(log_scale_) * sigma_hat_);
}

namespace {

// Largest symplectic eigenvalue squared of an O(1) positive matrix; the tiny
// det term only matters when the spectrum is nearly degenerate, where it is
// accurate anyway.
double largest_symp_eig_sq(const Eigen::Matrix4d& m) {
  const double a = m.topLeftCorner<2, 2>().determinant();
  const double b = m.bottomRightCorner<2, 2>().determinant();
  const double c = m.topRightCorner<2, 2>().determinant();
  const double d = m.determinant();
  const double delta = a + b + 2.0 * c;
  double disc = delta * delta - 4.0 * d;
  // Near-degenerate spectra leave sqrt(eps) noise in the discriminant; zero
  // it below the propagated roundoff so the vacuum stays exactly at 1.
  if (disc < 1e-13 * (delta * delta + 4.0 * std::abs(d))) disc = 0.0;
  return 0.5 * (delta + std::sqrt(disc));
}

}  // namespace

TwoModeSpectrum CovarianceTracker::spectrum() const {
  TwoModeSpectrum s;
  const LogVal s2 = LogVal::from_log(1, 2.0 * log_scale_);
  s.a = LogVal::from_value(sigma_hat_.topLeftCorner<2, 2>().determinant()) * s2;
  s.b = LogVal::from_value(sigma_hat_.bottomRightCorner<2, 2>().determinant()) * s2;
  s.c = LogVal::from_value(sigma_hat_.topRightCorner<2, 2>().determinant()) * s2;

  // nu_-^2 = 1 / nu_+^2(Lambda); nu_+^2 = Delta - nu_-^2 (the invariant sum
  // Delta = nu_-^2 + nu_+^2); d = nu_-^2 nu_+^2. This route never suffers
  // the det-sigma cancellation that kills the direct formula at large
  // condition numbers.
  const LogVal two = LogVal::from_value(2.0);
  s.nu_minus_sq = LogVal::from_value(1.0 / largest_symp_eig_sq(inv_));
  const LogVal delta = s.a + s.b + two * s.c;
  s.nu_plus_sq = delta - s.nu_minus_sq;
  s.d = s.nu_minus_sq * s.nu_plus_sq;

  static const Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
  const Eigen::Matrix4d inv_ppt = flip.asDiagonal() * inv_ * flip.asDiagonal();
  s.ppt_nu_minus_sq = LogVal::from_value(1.0 / largest_symp_eig_sq(inv_ppt));
  const LogVal delta_ppt = s.a + s.b - two * s.c;
  s.ppt_nu_plus_sq = delta_ppt - s.ppt_nu_minus_sq;
  return s;
}

}  // namespace ptdiscord
