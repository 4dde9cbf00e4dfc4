#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

#include "ptdiscord/gaussian.hpp"

// Generators and propagators for the coupled gain-loss pair: the 2x2
// non-Hermitian mean-field generator, the 4x4 quadrature drift/diffusion
// pair, PT-phase and stability classification, and covariance propagation
// (one-shot and streaming).

namespace ptdiscord {

enum class ChannelKind { Gain, Loss };

/// Coupling g plus one incoherent channel per mode. The reference
/// configuration is loss on L, gain on G; the kinds are free so each channel
/// can be swapped independently.
struct SystemParams {
  double g = 1.0;
  double rate_l = 0.0;
  double rate_g = 0.0;
  ChannelKind kind_l = ChannelKind::Loss;
  ChannelKind kind_g = ChannelKind::Gain;

  SystemParams(double g_, double rate_l_, double rate_g_,
               ChannelKind kind_l_ = ChannelKind::Loss,
               ChannelKind kind_g_ = ChannelKind::Gain);

  /// Paper configuration: gain at rate gamma_gain on G, loss at gamma_loss on L.
  static SystemParams gain_loss(double g, double gamma_gain, double gamma_loss);
  /// Equal rates on the PT-symmetry line.
  static SystemParams pt_symmetric(double g, double gamma);
};

/// Mean field psi = (<a_L>, <a_G>).
struct MeanField {
  Eigen::Vector2cd psi = Eigen::Vector2cd::Zero();
  std::complex<double> mode_l() const { return psi(0); }
  std::complex<double> mode_g() const { return psi(1); }
};

enum class PTClass { ExactPhase, ExceptionalPoint, BrokenPhase, NotPTSymmetric };

struct MeanFieldSpectrum {
  std::array<std::complex<double>, 2> eigenvalues;  // {+sqrt branch, -sqrt branch}
  PTClass pt_class = PTClass::NotPTSymmetric;
};

enum class Stability { FullyStable, Unstable };

struct StabilityClass {
  Stability stability = Stability::Unstable;
  std::array<double, 4> drift_spectrum_re{};  // ascending
  bool fully_stable() const { return stability == Stability::FullyStable; }
};

/// The 2x2 generator of i psi' = H psi. Loss contributes -i rate on its
/// mode's diagonal, gain +i rate; the gain-loss default reads
/// [[-i g_L, g], [g, +i g_G]].
Eigen::Matrix2cd mean_field_generator(const SystemParams& p);

/// Eigenvalues of the generator (closed form, exact at the EP) plus the PT
/// classification. On the PT line these are +-sqrt(g^2 - gamma^2).
MeanFieldSpectrum mean_field_spectrum(const SystemParams& p);

/// psi(t) = exp(-i H t) psi0. Throws OverflowError when the amplitude
/// exceeds 1e150.
MeanField propagate_mean_field(const MeanField& psi0, const SystemParams& p, double t);

/// Quadrature drift matrix Y (loss -> -rate, gain -> +rate on the mode's
/// diagonal pair, fixed +-g coupling pattern).
Eigen::Matrix4d drift_matrix(const SystemParams& p);

/// Diffusion D = (1/2) diag(rate_L, rate_L, rate_G, rate_G); both channel
/// kinds inject the same quadrature noise.
Eigen::Matrix4d diffusion_matrix(const SystemParams& p);

enum class PropagationMethod { ExactExponential, RK4 };

/// Propagate sigma' = Y sigma + sigma Y^T + 4D. ExactExponential evaluates
/// sigma(t) = e^{Yt} sigma0 e^{Y^T t} + int_0^t e^{Ys} 4D e^{Y^T s} ds with
/// the inhomogeneous term from the block-augmented exponential; RK4 is a
/// fixed-step cross-check. Both symmetrize the result. Throws OverflowError
/// above 1e100 per entry.
CovarianceMatrix propagate_covariance(const CovarianceMatrix& sigma0, const SystemParams& p,
                                      double t,
                                      PropagationMethod method = PropagationMethod::ExactExponential,
                                      double rk4_dt = 1e-3);

/// sigma_inf solving Y sigma + sigma Y^T + 4D = 0; NoStationarySolution when
/// the drift is not Hurwitz.
CovarianceMatrix stationary_covariance(const SystemParams& p);

/// FullyStable iff every drift eigenvalue has real part < -1e-12. Real parts
/// come from the closed-form mean-field spectrum (Y is the realification of
/// -iH, so its spectrum is {-i eps} plus conjugates).
StabilityClass stability_class(const SystemParams& p);

/// Streaming covariance propagator that keeps the symplectic spectrum
/// resolvable at arbitrary horizon. Raw double storage of sigma loses nu_-
/// once nu_+/nu_- > ~1e8 (entry roundoff eps*||sigma|| swamps the small
/// symplectic directions), which in the broken phase happens by t ~ 16/g.
/// The tracker advances the exact affine step map on a max-normalized sigma
/// with an accumulated log scale, and advances the true inverse covariance
/// through the matching Woodbury update. The inverse stays O(1) because the
/// diffusion floor keeps sigma(t) >= c*1 whenever a nonzero rate is present,
/// and it supplies nu_- and the PPT witness directly.
class CovarianceTracker {
 public:
  CovarianceTracker(const SystemParams& p, double dt);

  void step();

  double time() const { return t_; }
  double dt() const { return dt_; }
  /// ln(max |sigma_ij|); the normalized factor has unit max entry.
  double log_scale() const { return log_scale_; }
  const Eigen::Matrix4d& normalized_sigma() const { return sigma_hat_; }
  const Eigen::Matrix4d& inverse_sigma() const { return inv_; }

  /// Materialize sigma (throws OverflowError beyond the 1e100 guard).
  CovarianceMatrix sigma() const;

  /// Invariants + symplectic spectrum, accurate at any horizon.
  TwoModeSpectrum spectrum() const;

 private:
  Eigen::Matrix4d step_map_;       // e^{Y dt}
  Eigen::Matrix4d step_map_inv_;   // e^{-Y dt}
  Eigen::Matrix4d forcing_;        // int_0^dt e^{Ys} 4D e^{Y^T s} ds
  Eigen::Matrix4d forcing_sqrt_;
  Eigen::Matrix4d sigma_hat_ = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d inv_ = Eigen::Matrix4d::Identity();
  double log_scale_ = 0.0;
  double t_ = 0.0;
  double dt_ = 0.0;
};

}  // namespace ptdiscord
