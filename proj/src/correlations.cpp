#include "ptdiscord/correlations.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <numbers>

namespace ptdiscord {

namespace {

std::atomic<long> clamp_violations{0};

double clamp_nonneg(double x, const char* what) {
  if (x >= 0.0) return x;
  if (x < -tol::physicality) {
    clamp_violations.fetch_add(1, std::memory_order_relaxed);
    std::cerr << "ptdiscord: clamped " << what << " = " << x << " to 0\n";
  }
  return 0.0;
}

double entropy_of(const LogVal& x_sq) {
  // f evaluated at sqrt(x_sq); slightly-below-1 arguments fall into the
  // entropy clamp band.
  return entropy_f_log(0.5 * x_sq.log_abs());
}

LogVal abs_of(const LogVal& v) {
  return LogVal::from_log(v.sign() == 0 ? 0 : 1, v.log_abs());
}

// Radicands built by subtraction carry sqrt(eps)-scale noise at their zeros
// (product states, pure states); below the propagated floor the zero root is
// exact.
LogVal denoised(const LogVal& rad, const LogVal& magnitude) {
  if (abs_of(rad) < LogVal::from_value(1e-13) * magnitude) return LogVal{};
  if (rad.sign() < 0) return LogVal{};
  return rad;
}

// Conditional-determinant minimum over pure Gaussian measurements; the two
// closed-form branches in cancellation-free arrangements (the branch-1
// numerator is the perfect square (|c| + sqrt(rad))^2, branch 2 uses
// K = ab + d - c^2 with radical K^2 - 4abd, which equals the textbook
// c^4 + (d - ab)^2 - 2c^2(ab + d) without the c^4 overflow).
LogVal conditional_det_min(const LogVal& a, const LogVal& b, const LogVal& c, const LogVal& d) {
  const LogVal one = LogVal::from_value(1.0);
  const LogVal two = LogVal::from_value(2.0);
  const LogVal four = LogVal::from_value(4.0);
  const LogVal c2 = c * c;

  const LogVal lhs_root = d - a * b;
  const LogVal lhs = lhs_root * lhs_root;
  const LogVal rhs = (one + b) * c2 * (a + d);
  const bool branch1 = lhs <= rhs;

  const LogVal b_minus_1 = b - one;
  const bool b_degenerate = b_minus_1.sign() <= 0 || b_minus_1.log_abs() < std::log(1e-9);

  if (branch1 && !b_degenerate) {
    const LogVal cross = b_minus_1 * (d - a);
    const LogVal rad = denoised(c2 + cross, c2 + abs_of(cross));
    const LogVal e = (abs_of(c) + rad.sqrt()) / b_minus_1;
    return e * e;
  }
  const LogVal k = a * b + d - c2;
  const LogVal q = a * b * d;
  const LogVal rad = denoised(k * k - four * q, k * k + four * abs_of(q));
  return (two * (a * d)) / (k + rad.sqrt());
}

double discord_from_spectrum(const TwoModeSpectrum& s, MeasuredParty m) {
  LogVal a = s.a;  // unmeasured block
  LogVal b = s.b;  // measured block
  if (m == MeasuredParty::PartyL) std::swap(a, b);
  const LogVal e_min = conditional_det_min(a, b, s.c, s.d);
  const double raw = entropy_of(b) - entropy_of(s.nu_minus_sq) - entropy_of(s.nu_plus_sq) +
                     entropy_of(e_min);
  return clamp_nonneg(raw, "gaussian discord");
}

double mutual_information_from_spectrum(const TwoModeSpectrum& s) {
  const double raw = entropy_of(s.a) + entropy_of(s.b) - entropy_of(s.nu_minus_sq) -
                     entropy_of(s.nu_plus_sq);
  return clamp_nonneg(raw, "mutual information");
}

Eigen::Matrix2d rotation(double phi) {
  const double c = std::cos(phi), sn = std::sin(phi);
  Eigen::Matrix2d rot;
  rot << c, -sn, sn, c;
  return rot;
}

}  // namespace

double mutual_information(const TwoModeSpectrum& s) { return mutual_information_from_spectrum(s); }

double mutual_information(const CovarianceMatrix& sigma) {
  return mutual_information_from_spectrum(analyze(sigma));
}

double gaussian_discord(const TwoModeSpectrum& s, MeasuredParty m) {
  return discord_from_spectrum(s, m);
}

double gaussian_discord(const CovarianceMatrix& sigma, MeasuredParty m) {
  return discord_from_spectrum(analyze(sigma), m);
}

double classical_correlations(const TwoModeSpectrum& s, MeasuredParty m) {
  return clamp_nonneg(mutual_information_from_spectrum(s) - discord_from_spectrum(s, m),
                      "classical correlations");
}

double classical_correlations(const CovarianceMatrix& sigma, MeasuredParty m) {
  return classical_correlations(analyze(sigma), m);
}

double discord_measurement_oracle(const CovarianceMatrix& sigma, MeasuredParty m,
                                  const OracleGrid& grid) {
  if (sigma.max_abs() >= 1e12)
    throw std::invalid_argument("discord_measurement_oracle: entries must be below 1e12");
  if (grid.n_r < 2 || grid.n_phi < 1)
    throw std::invalid_argument("discord_measurement_oracle: grid too small");

  Eigen::Matrix2d alpha, beta, gamma_c;
  if (m == MeasuredParty::PartyG) {
    alpha = sigma.mode_l_block();
    beta = sigma.mode_g_block();
    gamma_c = sigma.cross_block();
  } else {
    alpha = sigma.mode_g_block();
    beta = sigma.mode_l_block();
    gamma_c = sigma.cross_block().transpose();
  }

  // Work in the seed's eigenframe: beta + R diag(e^{2r}, e^{-2r}) R^T
  // assembled directly loses det(seed) = 1 to e^{4r}-scale cancellation,
  // which fakes sub-optimal minima once the refinement pushes r past ~10.
  const auto conditional_det = [&](double r, double phi) -> double {
    const Eigen::Matrix2d rot = rotation(phi);
    const Eigen::Matrix2d beta_r = rot.transpose() * beta * rot;
    const Eigen::Matrix2d gamma_r = gamma_c * rot;
    Eigen::Matrix2d mmat = beta_r;
    mmat(0, 0) += std::exp(2.0 * r);
    mmat(1, 1) += std::exp(-2.0 * r);
    const double det_m = mmat.determinant();
    if (!(det_m > 0.0))
      throw std::runtime_error("discord_measurement_oracle: singular measured block");
    const Eigen::Matrix2d eps = alpha - gamma_r * mmat.inverse() * gamma_r.transpose();
    return eps.determinant();
  };

  double best = std::numeric_limits<double>::infinity();
  double r_best = 0.0, phi_best = 0.0;
  double dr = grid.r_max / (grid.n_r - 1);
  double dphi = std::numbers::pi / grid.n_phi;
  for (int i = 0; i < grid.n_r; ++i) {
    const double r = i * dr;
    for (int j = 0; j < grid.n_phi; ++j) {
      const double phi = j * dphi;
      const double v = conditional_det(r, phi);
      if (v < best) {
        best = v;
        r_best = r;
        phi_best = phi;
      }
    }
  }

  double r_edge = grid.r_max;
  for (int level = 0; level < grid.refine_levels; ++level) {
    // Homodyne-limit states park the argmin on the squeezing boundary; open
    // the window outward before zooming.
    while (r_best >= r_edge - 1.5 * dr && r_edge < 14.0) {
      const double r_lo = r_edge;
      const double phi_center = phi_best;
      r_edge = std::min(r_edge + 3.0, 14.0);
      const int n = 61;
      for (int i = 0; i < n; ++i) {
        const double r = r_lo + (r_edge - r_lo) * i / (n - 1);
        for (int j = -8; j <= 8; ++j) {
          const double phi = phi_center + j * dphi;
          const double v = conditional_det(r, phi);
          if (v < best) {
            best = v;
            r_best = r;
            phi_best = phi;
          }
        }
      }
      dr = (r_edge - r_lo) / (n - 1);
    }
    const double r_lo = std::max(0.0, r_best - 2.0 * dr);
    const double r_hi = r_best + 2.0 * dr;
    const double p_lo = phi_best - 2.0 * dphi;
    const double p_hi = phi_best + 2.0 * dphi;
    const int n = 41;
    for (int i = 0; i < n; ++i) {
      const double r = r_lo + (r_hi - r_lo) * i / (n - 1);
      for (int j = 0; j < n; ++j) {
        const double phi = p_lo + (p_hi - p_lo) * j / (n - 1);
        const double v = conditional_det(r, phi);
        if (v < best) {
          best = v;
          r_best = r;
          phi_best = phi;
        }
      }
    }
    dr = (r_hi - r_lo) / (n - 1);
    dphi = (p_hi - p_lo) / (n - 1);
  }

  const TwoModeSpectrum s = analyze(sigma);
  const LogVal b = (m == MeasuredParty::PartyG) ? s.b : s.a;
  const double raw = entropy_of(b) - entropy_of(s.nu_minus_sq) - entropy_of(s.nu_plus_sq) +
                     entropy_f(std::sqrt(std::max(best, 1.0)));
  return clamp_nonneg(raw, "oracle discord");
}

CorrelationReport correlation_report(const TwoModeSpectrum& s, std::optional<double> t) {
  CorrelationReport r;
  r.mutual_information = mutual_information_from_spectrum(s);
  r.discord_gl = discord_from_spectrum(s, MeasuredParty::PartyG);
  r.discord_lg = discord_from_spectrum(s, MeasuredParty::PartyL);
  r.classical_gl = clamp_nonneg(r.mutual_information - r.discord_gl, "classical correlations");
  r.classical_lg = clamp_nonneg(r.mutual_information - r.discord_lg, "classical correlations");
  r.ppt_nu_min = std::exp(0.5 * s.ppt_nu_minus_sq.log_abs());
  r.time = t;
  return r;
}

CorrelationReport correlation_report(const CovarianceMatrix& sigma, double t) {
  return correlation_report(analyze(sigma), t);
}

long clamp_violation_count() { return clamp_violations.load(std::memory_order_relaxed); }

}  // namespace ptdiscord
