#pragma once

#include <vector>

#include "ptdiscord/correlations.hpp"
#include "ptdiscord/dynamics.hpp"

// Long-time asymptotics, (gamma_G, gamma_L)-plane scans and threshold
// curves. All times and rates here are expressed in units of 1/g and g.

namespace ptdiscord {

enum class Asymptotics { Decayed, Saturated, Undetermined };

struct AsymptoticsOptions {
  double floor = 1e-4;        // "zero" level for the classification
  double drift_tol = 1e-6;    // windowed max-min drift for saturation
  double window = 5.0;        // trailing window, units 1/g
  double t_max = 200.0;       // hard cap, units 1/g
  double stride = 0.05;       // sampling stride, units 1/g
  double overflow_guard = tol::covariance_overflow;  // on max |sigma_ij|
};

struct AsymptoticsResult {
  Asymptotics classification = Asymptotics::Undetermined;
  double discord_gl_inf = 0;     // trailing-window means
  double discord_lg_inf = 0;
  double horizon_used = 0;       // units 1/g
  double mutual_info_slope = 0;  // nats per unit of 1/g time, ~0 when I saturates
};

/// Integrate sigma from the identity and classify the long-time discord:
/// Saturated when both discords sit above the floor with windowed drift
/// below drift_tol, Decayed when both stay below the floor across the
/// window, Undetermined when t_max or the overflow guard arrives first.
AsymptoticsResult asymptotic_correlations(const SystemParams& p,
                                          const AsymptoticsOptions& opts = {});

/// Minimal loss rate for finite stationary discord at fixed gain:
/// gamma_G below g, g^2/gamma_G above. Throws std::domain_error for
/// gamma_gain <= 0.
double threshold_curve(double gamma_gain, double g);

struct GridSpec {
  int resolution = 30;     // points per axis, rates gamma_max*i/n, i = 1..n
  double gamma_max = 3.0;  // in units of g
};

struct PhaseScanCell {
  double gamma_gain = 0;  // units of g
  double gamma_loss = 0;
  AsymptoticsResult asymptotics;
  StabilityClass stability;
  PTClass pt_class = PTClass::NotPTSymmetric;
};

struct PhaseScanTable {
  GridSpec grid;
  double g = 1.0;
  AsymptoticsOptions options;
  std::vector<PhaseScanCell> cells;  // row-major: gain index outer, loss inner

  const PhaseScanCell& at(int i_gain, int j_loss) const {
    return cells[static_cast<size_t>(i_gain) * grid.resolution + j_loss];
  }
};

/// Per-point asymptotics + stability + PT class over the open-grid
/// (0, gamma_max]^2. Cells are independent work items; threads = 0 picks
/// hardware concurrency capped by the PTDISCORD_THREADS environment
/// variable. Output is deterministic regardless of scheduling.
PhaseScanTable phase_scan(const GridSpec& grid, double g = 1.0,
                          const AsymptoticsOptions& opts = {}, int threads = 0);

struct PtLinePoint {
  double gamma = 0;  // units of g
  double discord_gl_inf = 0;
  double discord_lg_inf = 0;
  Asymptotics classification = Asymptotics::Undetermined;
};

/// Asymptotic discords along the PT-symmetry line gamma_L = gamma_G.
std::vector<PtLinePoint> pt_line_profile(const std::vector<double>& gammas, double g,
                                         const AsymptoticsOptions& opts = {});

}  // namespace ptdiscord
