#include "ptdiscord/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ptdiscord {

namespace {

struct WindowStats {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double mean = 0.0;
};

WindowStats stats(const std::deque<double>& w) {
  WindowStats s;
  double sum = 0.0;
  for (double v : w) {
    s.lo = std::min(s.lo, v);
    s.hi = std::max(s.hi, v);
    sum += v;
  }
  s.mean = sum / static_cast<double>(w.size());
  return s;
}

// Least-squares slope of the trailing mutual-information window.
double window_slope(const std::deque<double>& values, double stride) {
  const size_t n = values.size();
  if (n < 2) return 0.0;
  const double tbar = 0.5 * static_cast<double>(n - 1);
  double sxy = 0.0, sxx = 0.0, ybar = 0.0;
  for (double v : values) ybar += v;
  ybar /= static_cast<double>(n);
  for (size_t k = 0; k < n; ++k) {
    const double dx = static_cast<double>(k) - tbar;
    sxy += dx * (values[k] - ybar);
    sxx += dx * dx;
  }
  return sxy / (sxx * stride);
}

int scan_thread_count(int requested, size_t cells) {
  int n = requested;
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("PTDISCORD_THREADS")) {
      const int cap = std::atoi(env);
      if (cap > 0) n = std::min(n, cap);
    }
  }
  return std::max(1, std::min<int>(n, static_cast<int>(cells)));
}

}  // namespace

AsymptoticsResult asymptotic_correlations(const SystemParams& p, const AsymptoticsOptions& opts) {
  if (!(opts.stride > 0.0) || !(opts.window > 0.0) || !(opts.t_max > 0.0))
    throw std::invalid_argument("asymptotic_correlations: stride, window, t_max must be positive");

  const double dt_abs = opts.stride / p.g;
  const size_t wlen = static_cast<size_t>(std::lround(opts.window / opts.stride)) + 1;
  const long nmax = std::lround(opts.t_max / opts.stride);
  const double log_guard = std::log(opts.overflow_guard);

  CovarianceTracker tracker(p, dt_abs);
  std::deque<double> win_gl, win_lg, win_mi;

  AsymptoticsResult res;
  for (long k = 0;; ++k) {
    const TwoModeSpectrum s = tracker.spectrum();
    win_gl.push_back(gaussian_discord(s, MeasuredParty::PartyG));
    win_lg.push_back(gaussian_discord(s, MeasuredParty::PartyL));
    win_mi.push_back(mutual_information(s));
    if (win_gl.size() > wlen) {
      win_gl.pop_front();
      win_lg.pop_front();
      win_mi.pop_front();
    }

    const double tau = static_cast<double>(k) * opts.stride;
    if (win_gl.size() == wlen) {
      const WindowStats gl = stats(win_gl), lg = stats(win_lg);
      // Decayed demands a non-increasing window on top of the floor: every
      // trajectory starts below the floor, and a point climbing to a small
      // finite plateau would otherwise be misread during its slow rise.
      const bool falling = win_gl.back() <= win_gl.front() + opts.drift_tol &&
                           win_lg.back() <= win_lg.front() + opts.drift_tol;
      const bool decayed = falling && gl.hi < opts.floor && lg.hi < opts.floor;
      const bool settled =
          (gl.hi - gl.lo) < opts.drift_tol && (lg.hi - lg.lo) < opts.drift_tol;
      const bool saturated = !decayed && settled && win_gl.back() > opts.floor &&
                             win_lg.back() > opts.floor;
      if (decayed || saturated) {
        res.classification = decayed ? Asymptotics::Decayed : Asymptotics::Saturated;
        res.discord_gl_inf = gl.mean;
        res.discord_lg_inf = lg.mean;
        res.horizon_used = tau;
        res.mutual_info_slope = window_slope(win_mi, opts.stride);
        return res;
      }
    }

    if (k >= nmax || tracker.log_scale() > log_guard) {
      res.classification = Asymptotics::Undetermined;
      res.discord_gl_inf = stats(win_gl).mean;
      res.discord_lg_inf = stats(win_lg).mean;
      res.horizon_used = tau;
      res.mutual_info_slope = window_slope(win_mi, opts.stride);
      return res;
    }
    tracker.step();
  }
}

double threshold_curve(double gamma_gain, double g) {
  if (!(gamma_gain > 0.0))
    throw std::domain_error("threshold_curve: gamma_gain must be positive");
  return gamma_gain <= g ? gamma_gain : g * g / gamma_gain;
}

PhaseScanTable phase_scan(const GridSpec& grid, double g, const AsymptoticsOptions& opts,
                          int threads) {
  if (grid.resolution < 2) throw std::invalid_argument("phase_scan: resolution must be >= 2");
  if (!(grid.gamma_max > 0.0)) throw std::invalid_argument("phase_scan: gamma_max must be positive");

  PhaseScanTable table;
  table.grid = grid;
  table.g = g;
  table.options = opts;
  const int n = grid.resolution;
  table.cells.resize(static_cast<size_t>(n) * n);

  std::atomic<size_t> next{0};
  const size_t total = table.cells.size();
  auto worker = [&]() {
    for (size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      const int i = static_cast<int>(idx) / n;  // gain index
      const int j = static_cast<int>(idx) % n;  // loss index
      PhaseScanCell& cell = table.cells[idx];
      cell.gamma_gain = grid.gamma_max * (i + 1) / n;
      cell.gamma_loss = grid.gamma_max * (j + 1) / n;
      const SystemParams p = SystemParams::gain_loss(g, cell.gamma_gain * g, cell.gamma_loss * g);
      cell.asymptotics = asymptotic_correlations(p, opts);
      cell.stability = stability_class(p);
      cell.pt_class = mean_field_spectrum(p).pt_class;
    }
  };

  const int nthreads = scan_thread_count(threads, total);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return table;
}

std::vector<PtLinePoint> pt_line_profile(const std::vector<double>& gammas, double g,
                                         const AsymptoticsOptions& opts) {
  std::vector<PtLinePoint> out;
  out.reserve(gammas.size());
  for (double gamma : gammas) {
    if (!(gamma > 0.0)) throw std::domain_error("pt_line_profile: gamma values must be positive");
    const AsymptoticsResult r =
        asymptotic_correlations(SystemParams::pt_symmetric(g, gamma * g), opts);
    out.push_back({gamma, r.discord_gl_inf, r.discord_lg_inf, r.classification});
  }
  return out;
}

}  // namespace ptdiscord
