// ptdiscord: trajectories, stationary solves and phase scans of the coupled
// gain-loss oscillator pair, emitted as CSV/JSON.
//
// Exit codes: 0 ok, 2 usage error, 3 overflow-truncated run, 4 no stationary
// solution.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "ptdiscord/correlations.hpp"
#include "ptdiscord/dynamics.hpp"
#include "ptdiscord/scan_io.hpp"
#include "ptdiscord/sweep.hpp"

namespace {

using namespace ptdiscord;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitOverflow = 3;
constexpr int kExitNoStationary = 4;

struct RunConfig {
  double g = 1.0;
  double gamma_gain = 0.5;   // units of g
  double gamma_loss = 0.5;   // units of g
  std::string kind_g = "gain";
  std::string kind_l = "loss";
  double t_max = 40.0;       // units of 1/g
  double stride = 0.05;      // units of 1/g
  double alpha_l_re = 1.0, alpha_l_im = 0.0;
  double alpha_g_re = 1.0, alpha_g_im = 0.0;
  int resolution = 30;
  double gamma_max = 3.0;    // units of g
  std::string format = "json";
  std::string output;
  int threads = 0;
  bool pt_line = false;
  double floor = 1e-4;
  double drift_tol = 1e-6;
  double window = 5.0;
  double scan_t_max = 200.0;
};

ChannelKind kind_from(const std::string& s) {
  return s == "gain" ? ChannelKind::Gain : ChannelKind::Loss;
}

SystemParams params_from(const RunConfig& cfg) {
  return SystemParams(cfg.g, cfg.gamma_loss * cfg.g, cfg.gamma_gain * cfg.g,
                      kind_from(cfg.kind_l), kind_from(cfg.kind_g));
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", x);
  return buf;
}

// Output stream selection: "-" or empty means stdout.
struct OutFile {
  explicit OutFile(const std::string& path) {
    if (!path.empty() && path != "-") {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file ? *file : std::cout; }
  std::unique_ptr<std::ofstream> file;
};

void print_common_header(std::ostream& os, const RunConfig& cfg) {
  os << "# ptdiscord " << artifact_version << ": g=" << cfg.g << ", gamma_gain=" << cfg.gamma_gain
     << "g (" << cfg.kind_g << " on G), gamma_loss=" << cfg.gamma_loss << "g (" << cfg.kind_l
     << " on L)\n";
  os << "# time in 1/g, entropies in nats\n";
}

int cmd_evolve(const RunConfig& cfg) {
  const SystemParams p = params_from(cfg);
  OutFile out(cfg.output);
  std::ostream& os = out.stream();
  print_common_header(os, cfg);
  os << "t,D_GL,D_LG,I,C_GL,C_LG,ppt_nu_min,mean_x_L,mean_p_L,mean_x_G,mean_p_G\n";

  MeanField psi0;
  psi0.psi << std::complex<double>(cfg.alpha_l_re, cfg.alpha_l_im),
      std::complex<double>(cfg.alpha_g_re, cfg.alpha_g_im);

  CovarianceTracker tracker(p, cfg.stride / cfg.g);
  const long nsteps = std::lround(cfg.t_max / cfg.stride);
  const double sqrt2 = std::sqrt(2.0);
  for (long k = 0;; ++k) {
    const double tau = static_cast<double>(k) * cfg.stride;
    MeanField psi;
    try {
      if (tracker.log_scale() > std::log(tol::covariance_overflow))
        throw OverflowError("covariance entry exceeds 1e100");
      psi = propagate_mean_field(psi0, p, tau / cfg.g);
    } catch (const OverflowError& e) {
      os << "# truncated: " << e.what() << " at t=" << fmt(tau) << "\n";
      return kExitOverflow;
    }
    const CorrelationReport r = correlation_report(tracker.spectrum(), tau);
    os << fmt(tau) << ',' << fmt(r.discord_gl) << ',' << fmt(r.discord_lg) << ','
       << fmt(r.mutual_information) << ',' << fmt(r.classical_gl) << ',' << fmt(r.classical_lg)
       << ',' << fmt(r.ppt_nu_min) << ',' << fmt(sqrt2 * psi.mode_l().real()) << ','
       << fmt(sqrt2 * psi.mode_l().imag()) << ',' << fmt(sqrt2 * psi.mode_g().real()) << ','
       << fmt(sqrt2 * psi.mode_g().imag()) << '\n';
    if (k >= nsteps) break;
    tracker.step();
  }
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg) {
  GridSpec grid;
  grid.resolution = cfg.resolution;
  grid.gamma_max = cfg.gamma_max;
  AsymptoticsOptions opts;
  opts.floor = cfg.floor;
  opts.drift_tol = cfg.drift_tol;
  opts.window = cfg.window;
  opts.t_max = cfg.scan_t_max;
  opts.stride = cfg.stride;

  OutFile out(cfg.output);
  if (cfg.pt_line) {
    // Profile along gamma_L = gamma_G instead of the full plane.
    std::vector<double> gammas;
    for (int i = 1; i <= grid.resolution; ++i)
      gammas.push_back(grid.gamma_max * i / grid.resolution);
    const std::vector<PtLinePoint> profile = pt_line_profile(gammas, cfg.g, opts);
    std::ostream& os = out.stream();
    if (cfg.format == "csv") {
      os << "# ptdiscord scan --pt-line: g=" << cfg.g << "\n";
      os << "# rates in g, entropies in nats\n";
      os << "gamma,discord_GL_inf,discord_LG_inf,classification\n";
      for (const PtLinePoint& p : profile)
        os << fmt(p.gamma) << ',' << fmt(p.discord_gl_inf) << ',' << fmt(p.discord_lg_inf) << ','
           << to_string(p.classification) << '\n';
    } else {
      nlohmann::json j;
      j["schema_version"] = schema_version;
      j["metadata"] = {{"artifact_version", artifact_version}, {"g", cfg.g}, {"pt_line", true}};
      nlohmann::json rows = nlohmann::json::array();
      for (const PtLinePoint& p : profile)
        rows.push_back({{"gamma", p.gamma},
                        {"discord_GL_inf", p.discord_gl_inf},
                        {"discord_LG_inf", p.discord_lg_inf},
                        {"classification", to_string(p.classification)}});
      j["points"] = std::move(rows);
      os << j.dump(2) << '\n';
    }
    return kExitOk;
  }

  const PhaseScanTable table = phase_scan(grid, cfg.g, opts, cfg.threads);
  if (cfg.format == "csv")
    write_scan_csv(table, out.stream());
  else
    write_scan_json(table, out.stream());
  return kExitOk;
}

int cmd_steady(const RunConfig& cfg) {
  const SystemParams p = params_from(cfg);
  CovarianceMatrix sigma;
  try {
    sigma = stationary_covariance(p);
  } catch (const NoStationarySolution& e) {
    std::cout << "no stationary solution: drift matrix is not Hurwitz\n";
    std::cout << "drift spectrum real parts:";
    for (double re : e.spectrum_real_parts) std::cout << ' ' << fmt(re);
    std::cout << '\n';
    return kExitNoStationary;
  }
  print_common_header(std::cout, cfg);
  std::cout << "stationary covariance (quadrature order x_L, p_L, x_G, p_G):\n";
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) std::cout << (j ? " " : "  ") << fmt(sigma(i, j));
    std::cout << '\n';
  }
  const CorrelationReport r = correlation_report(sigma, 0.0);
  std::cout << "I      = " << fmt(r.mutual_information) << '\n';
  std::cout << "D_GL   = " << fmt(r.discord_gl) << '\n';
  std::cout << "D_LG   = " << fmt(r.discord_lg) << '\n';
  std::cout << "C_GL   = " << fmt(r.classical_gl) << '\n';
  std::cout << "C_LG   = " << fmt(r.classical_lg) << '\n';
  std::cout << "ppt_nu = " << fmt(r.ppt_nu_min) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled gain-loss oscillator pair: Gaussian correlation dynamics"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_system_flags = [&cfg](CLI::App* sub) {
    sub->add_option("--g", cfg.g, "coupling rate (sets the time unit 1/g)")->check(CLI::PositiveNumber);
    sub->add_option("--gamma-gain", cfg.gamma_gain, "channel rate on mode G, units of g")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--gamma-loss", cfg.gamma_loss, "channel rate on mode L, units of g")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--kind-g", cfg.kind_g, "channel kind on mode G")
        ->check(CLI::IsMember({"gain", "loss"}));
    sub->add_option("--kind-l", cfg.kind_l, "channel kind on mode L")
        ->check(CLI::IsMember({"gain", "loss"}));
    sub->add_option("--output,-o", cfg.output, "output path ('-' = stdout)");
  };

  CLI::App* evolve = app.add_subcommand("evolve", "time series of correlations and mean field (CSV)");
  add_system_flags(evolve);
  evolve->add_option("--t-max", cfg.t_max, "horizon, units of 1/g")->check(CLI::PositiveNumber);
  evolve->add_option("--stride", cfg.stride, "sample stride, units of 1/g")->check(CLI::PositiveNumber);
  evolve->add_option("--alpha-l-re", cfg.alpha_l_re, "initial <a_L>, real part");
  evolve->add_option("--alpha-l-im", cfg.alpha_l_im, "initial <a_L>, imaginary part");
  evolve->add_option("--alpha-g-re", cfg.alpha_g_re, "initial <a_G>, real part");
  evolve->add_option("--alpha-g-im", cfg.alpha_g_im, "initial <a_G>, imaginary part");

  CLI::App* scan = app.add_subcommand("scan", "asymptotic discord over the (gamma_G, gamma_L) plane");
  add_system_flags(scan);
  scan->add_option("--resolution", cfg.resolution, "grid points per axis")->check(CLI::Range(2, 2000));
  scan->add_option("--gamma-max", cfg.gamma_max, "axis range, units of g")->check(CLI::PositiveNumber);
  scan->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  scan->add_flag("--pt-line", cfg.pt_line, "profile along gamma_L = gamma_G instead of the plane");
  scan->add_option("--threads", cfg.threads, "worker threads (0 = auto, capped by PTDISCORD_THREADS)");
  scan->add_option("--floor", cfg.floor, "discord floor for Decayed")->check(CLI::PositiveNumber);
  scan->add_option("--drift-tol", cfg.drift_tol, "windowed drift for Saturated")->check(CLI::PositiveNumber);
  scan->add_option("--window", cfg.window, "trailing window, units of 1/g")->check(CLI::PositiveNumber);
  scan->add_option("--t-max", cfg.scan_t_max, "horizon cap, units of 1/g")->check(CLI::PositiveNumber);
  scan->add_option("--stride", cfg.stride, "sample stride, units of 1/g")->check(CLI::PositiveNumber);

  CLI::App* steady = app.add_subcommand("steady", "stationary covariance and its correlation report");
  add_system_flags(steady);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (evolve->parsed()) return cmd_evolve(cfg);
    if (scan->parsed()) return cmd_scan(cfg);
    if (steady->parsed()) return cmd_steady(cfg);
  } catch (const std::exception& e) {
    std::cerr << "ptdiscord: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
