#include "ptdiscord/scan_io.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ptdiscord {

const char* to_string(Asymptotics c) {
  switch (c) {
    case Asymptotics::Decayed: return "Decayed";
    case Asymptotics::Saturated: return "Saturated";
    case Asymptotics::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

const char* to_string(PTClass c) {
  switch (c) {
    case PTClass::ExactPhase: return "ExactPhase";
    case PTClass::ExceptionalPoint: return "ExceptionalPoint";
    case PTClass::BrokenPhase: return "BrokenPhase";
    case PTClass::NotPTSymmetric: return "NotPTSymmetric";
  }
  return "NotPTSymmetric";
}

Asymptotics asymptotics_from_string(const std::string& s) {
  if (s == "Decayed") return Asymptotics::Decayed;
  if (s == "Saturated") return Asymptotics::Saturated;
  if (s == "Undetermined") return Asymptotics::Undetermined;
  throw std::invalid_argument("unknown asymptotics classification: " + s);
}

PTClass pt_class_from_string(const std::string& s) {
  if (s == "ExactPhase") return PTClass::ExactPhase;
  if (s == "ExceptionalPoint") return PTClass::ExceptionalPoint;
  if (s == "BrokenPhase") return PTClass::BrokenPhase;
  if (s == "NotPTSymmetric") return PTClass::NotPTSymmetric;
  throw std::invalid_argument("unknown PT class: " + s);
}

nlohmann::json scan_to_json(const PhaseScanTable& table) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["metadata"] = {
      {"artifact_version", artifact_version},
      {"g", table.g},
      {"grid", {{"resolution", table.grid.resolution}, {"gamma_max", table.grid.gamma_max}}},
      {"options",
       {{"floor", table.options.floor},
        {"drift_tol", table.options.drift_tol},
        {"window", table.options.window},
        {"t_max", table.options.t_max},
        {"stride", table.options.stride},
        {"overflow_guard", table.options.overflow_guard}}},
      {"units", "rates in g, times in 1/g, entropies in nats"},
  };
  nlohmann::json cells = nlohmann::json::array();
  for (const PhaseScanCell& c : table.cells) {
    cells.push_back({
        {"gamma_gain", c.gamma_gain},
        {"gamma_loss", c.gamma_loss},
        {"classification", to_string(c.asymptotics.classification)},
        {"discord_GL_inf", c.asymptotics.discord_gl_inf},
        {"discord_LG_inf", c.asymptotics.discord_lg_inf},
        {"horizon_used", c.asymptotics.horizon_used},
        {"mutual_info_slope", c.asymptotics.mutual_info_slope},
        {"stable", c.stability.fully_stable()},
        {"drift_spectrum_re", c.stability.drift_spectrum_re},
        {"pt_class", to_string(c.pt_class)},
    });
  }
  j["cells"] = std::move(cells);
  return j;
}

PhaseScanTable scan_from_json(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != schema_version)
    throw std::invalid_argument("scan_from_json: unsupported schema version");
  PhaseScanTable table;
  const auto& meta = j.at("metadata");
  table.g = meta.at("g").get<double>();
  table.grid.resolution = meta.at("grid").at("resolution").get<int>();
  table.grid.gamma_max = meta.at("grid").at("gamma_max").get<double>();
  const auto& opt = meta.at("options");
  table.options.floor = opt.at("floor").get<double>();
  table.options.drift_tol = opt.at("drift_tol").get<double>();
  table.options.window = opt.at("window").get<double>();
  table.options.t_max = opt.at("t_max").get<double>();
  table.options.stride = opt.at("stride").get<double>();
  table.options.overflow_guard = opt.at("overflow_guard").get<double>();

  for (const auto& cj : j.at("cells")) {
    PhaseScanCell c;
    c.gamma_gain = cj.at("gamma_gain").get<double>();
    c.gamma_loss = cj.at("gamma_loss").get<double>();
    c.asymptotics.classification = asymptotics_from_string(cj.at("classification").get<std::string>());
    c.asymptotics.discord_gl_inf = cj.at("discord_GL_inf").get<double>();
    c.asymptotics.discord_lg_inf = cj.at("discord_LG_inf").get<double>();
    c.asymptotics.horizon_used = cj.at("horizon_used").get<double>();
    c.asymptotics.mutual_info_slope = cj.at("mutual_info_slope").get<double>();
    c.stability.stability =
        cj.at("stable").get<bool>() ? Stability::FullyStable : Stability::Unstable;
    const auto& re = cj.at("drift_spectrum_re");
    for (int i = 0; i < 4; ++i) c.stability.drift_spectrum_re[i] = re.at(i).get<double>();
    c.pt_class = pt_class_from_string(cj.at("pt_class").get<std::string>());
    table.cells.push_back(c);
  }
  if (table.cells.size() !=
      static_cast<size_t>(table.grid.resolution) * table.grid.resolution)
    throw std::invalid_argument("scan_from_json: cell count does not match grid");
  return table;
}

void write_scan_json(const PhaseScanTable& table, std::ostream& out) {
  out << scan_to_json(table).dump(2) << '\n';
}

void write_scan_csv(const PhaseScanTable& table, std::ostream& out) {
  out << "# ptdiscord scan: g=" << table.g << ", resolution=" << table.grid.resolution
      << ", gamma_max=" << table.grid.gamma_max << "\n";
  out << "# rates in g, times in 1/g, entropies in nats\n";
  out << "gamma_gain,gamma_loss,classification,discord_GL_inf,discord_LG_inf,stable,pt_class\n";
  char buf[512];
  for (const PhaseScanCell& c : table.cells) {
    std::snprintf(buf, sizeof(buf), "%.12e,%.12e,%s,%.12e,%.12e,%d,%s\n", c.gamma_gain,
                  c.gamma_loss, to_string(c.asymptotics.classification),
                  c.asymptotics.discord_gl_inf, c.asymptotics.discord_lg_inf,
                  c.stability.fully_stable() ? 1 : 0, to_string(c.pt_class));
    out << buf;
  }
}

}  // namespace ptdiscord
