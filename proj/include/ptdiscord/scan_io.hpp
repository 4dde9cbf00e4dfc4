#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ptdiscord/sweep.hpp"

// Serialization of scan tables. The JSON layout is versioned through
// schema_version and reloads losslessly (doubles round-trip exactly).

namespace ptdiscord {

inline constexpr int schema_version = 1;
inline constexpr const char* artifact_version = "0.1.0";

nlohmann::json scan_to_json(const PhaseScanTable& table);
PhaseScanTable scan_from_json(const nlohmann::json& j);

void write_scan_json(const PhaseScanTable& table, std::ostream& out);
void write_scan_csv(const PhaseScanTable& table, std::ostream& out);

const char* to_string(Asymptotics c);
const char* to_string(PTClass c);
Asymptotics asymptotics_from_string(const std::string& s);
PTClass pt_class_from_string(const std::string& s);

}  // namespace ptdiscord
