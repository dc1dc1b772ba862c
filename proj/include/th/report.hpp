#pragma once

#include <json.hpp>

#include <string>

#include "th/simulator.hpp"

namespace th {

using Json = nlohmann::ordered_json;

inline constexpr int kReportVersion = 1;

Json to_json(const CriticalPoint& cp);
Json to_json(const EigenQuadruple& e);
Json to_json(const Coefficients& c);
Json to_json(const NormalForm& nf);
Json to_json(const AmplitudeSystem& sys);
Json to_json(const HalfLine& h);
Json to_json(const RegionReport& r);
Json to_json(const AttractorClass& a);
Json to_json(const Scoreboard& sb);

CriticalPoint critical_point_from_json(const Json& j);
Coefficients coefficients_from_json(const Json& j);

// Skeleton with format/version, an empty provenance block and a metadata block holding the timestamp.
Json new_report(const std::string& subcommand);
// Timestamp-free view used for determinism comparisons.
Json without_metadata(const Json& report);

std::string emit(const Json& j);
Json parse_report(const std::string& text);

} // namespace th
