#pragma once

#include <string>

#include <json.hpp>

#include "assoc/bounds.hpp"
#include "assoc/simulation.hpp"
#include "assoc/statistics.hpp"
#include "assoc/table.hpp"

namespace assoc {

/// {"counts": [[...]], "n": N}
nlohmann::json to_json(const ContingencyTable& t);
ContingencyTable table_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StatResult& r);
nlohmann::json to_json(const MaxCertificate& c);
nlohmann::json to_json(const PhiScan& s);
nlohmann::json to_json(const StatSummary& s);
nlohmann::json to_json(const Histogram& h);
nlohmann::json to_json(const SimulationReport& r, bool include_samples = false);

/// Shortest decimal text that parses back to the same double.
std::string format_exact(double x);

/// Fixed four-decimal text, as used by every text-mode report.
std::string format_fixed4(double x);

/// "draw,v,modified_v" header plus one row per draw, full precision.
std::string samples_csv(const SimulationReport& r);

/// "bin_start,bin_end,count" header plus one row per bin.
std::string histogram_csv(const Histogram& h);

}  // namespace assoc
