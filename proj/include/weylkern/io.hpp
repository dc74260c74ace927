#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "weylkern/killingmax.hpp"
#include "weylkern/montecarlo.hpp"

namespace weylkern {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string library_version();

// Shortest round-trip is not used: always 17 significant digits, '.' separator, no locale.
std::string format_double(double x);
double parse_double(std::string_view text);

// JSON text with every floating-point number printed by format_double.
std::string dump_json(const nlohmann::json& j);

// Comma-separated components, each a decimal or "p/q". Every accepted literal is an exact rational.
struct ParsedPoint {
  Eigen::VectorXd value;
  VectorQ exact;
};
ParsedPoint parse_point(std::string_view text);
std::vector<double> parse_list(std::string_view text);

// "# weylkern <version> config=<json>"
std::string config_comment(const nlohmann::json& config);

// Columns bin_lo,bin_hi,count,expected,excluded,label; vector bounds joined by ';'.
std::string histogram_csv(const Histogram& h, const nlohmann::json& config);
Histogram parse_histogram_csv(std::string_view text);

nlohmann::json to_json(const Histogram& h);
Histogram histogram_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const FacePairReport& r);
nlohmann::json summary_json(const SystemReport& r);

// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace weylkern
