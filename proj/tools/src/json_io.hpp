#pragma once

// JSON and CSV encodings of the library's reports. Every top-level report
// carries "schema": "mvtlab/1".

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mvtlab/calculus.hpp"
#include "mvtlab/classify.hpp"
#include "mvtlab/harness.hpp"
#include "mvtlab/mvt.hpp"

namespace mvtlab::io {

using nlohmann::json;

inline constexpr std::string_view kSchema = "mvtlab/1";

/// Malformed configuration content (wrong type, unknown key, bad value).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

json to_json(const Interval& interval);
json to_json(const ResidualReport& report, double tau);
json to_json(const DependenceVerdict& dep);
json to_json(const FamilyFit& fit);
json to_json(const Classification& c);
json to_json(const SuiteConfig& config);
json to_json(const DrawRecord& draw);
/// With include_all_draws false only the misclassified draws are listed.
json to_json(const SuiteReport& report, bool include_all_draws = false);

/// The generator constants, so a report documents how its draws were made.
json rng_description();

/// [lo, hi] array.
Interval interval_from_json(const json& j);
/// Keys mirror to_json(SuiteConfig); absent keys keep their defaults.
SuiteConfig suite_config_from_json(const json& j);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);
/// RFC 4180: quoted when the field holds a comma, quote, CR or LF.
std::string csv_field(std::string_view field);
/// Header a,b,residual then one row per sample.
void write_grid_csv(std::ostream& out, const ResidualReport& report);

}  // namespace mvtlab::io
