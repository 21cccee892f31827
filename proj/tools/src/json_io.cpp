#include "json_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

namespace mvtlab::io {

namespace {

// Non-finite doubles have no JSON literal.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json triple(const std::array<double, 3>& c) { return json::array({number(c[0]), number(c[1]), number(c[2])}); }

std::string verdict_key(Verdict v) { return std::string(to_string(v)); }

template <class T>
T get_as(const json& j, std::string_view key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + std::string(key) + "' has the wrong type");
  }
}

std::pair<double, double> range_from_json(const json& j, std::string_view key) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("config key '" + std::string(key) + "' must be [lo, hi]");
  return {get_as<double>(j[0], key), get_as<double>(j[1], key)};
}

}  // namespace

json to_json(const Interval& interval) {
  return {{"lo", number(interval.lo)},
          {"hi", number(interval.hi)},
          {"open_lo", interval.open_lo},
          {"open_hi", interval.open_hi}};
}

json to_json(const ResidualReport& report, double tau) {
  return {{"max_abs", number(report.max_abs)},
          {"argmax", json::array({number(report.argmax_a), number(report.argmax_b)})},
          {"scale", number(report.scale)},
          {"relative", number(report.max_abs / report.scale)},
          {"samples", report.samples.size()},
          {"domain_errors", report.domain_errors},
          {"tau", tau},
          {"pass", report.domain_errors == 0 && report.passes(tau)}};
}

json to_json(const DependenceVerdict& dep) {
  return {{"dependent", dep.dependent},
          {"coefficients", triple(dep.coefficients)},
          {"condition_ratio", number(dep.condition_ratio)},
          {"residual_rms", number(dep.residual_rms)}};
}

json to_json(const FamilyFit& fit) {
  return {{"family", std::string(to_string(fit.family))},
          {"mu", number(fit.mu)},
          {"coeffs_F", triple(fit.coeffs_F)},
          {"coeffs_G", triple(fit.coeffs_G)},
          {"rms_residual", number(fit.rms_residual)},
          {"scale", number(fit.scale)}};
}

json to_json(const Classification& c) {
  json out = {{"verdict", verdict_key(c.verdict)},
              {"lambda", number(c.lambda_estimate)},
              {"lambda_spread", number(c.lambda_spread)},
              {"sweep", {{"max_abs", number(c.sweep_max_abs)},
                         {"scale", number(c.sweep_scale)},
                         {"pass", c.sweep_passed}}},
              {"diagnostics", c.diagnostics}};
  if (c.fit) {
    out["mu"] = number(c.fit->mu);
    out["fit"] = to_json(*c.fit);
  }
  if (c.dependence) out["dependence"] = to_json(*c.dependence);
  json tags = json::array();
  for (const TaggedInterval& t : c.per_interval_tags) {
    json row = {{"interval", to_json(t.interval)}, {"tag", std::string(to_string(t.tag))}};
    if (t.fit) row["fit"] = to_json(*t.fit);
    if (t.lambda) row["lambda"] = number(t.lambda->lambda);
    tags.push_back(std::move(row));
  }
  out["per_interval_tags"] = std::move(tags);
  return out;
}

json rng_description() {
  return {{"name", "splitmix64"},
          {"gamma", "0x9E3779B97F4A7C15"},
          {"mix1", "0xBF58476D1CE4E5B9"},
          {"mix2", "0x94D049BB133111EB"},
          {"shifts", json::array({30, 27, 31})},
          {"uniform", "(next >> 11) * 2^-53"},
          {"draw_seed", "splitmix64((seed ^ family * 0xD1B54A32D192ED03) + index * gamma).next"}};
}

json to_json(const SuiteConfig& config) {
  json families = json::array();
  for (Verdict v : config.families) families.push_back(verdict_key(v));
  return {{"families", families},
          {"count", config.count},
          {"seed", config.seed},
          {"domain", json::array({number(config.domain.lo), number(config.domain.hi)})},
          {"alpha", number(config.alpha)},
          {"sweep_n", config.sweep_n},
          {"tau", number(config.tau)},
          {"coeff_range", json::array({number(config.coeff_range.first), number(config.coeff_range.second)})},
          {"mu_range", json::array({number(config.mu_range.first), number(config.mu_range.second)})},
          {"degeneracy_floor", number(config.degeneracy_floor)},
          {"threads", config.threads},
          {"min_diagonal", number(config.min_diagonal)},
          {"mu_rel_tolerance", number(config.mu_rel_tolerance)},
          {"rng", rng_description()}};
}

json to_json(const DrawRecord& d) {
  json out = {{"family", verdict_key(d.family)},
              {"index", d.index},
              {"seed", d.seed},
              {"expected", verdict_key(d.expected)},
              {"verdict", verdict_key(d.verdict)},
              {"correct", d.correct},
              {"sweep_max_abs", number(d.sweep_max_abs)},
              {"sweep_scale", number(d.sweep_scale)},
              {"sweep_pass", d.sweep_passed},
              {"mu_true", number(d.mu_true)},
              {"mu_found", number(d.mu_found)}};
  if (!d.error.empty()) out["error"] = d.error;
  return out;
}

json to_json(const SuiteReport& report, bool include_all_draws) {
  static constexpr Verdict kAll[] = {Verdict::A, Verdict::B, Verdict::C, Verdict::D, Verdict::Unclassified};
  json confusion = json::object();
  for (Verdict truth : report.config.families) {
    json row = json::object();
    for (Verdict v : kAll)
      row[verdict_key(v)] = report.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(v)];
    confusion[verdict_key(truth)] = std::move(row);
  }
  json draws = json::array();
  for (const DrawRecord& d : report.draws)
    if (include_all_draws || !d.correct) draws.push_back(to_json(d));
  return {{"config", to_json(report.config)},
          {"confusion", std::move(confusion)},
          {"total", report.total},
          {"correct", report.correct},
          {"diagonal_fraction", number(report.diagonal_fraction)},
          {"max_mu_rel_error", number(report.max_mu_rel_error)},
          {"pass", report.passed()},
          {"draws", std::move(draws)}};
}

Interval interval_from_json(const json& j) {
  const auto [lo, hi] = range_from_json(j, "domain");
  try {
    return Interval(lo, hi);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
}

SuiteConfig suite_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("suite config must be a JSON object");
  static const std::set<std::string> known = {
      "families", "count", "seed", "domain", "alpha", "sweep_n", "tau", "coeff_range", "mu_range",
      "degeneracy_floor", "threads", "min_diagonal", "mu_rel_tolerance", "rng"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown suite config key '" + key + "'");

  SuiteConfig c;
  if (j.contains("families")) {
    c.families.clear();
    for (const json& f : j["families"]) {
      const auto v = verdict_from_string(get_as<std::string>(f, "families"));
      if (!v || *v == Verdict::Unclassified) throw ConfigError("suite families must be among a, b, c, d");
      c.families.push_back(*v);
    }
  }
  if (j.contains("count")) c.count = get_as<int>(j["count"], "count");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j["seed"], "seed");
  if (j.contains("domain")) c.domain = interval_from_json(j["domain"]);
  if (j.contains("alpha")) c.alpha = get_as<double>(j["alpha"], "alpha");
  if (j.contains("sweep_n")) c.sweep_n = get_as<int>(j["sweep_n"], "sweep_n");
  if (j.contains("tau")) c.tau = get_as<double>(j["tau"], "tau");
  if (j.contains("coeff_range")) c.coeff_range = range_from_json(j["coeff_range"], "coeff_range");
  if (j.contains("mu_range")) c.mu_range = range_from_json(j["mu_range"], "mu_range");
  if (j.contains("degeneracy_floor")) c.degeneracy_floor = get_as<double>(j["degeneracy_floor"], "degeneracy_floor");
  if (j.contains("threads")) c.threads = get_as<int>(j["threads"], "threads");
  if (j.contains("min_diagonal")) c.min_diagonal = get_as<double>(j["min_diagonal"], "min_diagonal");
  if (j.contains("mu_rel_tolerance")) c.mu_rel_tolerance = get_as<double>(j["mu_rel_tolerance"], "mu_rel_tolerance");
  if (j.contains("rng") && j["rng"] != rng_description())
    throw ConfigError("config names a different random generator than splitmix64");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_grid_csv(std::ostream& out, const ResidualReport& report) {
  out << "a,b,residual\r\n";
  for (const ResidualSample& s : report.samples)
    out << csv_field(format_double(s.a)) << ',' << csv_field(format_double(s.b)) << ','
        << csv_field(format_double(s.residual)) << "\r\n";
}

}  // namespace mvtlab::io
