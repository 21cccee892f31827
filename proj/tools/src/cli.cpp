#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "json_io.hpp"
#include "mvtlab/calculus.hpp"
#include "mvtlab/classify.hpp"
#include "mvtlab/expr.hpp"
#include "mvtlab/harness.hpp"
#include "mvtlab/mvt.hpp"

namespace mvtlab::cli {

namespace {

using io::json;

/// Bad invocation or configuration; maps to kExitUsage.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct JobConfig {
  std::string command;
  std::map<std::string, std::string> functions;
  std::string equation = "cauchy";
  double alpha = 0.5;
  Interval domain = default_domain();
  int n = 64;
  double tau = kDefaultTau;
  double construct_tol = 1e-8;
  double A = 0.0;
  double K = 1.0;
  double x0 = 0.0;
  int points = 100;
  std::string json_out;
  std::string csv_out;
  std::optional<Verdict> expect;
  SuiteConfig suite;
  bool all_draws = false;
};

json config_json(const JobConfig& c) {
  json j = {{"command", c.command},
            {"functions", c.functions},
            {"alpha", c.alpha},
            {"domain", json::array({c.domain.lo, c.domain.hi})},
            {"n", c.n},
            {"tolerances", {{"tau", c.tau}, {"construct", c.construct_tol}}}};
  if (c.command == "residual") j["equation"] = c.equation;
  if (c.command == "construct" || c.command == "verify-example") {
    j["construct"] = {{"A", c.A}, {"K", c.K}, {"x0", c.x0}, {"points", c.points}};
  }
  if (c.expect) j["expect"] = std::string(to_string(*c.expect));
  if (c.command == "suite") {
    j = {{"command", c.command}, {"suite", io::to_json(c.suite)}, {"all_draws", c.all_draws}};
  }
  json outputs = json::object();
  if (!c.json_out.empty()) outputs["json"] = c.json_out;
  if (!c.csv_out.empty()) outputs["csv"] = c.csv_out;
  j["outputs"] = outputs;
  return j;
}

template <class T>
T take(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config key '") + key + "' has the wrong type");
  }
}

void check_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw UsageError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw UsageError("unknown key '" + key + "' in " + where);
}

void apply_config_file(const std::string& path, JobConfig& c) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  check_keys(j,
             {"command", "functions", "equation", "alpha", "domain", "n", "tolerances", "construct",
              "outputs", "expect", "suite", "all_draws"},
             "config");
  if (j.contains("command") && take<std::string>(j["command"], "command") != c.command)
    throw UsageError("config file is for command '" + j["command"].get<std::string>() + "'");
  if (j.contains("functions")) {
    check_keys(j["functions"], {"F", "G", "g", "ref"}, "functions");
    for (const auto& [label, src] : j["functions"].items()) c.functions[label] = take<std::string>(src, "functions");
  }
  if (j.contains("equation")) c.equation = take<std::string>(j["equation"], "equation");
  if (j.contains("alpha")) c.alpha = take<double>(j["alpha"], "alpha");
  if (j.contains("domain")) c.domain = io::interval_from_json(j["domain"]);
  if (j.contains("n")) c.n = take<int>(j["n"], "n");
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    check_keys(t, {"tau", "construct"}, "tolerances");
    if (t.contains("tau")) c.tau = take<double>(t["tau"], "tau");
    if (t.contains("construct")) c.construct_tol = take<double>(t["construct"], "construct");
  }
  if (j.contains("construct")) {
    const json& k = j["construct"];
    check_keys(k, {"A", "K", "x0", "points"}, "construct");
    if (k.contains("A")) c.A = take<double>(k["A"], "A");
    if (k.contains("K")) c.K = take<double>(k["K"], "K");
    if (k.contains("x0")) c.x0 = take<double>(k["x0"], "x0");
    if (k.contains("points")) c.points = take<int>(k["points"], "points");
  }
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    check_keys(o, {"json", "csv"}, "outputs");
    if (o.contains("json")) c.json_out = take<std::string>(o["json"], "json");
    if (o.contains("csv")) c.csv_out = take<std::string>(o["csv"], "csv");
  }
  if (j.contains("expect")) {
    const auto v = verdict_from_string(take<std::string>(j["expect"], "expect"));
    if (!v) throw UsageError("expect must be one of a, b, c, d, unclassified");
    c.expect = v;
  }
  if (j.contains("suite")) c.suite = io::suite_config_from_json(j["suite"]);
  if (j.contains("all_draws")) c.all_draws = take<bool>(j["all_draws"], "all_draws");
}

SmoothFn function(const JobConfig& c, const std::string& label) {
  const auto it = c.functions.find(label);
  if (it == c.functions.end()) throw UsageError("function " + label + " is not defined (use --" + label + ")");
  return SmoothFn(parse(it->second), it->second);
}

void validate_common(const JobConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
  if (c.n < 2) throw UsageError("n must be at least 2");
  if (!(c.tau > 0.0)) throw UsageError("tau must be positive");
}

void emit(const JobConfig& c, const json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (c.json_out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.json_out);
  if (!file) throw UsageError("cannot write " + c.json_out);
  file << text;
}

json header(const JobConfig& c) {
  return {{"schema", std::string(io::kSchema)}, {"command", c.command}, {"config", config_json(c)}};
}

// -- commands ----------------------------------------------------------------

int cmd_residual(const JobConfig& c, std::ostream& out) {
  validate_common(c);
  const MeanSpec m(c.alpha);
  ResidualReport report;
  if (c.equation == "lagrange") {
    report = sweep_lagrange(function(c, "F"), m, c.domain, c.n);
  } else if (c.equation == "cauchy") {
    report = sweep_cauchy(function(c, "F"), function(c, "G"), m, c.domain, c.n);
  } else {
    throw UsageError("equation must be lagrange or cauchy");
  }

  if (!c.csv_out.empty()) {
    std::ofstream csv(c.csv_out, std::ios::binary);
    if (!csv) throw UsageError("cannot write " + c.csv_out);
    io::write_grid_csv(csv, report);
  }
  json doc = header(c);
  doc["result"] = io::to_json(report, c.tau);
  const bool pass = doc["result"]["pass"].get<bool>();
  emit(c, doc, out);
  return pass ? kExitPass : kExitFail;
}

int cmd_classify(const JobConfig& c, std::ostream& out) {
  validate_common(c);
  ClassifyOptions opt;
  opt.tau = c.tau;
  opt.sweep_n = c.n;
  const Classification result =
      classify_pair(function(c, "F"), function(c, "G"), MeanSpec(c.alpha), c.domain, opt);
  json doc = header(c);
  doc["verdict"] = std::string(to_string(result.verdict));
  if (result.fit && result.verdict != Verdict::Unclassified) doc["mu"] = result.fit->mu;
  doc["result"] = io::to_json(result);
  emit(c, doc, out);
  if (c.expect) return result.verdict == *c.expect ? kExitPass : kExitFail;
  return result.verdict == Verdict::Unclassified ? kExitFail : kExitPass;
}

int cmd_construct(const JobConfig& c, std::ostream& out) {
  if (c.points < 2) throw UsageError("points must be at least 2");
  if (!c.domain.contains(c.x0)) throw UsageError("x0 must lie inside the domain");
  const SmoothFn g = function(c, "g");
  std::optional<SmoothFn> ref;
  if (c.functions.count("ref")) ref = function(c, "ref");

  const ConstructedDerivative f = construct_f(g, {c.A, c.K, c.x0}, c.domain);
  json rows = json::array();
  double max_dev = 0.0;
  std::ostringstream csv;
  csv << (ref ? "x,f,ref,deviation" : "x,f") << "\r\n";
  for (double x : sweep_grid_points(c.domain, c.points)) {
    const double fx = f(x);
    json row = {{"x", x}, {"f", fx}};
    csv << io::format_double(x) << ',' << io::format_double(fx);
    if (ref) {
      const double rx = (*ref)(x);
      const double dev = std::abs(fx - rx);
      max_dev = std::max(max_dev, dev);
      row["ref"] = rx;
      row["deviation"] = dev;
      csv << ',' << io::format_double(rx) << ',' << io::format_double(dev);
    }
    csv << "\r\n";
    rows.push_back(std::move(row));
  }
  if (!c.csv_out.empty()) {
    std::ofstream file(c.csv_out, std::ios::binary);
    if (!file) throw UsageError("cannot write " + c.csv_out);
    file << csv.str();
  }
  json doc = header(c);
  const bool pass = !ref || max_dev <= c.construct_tol;
  doc["result"] = {{"rows", std::move(rows)}, {"pass", pass}};
  if (ref) doc["result"]["max_deviation"] = max_dev;
  emit(c, doc, out);
  return pass ? kExitPass : kExitFail;
}

struct Stage {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

int cmd_verify_example(const JobConfig& c, std::ostream& out) {
  validate_common(c);
  std::vector<Stage> stages;
  const SmoothFn g = SmoothFn::parse("exp(x)");
  const SmoothFn sinh_ref = SmoothFn::parse("sinh(x)");
  const SmoothFn F = SmoothFn::parse("cosh(x)");
  const SmoothFn G = g;

  // f from g with A = 0, K = 1, x0 = 0 reproduces sinh.
  {
    const ConstructedDerivative f = construct_f(g, {0.0, 1.0, 0.0}, c.domain);
    double dev = 0.0;
    for (double x : sweep_grid_points(c.domain, c.points)) dev = std::max(dev, std::abs(f(x) - sinh_ref(x)));
    stages.push_back({"construct_f", dev, c.construct_tol, dev <= c.construct_tol});
  }
  // Integral criterion at a handful of admissible (x, h).
  {
    const InverseSquareIntegral inv(g.d0(), c.domain, 0.0);
    double worst = 0.0;
    for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      for (double h : {0.3, 0.7, 1.5}) {
        if (!c.domain.contains(x - h) || !c.domain.contains(x + h)) continue;
        const ResidualValue v = integral_condition_terms(inv, x, h);
        worst = std::max(worst, std::abs(v.residual) / v.scale);
      }
    }
    stages.push_back({"integral_condition", worst, c.tau, worst <= c.tau});
  }
  // Midpoint Cauchy sweep.
  {
    const ResidualReport r = sweep_cauchy(F, G, MeanSpec::midpoint(), c.domain, c.n);
    const double rel = r.max_abs / r.scale;
    stages.push_back({"symmetric_sweep", rel, 1e-9, r.domain_errors == 0 && rel <= 1e-9});
  }
  // Classification.
  {
    ClassifyOptions opt;
    opt.tau = c.tau;
    const Classification cl = classify_pair(F, G, MeanSpec::midpoint(), c.domain, opt);
    const double mu_err = cl.fit ? std::abs(cl.fit->mu - 1.0) : INFINITY;
    stages.push_back({"classify_c_mu_1", mu_err, 1e-6, cl.verdict == Verdict::C && mu_err <= 1e-6});
  }
  // Wronskian constant 1.
  {
    double lo = INFINITY;
    double hi = -INFINITY;
    double off = 0.0;
    for (double x : sweep_grid_points(c.domain, c.points)) {
      const double w = wronskian(F, G, x);
      lo = std::min(lo, w);
      hi = std::max(hi, w);
      off = std::max(off, std::abs(w - 1.0));
    }
    stages.push_back({"wronskian_constant", hi - lo, 1e-9, hi - lo <= 1e-9 && off <= 1e-9});
  }

  json doc = header(c);
  json arr = json::array();
  bool pass = true;
  for (const Stage& s : stages) {
    arr.push_back({{"name", s.name}, {"value", s.value}, {"tolerance", s.tolerance}, {"pass", s.pass}});
    pass = pass && s.pass;
  }
  doc["result"] = {{"stages", arr}, {"pass", pass}};
  emit(c, doc, out);
  return pass ? kExitPass : kExitFail;
}

int cmd_suite(const JobConfig& c, std::ostream& out) {
  const SuiteReport report = run_suite(c.suite);
  json doc = header(c);
  doc["result"] = io::to_json(report, c.all_draws);
  emit(c, doc, out);
  return report.passed() ? kExitPass : kExitFail;
}

// -- argument parsing --------------------------------------------------------

struct Flags {
  std::string config_path;
  std::string F, G, g, ref;
  std::string equation;
  double alpha = 0.5;
  std::vector<double> domain;
  int n = 64;
  double tau = kDefaultTau;
  double tol = 1e-8;
  double A = 0.0, K = 1.0, x0 = 0.0;
  int points = 100;
  std::string out, csv, expect;
  int count = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  std::vector<std::string> families;
  bool all_draws = false;
};

bool given(const CLI::App* app, const char* name) {
  const CLI::Option* opt = app->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

JobConfig resolve(const CLI::App* sub, const Flags& f) {
  JobConfig c;
  c.command = sub->get_name();
  if (c.command == "verify-example") {
    c.domain = Interval(-3.0, 3.0);
    c.functions = {{"F", "cosh(x)"}, {"G", "exp(x)"}, {"g", "exp(x)"}, {"ref", "sinh(x)"}};
    c.A = 0.0;
    c.K = 1.0;
    c.x0 = 0.0;
  }
  if (c.command == "construct") c.domain = default_domain();
  if (!f.config_path.empty()) apply_config_file(f.config_path, c);

  if (given(sub, "--F")) c.functions["F"] = f.F;
  if (given(sub, "--G")) c.functions["G"] = f.G;
  if (given(sub, "--g")) c.functions["g"] = f.g;
  if (given(sub, "--ref")) c.functions["ref"] = f.ref;
  if (given(sub, "--equation")) c.equation = f.equation;
  if (given(sub, "--alpha")) c.alpha = f.alpha;
  if (given(sub, "--domain")) {
    try {
      c.domain = Interval(f.domain.at(0), f.domain.at(1));
    } catch (const std::exception&) {
      throw UsageError("--domain needs finite lo < hi");
    }
  }
  if (given(sub, "--n")) c.n = f.n;
  if (given(sub, "--tau")) c.tau = f.tau;
  if (given(sub, "--tol")) c.construct_tol = f.tol;
  if (given(sub, "--A")) c.A = f.A;
  if (given(sub, "--K")) c.K = f.K;
  if (given(sub, "--x0")) c.x0 = f.x0;
  if (given(sub, "--points")) c.points = f.points;
  if (given(sub, "--out")) c.json_out = f.out;
  if (given(sub, "--csv")) c.csv_out = f.csv;
  if (given(sub, "--expect")) {
    const auto v = verdict_from_string(f.expect);
    if (!v) throw UsageError("--expect must be one of a, b, c, d, unclassified");
    c.expect = v;
  }

  if (c.command == "suite") {
    SuiteConfig& s = c.suite;
    if (given(sub, "--count")) s.count = f.count;
    if (given(sub, "--seed")) s.seed = f.seed;
    if (given(sub, "--alpha")) s.alpha = f.alpha;
    if (given(sub, "--domain")) s.domain = c.domain;
    if (given(sub, "--n")) s.sweep_n = f.n;
    if (given(sub, "--tau")) s.tau = f.tau;
    if (given(sub, "--families")) {
      s.families.clear();
      for (const std::string& name : f.families) {
        const auto v = verdict_from_string(name);
        if (!v || *v == Verdict::Unclassified) throw UsageError("--families takes a, b, c, d");
        s.families.push_back(*v);
      }
    }
    if (given(sub, "--threads")) {
      s.threads = f.threads;
    } else if (const char* env = std::getenv(kThreadsEnv); env != nullptr && *env != '\0') {
      try {
        s.threads = std::stoi(env);
      } catch (const std::exception&) {
        throw UsageError(std::string(kThreadsEnv) + " must be an integer");
      }
    }
    if (given(sub, "--all-draws")) c.all_draws = f.all_draws;
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return c;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON job configuration; flags override it");
  sub->add_option("--out", f.out, "Write the JSON report here instead of stdout");
}

void add_pair(CLI::App* sub, Flags& f) {
  sub->add_option("--F", f.F, "Expression for F");
  sub->add_option("--G", f.G, "Expression for G");
  sub->add_option("--alpha", f.alpha, "Weight alpha of the mean point alpha*a + (1-alpha)*b");
  sub->add_option("--domain", f.domain, "Region lo hi")->expected(2);
  sub->add_option("--n", f.n, "Grid points per axis");
  sub->add_option("--tau", f.tau, "Relative zero tolerance");
}

int dispatch(const JobConfig& c, std::ostream& out) {
  if (c.command == "residual") return cmd_residual(c, out);
  if (c.command == "classify") return cmd_classify(c, out);
  if (c.command == "construct") return cmd_construct(c, out);
  if (c.command == "verify-example") return cmd_verify_example(c, out);
  if (c.command == "suite") return cmd_suite(c, out);
  throw UsageError("unknown command " + c.command);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical lab for fixed-mean mean value functional equations", "mvtlab"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* residual = app.add_subcommand("residual", "Sweep a residual over the (a, b) grid");
  add_common(residual, f);
  add_pair(residual, f);
  residual->add_option("--equation", f.equation, "lagrange or cauchy (default cauchy)");
  residual->add_option("--csv", f.csv, "Write every grid sample as CSV");

  CLI::App* classify = app.add_subcommand("classify", "Classify a pair (F, G)");
  add_common(classify, f);
  add_pair(classify, f);
  classify->add_option("--expect", f.expect, "Exit 1 unless this verdict comes out");

  CLI::App* construct = app.add_subcommand("construct", "Tabulate f built from g");
  add_common(construct, f);
  construct->add_option("--g", f.g, "Expression for g");
  construct->add_option("--ref", f.ref, "Reference expression to compare against");
  construct->add_option("--A", f.A, "Constant A");
  construct->add_option("--K", f.K, "Constant K (default 1)");
  construct->add_option("--x0", f.x0, "Base point x0");
  construct->add_option("--domain", f.domain, "Interval lo hi on which g does not vanish")->expected(2);
  construct->add_option("--points", f.points, "Number of tabulated points");
  construct->add_option("--tol", f.tol, "Maximum allowed deviation from --ref");
  construct->add_option("--csv", f.csv, "Write the table as CSV");

  CLI::App* verify = app.add_subcommand("verify-example", "End-to-end check of the (cosh, exp) pair");
  add_common(verify, f);
  verify->add_option("--domain", f.domain, "Region lo hi (default -3 3)")->expected(2);
  verify->add_option("--n", f.n, "Sweep grid points per axis");
  verify->add_option("--points", f.points, "Points for the construction and Wronskian checks");

  CLI::App* suite = app.add_subcommand("suite", "Random generate/classify round trip");
  add_common(suite, f);
  suite->add_option("--count", f.count, "Draws per family");
  suite->add_option("--seed", f.seed, "Suite seed");
  suite->add_option("--families", f.families, "Subset of a b c d");
  suite->add_option("--alpha", f.alpha, "Mean weight");
  suite->add_option("--domain", f.domain, "Region lo hi")->expected(2);
  suite->add_option("--n", f.n, "Sweep grid points per axis");
  suite->add_option("--tau", f.tau, "Relative zero tolerance");
  suite->add_option("--threads", f.threads, "Worker threads (0 = hardware default)");
  suite->add_flag("--all-draws", f.all_draws, "List every draw, not only misclassified ones");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    const JobConfig c = resolve(app.get_subcommands().front(), f);
    return dispatch(c, out);
  } catch (const ParseError& e) {
    err << "mvtlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "mvtlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "mvtlab: " << e.what() << '\n';
    return kExitFail;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace mvtlab::cli
