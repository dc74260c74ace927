#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <optional>

#include <CLI11.hpp>

#include "weylkern/asymptotics.hpp"
#include "weylkern/dyson.hpp"
#include "weylkern/io.hpp"
#include "weylkern/killingmax.hpp"
#include "weylkern/montecarlo.hpp"
#include "weylkern/quadrature.hpp"
#include "weylkern/verify.hpp"

namespace weylkern::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerificationFailure {};

template <typename T>
std::optional<T> env_number(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  T x{};
  const std::string_view s(v);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw DomainError(std::string(name) + " is not a non-negative integer: '" + std::string(s) + "'");
  return x;
}

struct Sink {
  std::ostream& out;
  std::string path;
  void emit(const std::string& text) const {
    if (path.empty()) out << text;
    else write_file_atomic(path, text);
  }
};

nlohmann::json with_version(nlohmann::json j, const nlohmann::json& config) {
  j["version"] = library_version();
  j["config"] = config;
  return j;
}

nlohmann::json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

ParsedPoint require_point(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  return parse_point(text);
}

// Vanishing roots decided exactly from the rational literal, coordinates from the rounded value.
ChamberPoint<double> chamber_point(const RootSystem& rs, const ParsedPoint& p) {
  if (p.exact.size() != rs.ambient_dim()) throw DomainError("point has the wrong dimension");
  const auto exact = make_chamber_point(rs, p.exact);
  return {p.value, exact.vanishing};
}

std::string csv_point_header(const char* prefix, Eigen::Index n) {
  std::string out;
  for (Eigen::Index i = 0; i < n; ++i) out += "," + std::string(prefix) + std::to_string(i + 1);
  return out;
}

std::string csv_point(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += "," + format_double(v[i]);
  return out;
}

std::string kernel_csv_header(Eigen::Index n) {
  return "system,kind,t" + csv_point_header("x", n) + csv_point_header("y", n) + ",value,cancellation,mode\n";
}

std::string kernel_csv_row(const std::string& system, const std::string& kind, double t, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y, const KernelValue& v) {
  return system + "," + kind + "," + format_double(t) + csv_point(x) + csv_point(y) + "," + format_double(v.value) +
         "," + format_double(v.cancellation) + "," + to_string(v.mode) + "\n";
}

// eval ----------------------------------------------------------------------------------------------

struct EvalOptionsCli {
  std::string system, kernel = "heat", x, y, lambda, format = "json", output;
  double t = 0;
  unsigned bits = 0;
};

void add_eval(CLI::App& app, EvalOptionsCli& o) {
  auto* s = app.add_subcommand("eval", "Evaluate a W-invariant kernel or the spherical function");
  s->add_option("--system", o.system, "Root system, e.g. B2")->required();
  s->add_option("--kernel", o.kernel)->check(CLI::IsMember({"heat", "newton", "poisson", "green", "spherical"}));
  s->add_option("--t", o.t, "Time (heat kernel)");
  s->add_option("--x", o.x, "First argument, comma-separated");
  s->add_option("--y", o.y, "Second argument, comma-separated");
  s->add_option("--lambda", o.lambda, "Spectral parameter (spherical function)");
  s->add_option("--precision-bits", o.bits, "Evaluate the direct sum at this precision");
  s->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  s->add_option("--output", o.output, "Write to this file instead of standard output");
}

int run_eval(const EvalOptionsCli& o, std::ostream& out) {
  const RootSystem rs = build_root_system(o.system);
  const bool spherical = o.kernel == "spherical";
  const auto x = require_point(spherical ? o.lambda : o.x, spherical ? "--lambda" : "--x");
  const auto y = require_point(o.y, "--y");
  EvalOptions eo;
  eo.precision_bits = o.bits;
  const KernelValue v = spherical ? spherical_psi(rs, x.value, y.value, eo)
                                  : kernel_w(rs, parse_kernel_kind(o.kernel, o.t), x.value, y.value, eo);
  const nlohmann::json config = {{"verb", "eval"}, {"system", rs.name()}, {"kernel", o.kernel}, {"t", o.t},
                                 {spherical ? "lambda" : "x", vec_json(x.value)}, {"y", vec_json(y.value)},
                                 {"precision_bits", o.bits}};
  const Sink sink{out, o.output};
  if (o.format == "csv") {
    sink.emit(config_comment(config) + "\n" + kernel_csv_header(x.value.size()) +
              kernel_csv_row(rs.name(), o.kernel, o.t, x.value, y.value, v));
  } else {
    nlohmann::json j = {{"value", v.value}, {"cancellation", v.cancellation}, {"max_term", v.max_term},
                        {"mode", to_string(v.mode)}};
    sink.emit(dump_json(with_version(j, config)) + "\n");
  }
  return 0;
}

// dyson ---------------------------------------------------------------------------------------------

struct DysonOptionsCli {
  std::string system, kind = "transition", x, y, format = "json", output;
  double t = 0;
};

void add_dyson(CLI::App& app, DysonOptionsCli& o) {
  auto* s = app.add_subcommand("dyson", "Evaluate a kernel of the conditioned process");
  s->add_option("--system", o.system)->required();
  s->add_option("--kind", o.kind)->check(CLI::IsMember({"transition", "killed", "poisson", "newton"}));
  s->add_option("--t", o.t);
  s->add_option("--x", o.x);
  s->add_option("--y", o.y);
  s->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  s->add_option("--output", o.output);
}

int run_dyson(const DysonOptionsCli& o, std::ostream& out) {
  const RootSystem rs = build_root_system(o.system);
  const auto x = require_point(o.x, "--x");
  const auto y = require_point(o.y, "--y");
  const double v = dyson_kernel(rs, parse_dyson_kind(o.kind, o.t), x.value, y.value);
  const nlohmann::json config = {{"verb", "dyson"}, {"system", rs.name()}, {"kind", o.kind}, {"t", o.t},
                                 {"x", vec_json(x.value)}, {"y", vec_json(y.value)}};
  const Sink sink{out, o.output};
  if (o.format == "csv") {
    sink.emit(config_comment(config) + "\nsystem,kind,t" + csv_point_header("x", x.value.size()) +
              csv_point_header("y", y.value.size()) + ",value\n" + rs.name() + "," + o.kind + "," +
              format_double(o.t) + csv_point(x.value) + csv_point(y.value) + "," + format_double(v) + "\n");
  } else {
    sink.emit(dump_json(with_version({{"value", v}}, config)) + "\n");
  }
  return 0;
}

// asym ----------------------------------------------------------------------------------------------

struct AsymOptionsCli {
  std::string system, theorem, y0, x_ref, lambda0, x, params, format = "csv", output;
  unsigned bits = 200;
};

void add_asym_options(CLI::App* s, AsymOptionsCli& o) {
  s->add_option("--system", o.system)->required();
  s->add_option("--theorem", o.theorem)
      ->required()
      ->check(CLI::IsMember({"poisson", "newton", "spherical", "heat-small-t", "dyson-poisson", "dyson-newton"}));
  s->add_option("--y0", o.y0, "Limit point (second argument for heat-small-t)");
  s->add_option("--x-ref", o.x_ref, "Path X = Y0 + s (X_ref - Y0) for the Poisson and Newton ratios");
  s->add_option("--lambda0", o.lambda0, "Spectral parameter (spherical)");
  s->add_option("--x", o.x, "First argument (heat-small-t)");
  s->add_option("--params", o.params, "Comma-separated ratio parameters");
  s->add_option("--bits", o.bits, "Working precision of the spherical ratios");
  s->add_option("--output", o.output);
}

struct AsymResult {
  std::string point;
  AsymptoticForm form;
  RatioTest test;
  std::vector<std::string> param_text;
  nlohmann::json config;
};

std::string semicolons(std::string s) {
  for (char& c : s)
    if (c == ',') c = ';';
  return s;
}

AsymResult compute_asym(const AsymOptionsCli& o) {
  const RootSystem rs = build_root_system(o.system);
  const std::string& th = o.theorem;
  std::string params = o.params;
  if (params.empty()) params = th == "spherical" ? "50,100,200" : th == "heat-small-t" ? "1e-2,1e-3,1e-4" : "1e-1,1e-2,1e-3";
  const std::vector<double> s = parse_list(params);
  AsymResult r;
  for (const auto& p : CLI::detail::split(params, ',')) r.param_text.push_back(p);
  r.config = {{"verb", "asym"}, {"system", rs.name()}, {"theorem", th}, {"params", s}};

  if (th == "spherical") {
    const auto l0 = chamber_point(rs, require_point(o.lambda0, "--lambda0"));
    const auto y0 = chamber_point(rs, require_point(o.y0, "--y0"));
    r.form = spherical_asym(rs, l0, y0);
    r.test = spherical_ratio_test(rs, l0, y0, s, o.bits);
    r.point = "lambda0=" + semicolons(o.lambda0) + " y0=" + semicolons(o.y0);
    r.config["lambda0"] = vec_json(l0.coords);
    r.config["y0"] = vec_json(y0.coords);
    r.config["bits"] = o.bits;
    return r;
  }
  if (th == "heat-small-t") {
    const auto x = chamber_point(rs, require_point(o.x, "--x"));
    const auto y = chamber_point(rs, require_point(o.y0, "--y0"));
    r.form = heat_small_t(rs, x, y);
    r.test = heat_small_t_ratio_test(rs, x, y, s);
    r.point = "x=" + semicolons(o.x) + " y=" + semicolons(o.y0);
    r.config["x"] = vec_json(x.coords);
    r.config["y0"] = vec_json(y.coords);
    return r;
  }
  const auto y0 = chamber_point(rs, require_point(o.y0, "--y0"));
  const Eigen::VectorXd rho = from_rational<double>(rs.rho()).normalized();
  const bool poisson = th == "poisson" || th == "dyson-poisson";
  Eigen::VectorXd x_ref = o.x_ref.empty() ? Eigen::VectorXd(poisson ? Eigen::VectorXd(0.5 * rho) : Eigen::VectorXd(y0.coords + rho))
                                          : parse_point(o.x_ref).value;
  const KernelType type = poisson ? KernelType::Poisson : KernelType::Newton;
  if (th == "poisson") {
    r.form = poisson_asym(rs, y0);
    r.test = poisson_ratio_test(rs, y0, x_ref, s);
  } else if (th == "newton") {
    r.form = newton_asym(rs, y0);
    r.test = newton_ratio_test(rs, y0, x_ref, s);
  } else {
    r.form = dyson_asym_ratio(rs, type, y0);
    r.test = dyson_ratio_test(rs, type, y0, x_ref, s);
  }
  r.point = "y0=" + semicolons(o.y0) + " x_ref=" + semicolons(o.x_ref.empty() ? "default" : o.x_ref);
  r.config["y0"] = vec_json(y0.coords);
  r.config["x_ref"] = vec_json(x_ref);
  return r;
}

int run_asym(const AsymOptionsCli& o, std::ostream& out) {
  const AsymResult r = compute_asym(o);
  const Sink sink{out, o.output};
  const std::string rate = format_double(r.form.rate) + (r.form.inverse_rate ? "/s" : "");
  if (o.format == "csv") {
    std::string text = config_comment(r.config) + "\n";
    text += "theorem,system,point,constant,power,rate";
    for (const auto& p : r.param_text) text += ",ratio@" + p;
    text += ",pass\n" + o.theorem + "," + o.system + "," + r.point + "," + format_double(r.form.constant) + "," +
            format_rational(r.form.power) + "," + rate;
    for (double x : r.test.ratios) text += "," + format_double(x);
    text += std::string(",") + (r.test.pass ? "true" : "false") + "\n";
    sink.emit(text);
  } else {
    nlohmann::json j = {{"theorem", o.theorem},
                        {"system", o.system},
                        {"point", r.point},
                        {"constant", r.form.constant},
                        {"power", format_rational(r.form.power)},
                        {"rate", r.form.rate},
                        {"inverse_rate", r.form.inverse_rate},
                        {"params", r.test.params},
                        {"ratios", r.test.ratios},
                        {"deviations", r.test.deviations},
                        {"monotone", r.test.monotone},
                        {"pass", r.test.pass}};
    sink.emit(dump_json(with_version(j, r.config)) + "\n");
  }
  return 0;
}

// simulate ------------------------------------------------------------------------------------------

struct SimOptionsCli {
  std::string system, process = "killed", x0, scheme = "euler-bridge", histogram, report, format = "json", output;
  double t = 0.25, dt = 1e-3, max_time = 50, kappa = 0.1, dt_min = 1e-18, exit_epsilon = 1e-5, level = 0.01;
  std::size_t paths = 100000;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  int radial_bins = 0, angular_bins = 0;
};

void add_sim_options(CLI::App* s, SimOptionsCli& o) {
  s->add_option("--system", o.system)->required();
  s->add_option("--process", o.process)->check(CLI::IsMember({"killed", "dyson", "exit"}));
  s->add_option("--x0", o.x0, "Starting point")->required();
  s->add_option("--t", o.t, "Final time (killed, dyson)");
  s->add_option("--paths", o.paths);
  s->add_option("--dt", o.dt);
  s->add_option("--scheme", o.scheme)->check(CLI::IsMember({"euler", "euler-bridge"}));
  s->add_option("--seed", o.seed, "Overrides WEYLKERN_SEED");
  s->add_option("--threads", o.threads, "Overrides WEYLKERN_THREADS; 0 uses every core");
  s->add_option("--max-time", o.max_time);
  s->add_option("--kappa", o.kappa);
  s->add_option("--dt-min", o.dt_min);
  s->add_option("--exit-epsilon", o.exit_epsilon);
  s->add_option("--radial-bins", o.radial_bins, "0 selects the default");
  s->add_option("--angular-bins", o.angular_bins, "0 selects the default");
  s->add_option("--level", o.level, "Significance level of the chi-square test");
}

struct SimResult {
  EmpiricalMeasure measure;
  Histogram histogram;
  ComparisonReport report;
  nlohmann::json config;
};

SimResult compute_simulation(const SimOptionsCli& o) {
  const RootSystem rs = build_root_system(o.system);
  const Eigen::VectorXd x0 = parse_point(o.x0).value;
  SimConfig cfg;
  cfg.seed = o.seed ? *o.seed : env_number<std::uint64_t>("WEYLKERN_SEED").value_or(cfg.seed);
  cfg.threads = o.threads ? *o.threads : env_number<unsigned>("WEYLKERN_THREADS").value_or(cfg.threads);
  cfg.paths = o.paths;
  cfg.dt = o.dt;
  cfg.scheme = parse_scheme(o.scheme);
  cfg.max_time = o.max_time;
  cfg.kappa = o.kappa;
  cfg.dt_min = o.dt_min;
  cfg.exit_epsilon = o.exit_epsilon;
  SimResult r;
  if (o.process == "killed") {
    r.measure = simulate_killed(rs, x0, o.t, cfg);
    r.histogram = killed_histogram(rs, x0, o.t, r.measure, o.radial_bins, o.angular_bins > 0 ? o.angular_bins : 5);
  } else if (o.process == "dyson") {
    r.measure = simulate_dyson(rs, x0, o.t, cfg);
    r.histogram = dyson_histogram(rs, x0, o.t, r.measure, o.radial_bins, o.angular_bins > 0 ? o.angular_bins : 5);
  } else {
    r.measure = exit_measure(rs, x0, cfg);
    r.histogram = exit_histogram(rs, x0, r.measure, o.angular_bins > 0 ? o.angular_bins : 10);
  }
  r.report = chi_square(r.histogram, o.level);
  r.config = to_json(cfg);
  r.config["threads"] = cfg.threads;
  r.config["verb"] = "simulate";
  r.config["system"] = rs.name();
  r.config["process"] = o.process;
  r.config["x0"] = vec_json(x0);
  if (o.process != "exit") r.config["t"] = o.t;
  r.config["radial_bins"] = o.radial_bins;
  r.config["angular_bins"] = o.angular_bins;
  r.config["level"] = o.level;
  return r;
}

nlohmann::json sim_report_json(const SimResult& r) {
  nlohmann::json j = to_json(r.report);
  j["paths"] = r.measure.paths;
  j["killed"] = r.measure.killed;
  j["aborted"] = r.measure.aborted;
  j["unfinished"] = r.measure.unfinished;
  j["survival_fraction"] = r.measure.survival_fraction();
  return with_version(j, r.config);
}

int run_simulate(const SimOptionsCli& o, std::ostream& out) {
  const SimResult r = compute_simulation(o);
  const std::string report = dump_json(sim_report_json(r)) + "\n";
  const std::string histogram = histogram_csv(r.histogram, r.config);
  if (!o.histogram.empty()) write_file_atomic(o.histogram, histogram);
  if (!o.report.empty()) write_file_atomic(o.report, report);
  Sink{out, o.output}.emit(o.format == "csv" ? histogram : report);
  if (!r.report.pass) throw VerificationFailure{};
  return 0;
}

// killingmax ----------------------------------------------------------------------------------------

struct KillingOptionsCli {
  std::string system, pair, budget = "none", output;
  bool all_faces = false;
  std::optional<unsigned> threads;
};

void add_killingmax(CLI::App& app, KillingOptionsCli& o) {
  auto* s = app.add_subcommand("killingmax", "Decide the Killing-max property over face pairs");
  s->add_option("--system", o.system)->required();
  auto* all = s->add_flag("--all-faces", o.all_faces, "Every pair of faces of the closed chamber");
  auto* pair = s->add_option("--pair", o.pair, "Face masks i,j (bit k: simple root k vanishes)");
  all->excludes(pair);
  s->add_option("--etype-budget", o.budget, "Admit E6 or E6 and E7")->check(CLI::IsMember({"none", "e6", "e7"}));
  s->add_option("--threads", o.threads, "Overrides WEYLKERN_THREADS");
  s->add_option("--output", o.output);
}

int run_killingmax(const KillingOptionsCli& o, std::ostream& out) {
  if (!o.all_faces && o.pair.empty()) throw UsageError("one of --all-faces or --pair is required");
  const RootSystem rs = build_root_system(o.system);
  KillingMaxOptions opt;
  opt.allow_e6 = o.budget != "none";
  opt.allow_e7 = o.budget == "e7";
  opt.threads = o.threads ? *o.threads : env_number<unsigned>("WEYLKERN_THREADS").value_or(1);
  nlohmann::json config = {{"verb", "killingmax"}, {"system", rs.name()}, {"etype_budget", o.budget},
                           {"threads", opt.threads}};
  SystemReport report;
  if (o.all_faces) {
    config["all_faces"] = true;
    report = verify_system(rs, opt);
  } else {
    const auto masks = parse_list(o.pair);
    if (masks.size() != 2) throw DomainError("--pair needs two face masks");
    const std::uint32_t limit = 1u << rs.rank();
    for (double m : masks)
      if (m < 0 || m >= limit || m != static_cast<std::uint32_t>(m)) throw DomainError("face mask out of range");
    config["pair"] = {static_cast<std::uint32_t>(masks[0]), static_cast<std::uint32_t>(masks[1])};
    if (rs.rank() >= 6 && !(rs.rank() == 6 ? opt.allow_e6 : rs.rank() == 7 ? opt.allow_e7 : false) &&
        rs.spec().family == Family::E)
      throw ResourceLimitError("E-type verification requires --etype-budget");
    report.system = rs.name();
    report.group_order = rs.weyl_order();
    report.pairs.push_back(verify_face_pair(rs, make_face(rs, static_cast<std::uint32_t>(masks[0])),
                                            make_face(rs, static_cast<std::uint32_t>(masks[1]))));
    report.all_hold = report.pairs.back().holds;
  }
  std::string text;
  for (const auto& p : report.pairs) text += dump_json(to_json(p)) + "\n";
  text += dump_json(with_version({{"summary", summary_json(report)}}, config)) + "\n";
  Sink{out, o.output}.emit(text);
  return 0;
}

// verify --------------------------------------------------------------------------------------------

struct VerifyOptionsCli {
  std::string system, suite = "identities", output;
  std::optional<std::uint64_t> seed;
};

void add_verify(CLI::App& app, VerifyOptionsCli& o) {
  auto* s = app.add_subcommand("verify", "Run a suite of invariants; exit 2 if any fails");
  s->add_option("--system", o.system)->required();
  s->add_option("--suite", o.suite)->check(CLI::IsMember(suite_names()));
  s->add_option("--seed", o.seed, "Overrides WEYLKERN_SEED");
  s->add_option("--output", o.output);
}

int run_verify(const VerifyOptionsCli& o, std::ostream& out) {
  const RootSystem rs = build_root_system(o.system);
  const std::uint64_t seed = o.seed ? *o.seed : env_number<std::uint64_t>("WEYLKERN_SEED").value_or(1);
  const SuiteReport r = run_suite(o.suite, rs, seed);
  const nlohmann::json config = {{"verb", "verify"}, {"system", rs.name()}, {"suite", o.suite}, {"seed", seed}};
  Sink{out, o.output}.emit(dump_json(with_version(to_json(r), config)) + "\n");
  if (!r.pass()) throw VerificationFailure{};
  return 0;
}

// export-roots and export ---------------------------------------------------------------------------

struct RootsOptionsCli {
  std::string system, output;
};

void add_export_roots(CLI::App& app, RootsOptionsCli& o) {
  auto* s = app.add_subcommand("export-roots", "Write a root system as JSON");
  s->add_option("--system", o.system)->required();
  s->add_option("--output", o.output);
}

int run_export_roots(const RootsOptionsCli& o, std::ostream& out) {
  const RootSystem rs = build_root_system(o.system);
  const nlohmann::json config = {{"verb", "export-roots"}, {"system", rs.name()}};
  Sink{out, o.output}.emit(dump_json(with_version(to_json(rs), config)) + "\n");
  return 0;
}

struct GridOptionsCli {
  std::string system, kernel = "poisson", y, output;
  double t = 0, extent = 1;
  int n = 20;
};

int run_export_grid(const GridOptionsCli& o) {
  const RootSystem rs = build_root_system(o.system);
  const auto y = require_point(o.y, "--y");
  const KernelKind kind = parse_kernel_kind(o.kernel, o.t);
  const nlohmann::json config = {{"verb", "export"}, {"kind", "kernel-grid"}, {"system", rs.name()},
                                 {"kernel", o.kernel}, {"t", o.t}, {"y", vec_json(y.value)},
                                 {"n", o.n}, {"extent", o.extent}};
  std::string text = config_comment(config) + "\n" + kernel_csv_header(y.value.size());
  for (const auto& x : chamber_lattice(rs, o.n, o.extent)) {
    // Poisson and Green kernels live in the unit ball.
    if ((kind.type == KernelType::Poisson || kind.type == KernelType::Green) && x.norm() >= 1) continue;
    text += kernel_csv_row(rs.name(), o.kernel, o.t, x, y.value, kernel_w(rs, kind, x, y.value));
  }
  write_file_atomic(o.output, text);
  return 0;
}

int run_export_ratio(const AsymOptionsCli& o) {
  const AsymResult r = compute_asym(o);
  nlohmann::json config = r.config;
  config["verb"] = "export";
  config["kind"] = "asymptotic-ratio";
  std::string text = config_comment(config) + "\ntheorem,system,param,ratio,deviation\n";
  for (std::size_t i = 0; i < r.test.params.size(); ++i)
    text += o.theorem + "," + o.system + "," + format_double(r.test.params[i]) + "," +
            format_double(r.test.ratios[i]) + "," + format_double(r.test.deviations[i]) + "\n";
  write_file_atomic(o.output, text);
  return 0;
}

int run_export_histogram(const SimOptionsCli& o) {
  const SimResult r = compute_simulation(o);
  nlohmann::json config = r.config;
  config["verb"] = "export";
  config["kind"] = "histogram";
  write_file_atomic(o.output, histogram_csv(r.histogram, config));
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernels of flat symmetric spaces and of the conditioned process", "weylkern"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  EvalOptionsCli eval;
  DysonOptionsCli dyson;
  AsymOptionsCli asym;
  SimOptionsCli sim;
  KillingOptionsCli killing;
  VerifyOptionsCli verify;
  RootsOptionsCli roots;
  add_eval(app, eval);
  add_dyson(app, dyson);
  auto* asym_cmd = app.add_subcommand("asym", "Asymptotic constant and ratio table");
  add_asym_options(asym_cmd, asym);
  asym_cmd->add_option("--format", asym.format)->check(CLI::IsMember({"csv", "json"}));
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo endpoints against the exact density");
  add_sim_options(sim_cmd, sim);
  sim_cmd->add_option("--histogram", sim.histogram, "Histogram CSV path");
  sim_cmd->add_option("--report", sim.report, "Report JSON path");
  sim_cmd->add_option("--format", sim.format, "Standard output: json report or csv histogram")
      ->check(CLI::IsMember({"csv", "json"}));
  sim_cmd->add_option("--output", sim.output);
  add_killingmax(app, killing);
  add_verify(app, verify);
  add_export_roots(app, roots);

  auto* exp = app.add_subcommand("export", "Write plot data as CSV");
  exp->require_subcommand(1);
  AsymOptionsCli ratio;
  auto* ratio_cmd = exp->add_subcommand("asymptotic-ratio", "Ratio against the asymptotic form per parameter");
  add_asym_options(ratio_cmd, ratio);
  ratio_cmd->get_option("--output")->required();
  SimOptionsCli hist;
  auto* hist_cmd = exp->add_subcommand("histogram", "Monte Carlo histogram with expected counts");
  add_sim_options(hist_cmd, hist);
  hist_cmd->add_option("--output", hist.output)->required();
  GridOptionsCli grid;
  auto* grid_cmd = exp->add_subcommand("kernel-grid", "Kernel values on a lattice of chamber points");
  grid_cmd->add_option("--system", grid.system)->required();
  grid_cmd->add_option("--kernel", grid.kernel)->check(CLI::IsMember({"heat", "newton", "poisson", "green"}));
  grid_cmd->add_option("--t", grid.t);
  grid_cmd->add_option("--y", grid.y)->required();
  grid_cmd->add_option("--n", grid.n, "Cells per axis");
  grid_cmd->add_option("--extent", grid.extent, "Half-width of the lattice box");
  grid_cmd->add_option("--output", grid.output)->required();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << library_version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (app.got_subcommand("eval")) return run_eval(eval, out);
    if (app.got_subcommand("dyson")) return run_dyson(dyson, out);
    if (app.got_subcommand("asym")) return run_asym(asym, out);
    if (app.got_subcommand("simulate")) return run_simulate(sim, out);
    if (app.got_subcommand("killingmax")) return run_killingmax(killing, out);
    if (app.got_subcommand("verify")) return run_verify(verify, out);
    if (app.got_subcommand("export-roots")) return run_export_roots(roots, out);
    if (ratio_cmd->parsed()) return run_export_ratio(ratio);
    if (hist_cmd->parsed()) return run_export_histogram(hist);
    if (grid_cmd->parsed()) return run_export_grid(grid);
  } catch (const VerificationFailure&) {
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace weylkern::cli
