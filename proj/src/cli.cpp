#include "gmlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "gmlab/chain.hpp"
#include "gmlab/error.hpp"
#include "gmlab/existence.hpp"
#include "gmlab/hellinger.hpp"
#include "gmlab/registry.hpp"
#include "gmlab/transfer.hpp"
#include "gmlab/variation.hpp"

#ifndef GMLAB_VERSION
#define GMLAB_VERSION "0.0.0"
#endif

namespace gmlab {

using nlohmann::json;

std::string tool_version() { return GMLAB_VERSION; }

namespace {

template <typename Config, typename Visit>
void for_each_field(Config& c, Visit&& visit) {
  visit("command", c.command);
  visit("gfn", c.gfn);
  visit("init", c.init);
  visit("init-a", c.init_a);
  visit("init-b", c.init_b);
  visit("seed", c.seed);
  visit("steps", c.steps);
  visit("paths", c.paths);
  visit("eval-tol", c.eval_tol);
  visit("cutoff", c.cutoff);
  visit("swap", c.swap);
  visit("use-envelope", c.use_envelope);
  visit("depth", c.depth);
  visit("truncation", c.truncation);
  visit("tail-fill", c.tail_fill);
  visit("starts", c.starts);
  visit("tol", c.tol);
  visit("max-iter", c.max_iter);
  visit("dense-cap", c.dense_cap);
  visit("max-states", c.max_states);
  visit("window", c.window);
  visit("max-n", c.max_n);
  visit("estimate-n", c.estimate_n);
  visit("budget", c.budget);
  visit("samples", c.samples);
  visit("proposals", c.proposals);
  visit("envelope-file", c.envelope_file);
  visit("x0", c.x0);
  visit("var1-bound", c.var1_bound);
  visit("out", c.out);
  visit("no-timestamp", c.no_timestamp);
}

template <typename T>
void put(json& j, const char* key, const T& value) {
  j[key] = value;
}
void put(json& j, const char* key, const std::optional<double>& value) {
  j[key] = value ? json(*value) : json(nullptr);
}

template <typename T>
void take(const json& j, T& value) {
  value = j.get<T>();
}
void take(const json& j, std::optional<double>& value) {
  value = j.is_null() ? std::nullopt : std::optional(j.get<double>());
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream out;
  out << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

json to_json_number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

std::string fmt(double v) { return format_double(v); }

class Session {
 public:
  explicit Session(const ExperimentConfig& config) : config_(config) {
    if (config.gfn.empty()) throw Error(ErrorKind::kConfig, "--gfn is required");
    if (!(config.eval_tol >= kMinTolerance)) {
      throw Error(ErrorKind::kPrecisionUnavailable,
                  "evaluation tolerance " + fmt(config.eval_tol) + " is below the certified floor " + fmt(kMinTolerance));
    }
    g_ = make_gfunction(config.gfn);
    std::filesystem::create_directories(config.out);
    meta_ = {{"tool", "gmlab"}, {"version", tool_version()}, {"config", config_to_json(config)},
             {"seed", config.seed}, {"gfn", g_->name()}, {"enumeration_order", g_->alphabet().enumeration_order()}};
    if (!config.no_timestamp) meta_["timestamp"] = timestamp();
  }

  const GFunction& g() const { return *g_; }
  const ExperimentConfig& config() const { return config_; }
  DistributionOptions distribution() const {
    DistributionOptions d;
    d.tol = config_.eval_tol;
    d.cutoff = config_.cutoff;
    return d;
  }

  std::vector<std::string> header(const std::vector<std::string>& extra = {}) const {
    std::vector<std::string> lines = {"tool=gmlab " + tool_version(), "config=" + config_to_json(config_).dump(),
                                      "seed=" + std::to_string(config_.seed), "gfn=" + g_->name(),
                                      "enumeration_order=" + g_->alphabet().enumeration_order()};
    if (meta_.contains("timestamp")) lines.push_back("timestamp=" + meta_["timestamp"].get<std::string>());
    lines.insert(lines.end(), extra.begin(), extra.end());
    return lines;
  }

  std::ofstream open(const std::string& name) {
    const auto path = (std::filesystem::path(config_.out) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::kConfig, "cannot write " + path);
    result_.artifacts.push_back(path);
    return out;
  }

  RunResult finish(const std::string& name, json summary) {
    summary["meta"] = meta_;
    {
      auto out = open(name);
      out << summary.dump(2) << '\n';
    }
    result_.summary = std::move(summary);
    return std::move(result_);
  }

 private:
  const ExperimentConfig& config_;
  GFunctionPtr g_;
  json meta_;
  RunResult result_;
};

RunResult run_simulate(Session& s) {
  const auto& c = s.config();
  SimulationOptions options;
  options.distribution = s.distribution();
  if (c.use_envelope) {
    options.envelope = s.g().example_envelope();
    if (!options.envelope) throw Error(ErrorKind::kConfig, s.g().name() + " ships no domination envelope");
  }
  if (c.paths == 0) throw Error(ErrorKind::kConfig, "--paths must be positive");
  const auto init = parse_initial_condition(c.init);
  const auto runs = simulate_paths(s.g(), init, c.steps, c.seed, c.paths, options);
  json paths = json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string name = c.paths == 1 ? "path.csv" : "path_" + std::to_string(i) + ".csv";
    auto out = s.open(name);
    std::vector<std::string> extra = {"path=" + std::to_string(i), "init=" + init.to_string()};
    if (runs[i].path.component) extra.push_back("component=" + std::to_string(*runs[i].path.component));
    write_path_csv(out, runs[i].path, s.header(extra));
    const auto& st = runs[i].stats;
    json entry = {{"path", i}, {"draws", st.draws}, {"cutoff_events", st.cutoff_events}};
    if (runs[i].path.component) entry["component"] = *runs[i].path.component;
    if (c.use_envelope) {
      entry["proposals"] = st.proposals;
      entry["acceptances"] = st.acceptances;
    }
    paths.push_back(entry);
  }
  return s.finish("simulate.json", {{"steps", c.steps}, {"paths", paths}});
}

RunResult run_hellinger(Session& s) {
  const auto& c = s.config();
  AcsOptions options;
  options.paths = c.paths;
  options.steps = c.steps;
  options.seed = c.seed;
  options.distribution = s.distribution();
  options.swap = c.swap;
  const auto result =
      acs_diagnostic(s.g(), parse_initial_condition(c.init_a), parse_initial_condition(c.init_b), options);
  {
    auto out = s.open("hellinger.csv");
    for (const auto& line : s.header()) out << "# " << line << '\n';
    out << "path,checkpoint_n,B_n,logZ_n,Y_n\n";
    for (std::size_t p = 0; p < result.traces.size(); ++p) {
      const auto& t = result.traces[p];
      for (std::size_t i = 0; i < t.checkpoints.size(); ++i) {
        out << p << ',' << t.checkpoints[i] << ',' << fmt(t.B[i]) << ',' << fmt(t.logZ[i]) << ',' << fmt(t.Y[i])
            << '\n';
      }
    }
  }
  json summary = {{"verdict", to_string(result.verdict)},
                  {"slope", to_json_number(result.slope)},
                  {"slope_ci", {to_json_number(result.slope_ci.first), to_json_number(result.slope_ci.second)}},
                  {"final_increment_q95", to_json_number(result.final_increment_q95)},
                  {"converged_fraction", result.converged_fraction},
                  {"bound_check", {{"available", result.bound_available}, {"violations", result.bound_violations}}}};
  if (result.singular_witness) {
    summary["singular_witness"] = {{"path", result.singular_witness->path},
                                   {"step", result.singular_witness->step},
                                   {"cylinder", result.singular_witness->cylinder.symbols}};
  } else {
    json medians = json::object();
    for (std::size_t n = 1; n <= c.steps; n *= 10) {
      std::vector<double> values;
      for (const auto& t : result.traces) values.push_back(t.B_at(n));
      medians[std::to_string(n)] = to_json_number(median(values));
    }
    std::vector<double> finals;
    for (const auto& t : result.traces) finals.push_back(t.B_at(c.steps));
    medians[std::to_string(c.steps)] = to_json_number(median(finals));
    summary["median_B"] = medians;
  }
  return s.finish("verdict.json", summary);
}

RunResult run_svar(Session& s) {
  const auto& c = s.config();
  const GFunction& g = s.g();
  std::vector<double> partial;
  {
    auto out = s.open("svar.csv");
    for (const auto& line : s.header()) out << "# " << line << '\n';
    out << "n,var_bound,svar_sq_bound,svar_sq_partial_sum,log_var_bound,var_lower,svar_sq_lower\n";
    double sum = 0.0;
    for (std::size_t n = 0; n <= c.max_n; ++n) {
      const auto var = g.var_bound(n);
      const auto svar = g.svar_sq_bound(n);
      const auto logv = g.log_var_bound(n);
      if (svar) sum += *svar;
      partial.push_back(svar ? sum : std::nan(""));
      out << n << ',' << (var ? fmt(*var) : "") << ',' << (svar ? fmt(*svar) : "") << ','
          << (svar ? fmt(sum) : "") << ',' << (logv ? fmt(*logv) : "") << ',';
      if (n <= c.estimate_n) {
        out << fmt(var_estimate(g, n, c.budget, c.seed).lower) << ','
            << fmt(svar_sq_estimate(g, n, c.budget, c.seed).lower);
      } else {
        out << ',';
      }
      out << '\n';
    }
  }
  json summary = {{"max_n", c.max_n}};
  if (const auto tail = g.svar_sq_tail_bound(0)) {
    summary["svar_sq_tail_bound"] = to_json_number(*tail);
    summary["summable"] = std::isfinite(*tail);
  }
  if (!partial.empty() && !std::isnan(partial.back())) {
    summary["partial_sum"] = partial.back();
    summary["cauchy_increment"] = partial.back() - partial[c.max_n / 10];
    const std::size_t lo = std::max<std::size_t>(1, c.max_n / 100);
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t n = lo; n <= c.max_n; ++n) {
      const double v = *g.svar_sq_bound(n);
      if (v <= 0.0) continue;
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(v));
    }
    if (lx.size() >= 2) summary["loglog_slope"] = least_squares(lx, ly).slope;
  }
  return s.finish("svar.json", summary);
}

RunResult run_transfer(Session& s) {
  const auto& c = s.config();
  UniquenessOptions options;
  options.approx.depth = c.depth;
  options.approx.truncation = c.truncation;
  if (!c.tail_fill.empty()) options.approx.tail_fill = parse_context(c.tail_fill);
  options.approx.max_states = c.max_states;
  options.approx.tol = std::max(kMinTolerance, std::min(c.eval_tol, 1e-13));
  options.starts = c.starts;
  options.tol = c.tol;
  options.max_iter = c.max_iter;
  options.seed = c.seed;
  const MarkovApprox ma = build_markov_approx(s.g(), options.approx);
  const auto report = uniqueness_probe(s.g(), ma, options);
  {
    auto out = s.open("kernel.csv");
    write_kernel_csv(out, ma, s.header({"depth=" + std::to_string(c.depth)}));
  }
  {
    auto out = s.open("stationary.csv");
    write_stationary_csv(out, ma, report.limits.front().distribution, s.header({"start=" + std::to_string(report.start_states.front())}));
  }
  json starts = json::array();
  for (std::size_t i = 0; i < report.limits.size(); ++i) {
    starts.push_back({{"start_state", ma.state_word(report.start_states[i])},
                      {"flag", to_string(report.limits[i].flag)},
                      {"iterations", report.limits[i].iterations},
                      {"residual", report.limits[i].residual}});
  }
  json tv = json::array();
  for (Eigen::Index i = 0; i < report.tv.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < report.tv.cols(); ++j) row.push_back(report.tv(i, j));
    tv.push_back(row);
  }
  json summary = {{"states", report.states},
                  {"exact", report.exact},
                  {"max_tv", report.max_tv},
                  {"tv", tv},
                  {"starts", starts},
                  {"all_converged", report.all_converged},
                  {"periodic_suspect", report.periodic_suspect},
                  {"positive", report.positive},
                  {"max_escaped", report.max_escaped},
                  {"outcome", report.outcome}};
  summary["svar_summable"] = report.svar_summable ? json(*report.svar_summable) : json(nullptr);
  if (ma.size() <= c.dense_cap) {
    try {
      const auto dense = exact_stationary(ma, c.dense_cap);
      summary["exact_solve"] = {{"status", "unique"},
                                {"residual", dense.residual},
                                {"tv_to_power", tv_distance(dense.distribution, report.limits.front().distribution)}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNoUniqueSolution) throw;
      summary["exact_solve"] = {{"status", "no-unique-solution"}, {"message", e.what()}};
    }
  }
  return s.finish("transfer.json", summary);
}

RunResult run_escape(Session& s) {
  const auto& c = s.config();
  SimulationOptions options;
  options.distribution = s.distribution();
  const auto report =
      escape_diagnostic(s.g(), parse_initial_condition(c.init), c.steps, c.paths, c.seed, c.window, options);
  {
    auto out = s.open("escape.csv");
    for (const auto& line : s.header()) out << "# " << line << '\n';
    out << "n,mean_abs,occupancy\n";
    for (std::size_t i = 0; i < report.checkpoints.size(); ++i) {
      out << report.checkpoints[i] << ',' << fmt(report.mean_abs[i]) << ',' << fmt(report.occupancy[i]) << '\n';
    }
  }
  return s.finish("escape.json", {{"exponent", report.exponent},
                                  {"window", report.window},
                                  {"final_mean_abs", report.mean_abs.back()},
                                  {"final_occupancy", report.occupancy.back()}});
}

Envelope choose_envelope(const Session& s) {
  const auto& c = s.config();
  if (!c.envelope_file.empty()) {
    std::ifstream in(c.envelope_file);
    if (!in) throw Error(ErrorKind::kConfig, "cannot read " + c.envelope_file);
    try {
      return envelope_from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kEnvelopeInvalid, std::string("malformed envelope JSON: ") + e.what());
    }
  }
  if (!c.x0.empty()) {
    const double bound = c.var1_bound ? *c.var1_bound : s.g().log_var_bound(0).value_or(INFINITY);
    if (!std::isfinite(bound)) {
      throw Error(ErrorKind::kEnvelopeInvalid, "no finite bound on the oscillation of log g; pass --var1-bound");
    }
    return envelope_from_var1(s.g(), parse_context(c.x0), bound);
  }
  if (auto env = s.g().example_envelope()) return *env;
  throw Error(ErrorKind::kConfig, s.g().name() + " ships no envelope; pass --x0 or --envelope-file");
}

RunResult run_envelope(Session& s) {
  const auto& c = s.config();
  const Envelope env = choose_envelope(s);
  const auto report = domination_check(s.g(), env, c.samples, c.seed, s.distribution());
  json domination = {{"holds", report.holds},
                     {"min_slack", to_json_number(report.min_slack)},
                     {"contexts", report.contexts},
                     {"pairs", report.pairs}};
  if (report.min_slack_context) {
    domination["min_slack_at"] = {{"symbol", report.min_slack_symbol},
                                  {"context", report.min_slack_context->to_string()}};
  }
  if (report.violation) {
    domination["violation"] = {{"symbol", report.violation->symbol},
                               {"context", report.violation->context.to_string()},
                               {"g", report.violation->value},
                               {"K_pi", report.violation->bound},
                               {"margin", report.violation->margin}};
  }
  json summary = {{"envelope", envelope_to_json(env)}, {"domination", domination}};
  if (report.holds && c.proposals > 0) {
    RngStream rng(c.seed, 1);
    SamplingStats stats;
    while (stats.proposals < c.proposals) {
      const auto head = static_cast<std::size_t>(uniform01(rng.engine()) * 24.0);
      const Context x = s.g().random_context(rng.engine(), head);
      sample_by_envelope(s.g(), x, env, rng, stats, c.eval_tol);
    }
    const double rate = static_cast<double>(stats.acceptances) / static_cast<double>(stats.proposals);
    const double expected = 1.0 / env.K;
    const double sd = std::sqrt(expected * (1.0 - expected) / static_cast<double>(stats.proposals));
    summary["rejection"] = {{"proposals", stats.proposals},
                            {"acceptances", stats.acceptances},
                            {"rate", rate},
                            {"expected", expected},
                            {"z", sd > 0.0 ? (rate - expected) / sd : 0.0}};
  }
  return s.finish("envelope.json", summary);
}

RunResult run_check(Session& s) {
  const auto& c = s.config();
  const GFunction& g = s.g();
  json checks = json::array();
  bool all = true;
  const auto record = [&](const std::string& name, bool passed, json detail) {
    all &= passed;
    checks.push_back({{"name", name}, {"passed", passed}, {"detail", std::move(detail)}});
  };

  {
    Rng rng = stream_rng(c.seed, 0);
    std::vector<Context> contexts = g.corner_contexts();
    for (std::size_t i = 0; i < c.samples; ++i) contexts.push_back(g.random_context(rng, i % 24));
    double worst = 0.0;
    for (const auto& x : contexts) worst = std::max(worst, normalization_residual(g, x, 1u << 16, c.eval_tol));
    record("normalization", worst <= 1e-9, {{"contexts", contexts.size()}, {"max_residual", worst}});
  }
  {
    const auto p = positivity_probe(g, c.samples, c.seed);
    json detail = {{"checked", p.checked}, {"zero_found", p.zero_found}};
    if (p.context) detail["witness"] = {{"symbol", p.symbol}, {"context", p.context->to_string()}};
    record("positivity-probe", true, detail);
  }
  for (std::size_t n = 0; n <= c.estimate_n; ++n) {
    const auto v = var_estimate(g, n, c.budget, c.seed);
    const auto sv = svar_sq_estimate(g, n, c.budget, c.seed);
    const bool ok_v = !v.upper || v.lower <= *v.upper + 1e-9;
    const bool ok_sv = !sv.upper || sv.lower <= *sv.upper + 1e-9;
    record("var-bracket-" + std::to_string(n), ok_v,
           {{"lower", v.lower}, {"upper", v.upper ? to_json_number(*v.upper) : json(nullptr)}});
    record("svar-bracket-" + std::to_string(n), ok_sv,
           {{"lower", sv.lower}, {"upper", sv.upper ? to_json_number(*sv.upper) : json(nullptr)}});
  }
  if (const auto env = g.example_envelope()) {
    const auto d = domination_check(g, *env, c.samples, c.seed, s.distribution());
    record("domination", d.holds, {{"min_slack", to_json_number(d.min_slack)}, {"pairs", d.pairs}});
  }
  return s.finish("check.json", {{"all_passed", all}, {"checks", checks}});
}

}  // namespace

json config_to_json(const ExperimentConfig& config) {
  json j = json::object();
  for_each_field(config, [&](const char* key, const auto& value) { put(j, key, value); });
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kConfig, "config must be a JSON object");
  ExperimentConfig config;
  std::size_t matched = 0;
  try {
    for_each_field(config, [&](const char* key, auto& value) {
      if (const auto it = j.find(key); it != j.end()) {
        take(*it, value);
        ++matched;
      }
    });
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("bad config value: ") + e.what());
  }
  if (matched != j.size()) {
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for_each_field(config, [&](const char* name, const auto&) { known |= key == name; });
      if (!known) throw Error(ErrorKind::kConfig, "unknown config key '" + key + "'");
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot read config " + path);
  try {
    return config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kConfig, "config " + path + " is not valid JSON: " + e.what());
  }
}

RunResult run(const ExperimentConfig& config) {
  Session session(config);
  if (config.command == "simulate") return run_simulate(session);
  if (config.command == "hellinger") return run_hellinger(session);
  if (config.command == "svar") return run_svar(session);
  if (config.command == "transfer") return run_transfer(session);
  if (config.command == "escape") return run_escape(session);
  if (config.command == "envelope") return run_envelope(session);
  if (config.command == "check") return run_check(session);
  throw Error(ErrorKind::kConfig, "unknown command '" + config.command + "'");
}

void print_examples(std::ostream& out) {
  for (const auto& e : registry()) {
    out << e.name << "\n  example: " << e.example << "\n  " << e.summary << '\n';
  }
}

}  // namespace gmlab
