#include <CLI11.hpp>

#include <ostream>
#include <string_view>

#include "gmlab/cli.hpp"
#include "gmlab/error.hpp"

namespace gmlab {

namespace {

/// The config file has to be read before flags are bound, so that flags override it.
std::optional<std::string> find_config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.starts_with("--config=")) return std::string(arg.substr(9));
  }
  return std::nullopt;
}

void report(std::ostream& err, int code, std::string_view kind, std::string_view message) {
  std::string flat(message);
  for (char& ch : flat) {
    if (ch == '\n') ch = ' ';
  }
  err << "error: code=" << code << " kind=" << kind << " message=" << flat << '\n';
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    if (const auto path = find_config_path(argc, argv)) cfg = load_config(*path);
  } catch (const Error& e) {
    report(err, exit_code(e.kind()), to_string(e.kind()), e.what());
    return exit_code(e.kind());
  }

  CLI::App app{"Numerical laboratory for g-functions, g-chains and g-measures", "gmlab"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  std::string config_path;
  std::optional<double> var1_bound;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config; flags override its values");
    sub->add_option("--gfn", cfg.gfn, "g-function registry string");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--eval-tol", cfg.eval_tol, "evaluation tolerance for g");
    sub->add_option("--cutoff", cfg.cutoff, "enumeration cutoff for countable supports");
    sub->add_flag("--no-timestamp", cfg.no_timestamp, "omit timestamps from artifacts");
  };

  auto* examples = app.add_subcommand("examples", "built-in example g-functions");
  examples->add_subcommand("list", "list the registry");
  examples->require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "simulate g-chain paths");
  common(simulate);
  simulate->add_option("--init", cfg.init, "initial context or mixture");
  simulate->add_option("--steps", cfg.steps, "symbols to add");
  simulate->add_option("--paths", cfg.paths, "number of paths");
  simulate->add_flag("--use-envelope", cfg.use_envelope, "exact rejection sampling with the example envelope");

  auto* hellinger = app.add_subcommand("hellinger", "likelihood-ratio and Hellinger diagnostics for two inits");
  common(hellinger);
  hellinger->add_option("--init-a", cfg.init_a, "null initial condition");
  hellinger->add_option("--init-b", cfg.init_b, "initial condition paths are sampled from");
  hellinger->add_option("--steps", cfg.steps, "steps per path");
  hellinger->add_option("--paths", cfg.paths, "number of paths");
  hellinger->add_flag("--swap", cfg.swap, "sample under init-a instead");

  auto* svar = app.add_subcommand("svar", "tabulate variation bounds and s-variation partial sums");
  common(svar);
  svar->add_option("--max-n", cfg.max_n, "largest n");
  svar->add_option("--estimate-n", cfg.estimate_n, "sampled lower brackets for n up to this");
  svar->add_option("--budget", cfg.budget, "samples per bracket");

  auto* transfer = app.add_subcommand("transfer", "Markov surrogate, stationary measures and uniqueness probe");
  common(transfer);
  transfer->add_option("--depth", cfg.depth, "surrogate memory depth");
  transfer->add_option("--truncation", cfg.truncation, "retained symbols (0 keeps a finite alphabet)");
  transfer->add_option("--tail-fill", cfg.tail_fill, "context completing each state word");
  transfer->add_option("--starts", cfg.starts, "power-iteration starts");
  transfer->add_option("--tol", cfg.tol, "power-iteration tolerance");
  transfer->add_option("--max-iter", cfg.max_iter, "power-iteration sweeps");
  transfer->add_option("--dense-cap", cfg.dense_cap, "largest state count for the dense solve");
  transfer->add_option("--max-states", cfg.max_states, "largest surrogate state count");

  auto* escape = app.add_subcommand("escape", "growth of |x_{-n}| and occupancy of a symbol window");
  common(escape);
  escape->add_option("--init", cfg.init, "initial context or mixture");
  escape->add_option("--steps", cfg.steps, "steps per path");
  escape->add_option("--paths", cfg.paths, "number of paths");
  escape->add_option("--window", cfg.window, "window |x| <= w");

  auto* envelope = app.add_subcommand("envelope", "derive and check a domination envelope");
  common(envelope);
  envelope->add_option("--envelope-file", cfg.envelope_file, "envelope JSON to check");
  envelope->add_option("--x0", cfg.x0, "derive pi = g(. x0)");
  envelope->add_option("--var1-bound", var1_bound, "bound on the oscillation of log g with the symbol fixed");
  envelope->add_option("--samples", cfg.samples, "random contexts");
  envelope->add_option("--proposals", cfg.proposals, "rejection-sampling proposals");

  auto* check = app.add_subcommand("check", "invariant suite for one g");
  common(check);
  check->add_option("--samples", cfg.samples, "random contexts");
  check->add_option("--estimate-n", cfg.estimate_n, "variation brackets for n up to this");
  check->add_option("--budget", cfg.budget, "samples per bracket");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    const int code = exit_code(ErrorKind::kConfig);
    report(err, code, to_string(ErrorKind::kConfig), e.what());
    return code;
  }

  if (examples->parsed()) {
    print_examples(out);
    return 0;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (var1_bound) cfg.var1_bound = var1_bound;

  try {
    const RunResult result = run(cfg);
    for (const auto& path : result.artifacts) out << "wrote " << path << '\n';
    if (result.summary.contains("verdict")) out << "verdict " << result.summary["verdict"].get<std::string>() << '\n';
    return 0;
  } catch (const Error& e) {
    report(err, exit_code(e.kind()), to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report(err, 2, "internal", e.what());
    return 2;
  }
}

}  // namespace gmlab
