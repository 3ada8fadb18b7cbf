#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gmlab {

/// Every parameter of one experiment. Field names in JSON match the long CLI flags.
struct ExperimentConfig {
  std::string command;  // simulate, hellinger, svar, transfer, escape, envelope, check
  std::string gfn;
  std::string init = "const:0";
  std::string init_a = "const:0";
  std::string init_b = "const:0";
  std::uint64_t seed = 0;
  std::size_t steps = 1000;
  std::size_t paths = 1;
  double eval_tol = 1e-9;   // evaluation tolerance for g
  double cutoff = 1e-12;    // enumeration cutoff for countable supports
  bool swap = false;        // hellinger: sample under init-a instead
  bool use_envelope = false;  // simulate: exact rejection sampling with the example envelope
  std::size_t depth = 1;      // transfer
  std::size_t truncation = 0;
  std::string tail_fill;      // empty: constant first symbol
  std::size_t starts = 10;
  double tol = 1e-13;         // transfer: power-iteration tolerance
  std::size_t max_iter = 1000000;
  std::size_t dense_cap = 4096;
  std::size_t max_states = std::size_t{1} << 20;
  std::size_t window = 5;     // escape
  std::size_t max_n = 64;     // svar: rows n = 0..max_n
  std::size_t estimate_n = 8; // svar/check: sampled lower brackets for n <= estimate_n
  std::size_t budget = 200;
  std::size_t samples = 1000;      // envelope/check: random contexts
  std::size_t proposals = 100000;  // envelope: rejection-sampling proposals
  std::string envelope_file;       // envelope: check this envelope instead of deriving one
  std::string x0;                  // envelope: derive K = exp(var1 bound), pi = g(. x0)
  std::optional<double> var1_bound;
  std::string out = ".";
  bool no_timestamp = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

nlohmann::json config_to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults; unknown keys are a kConfig error.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

struct RunResult {
  std::vector<std::string> artifacts;  // paths written
  nlohmann::json summary;              // body of the main JSON artifact
};

/// Executes one subcommand and writes its artifacts under config.out. Throws gmlab::Error.
RunResult run(const ExperimentConfig& config);

/// Registry listing for `examples list`.
void print_examples(std::ostream& out);

/// Full command-line entry point: returns the process exit code and reports errors on `err`
/// as one line `error: code=<n> kind=<kind> message=<text>`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string tool_version();

}  // namespace gmlab
