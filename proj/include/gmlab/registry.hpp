#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gmlab/gfunction.hpp"

namespace gmlab {

/// Finite-alphabet, depth-k table-driven g. Row index of a context x is
/// x_0 |S|^{k-1} + x_1 |S|^{k-2} + ... + x_{k-1}, i.e. coordinate 0 is the most significant digit.
class MarkovTable final : public GFunction {
 public:
  enum class Validation { kStrict, kSkip };

  MarkovTable(std::size_t alphabet_size, std::size_t depth, std::vector<double> probabilities,
              Validation validation = Validation::kStrict, std::string source = {});

  std::string name() const override;
  std::string description() const override;
  const Alphabet& alphabet() const override { return alphabet_; }
  std::optional<std::size_t> depth() const override { return depth_; }

  Evaluation evaluate(Symbol sigma, const Context& x, double tol) const override;
  SymbolDistribution distribution(const Context& x, const DistributionOptions& options) const override;

  std::optional<double> var_bound(std::size_t n) const override;
  std::optional<double> svar_sq_bound(std::size_t n) const override;
  std::optional<double> svar_sq_tail_bound(std::size_t n) const override;
  std::optional<double> log_var_bound(std::size_t n) const override;
  std::optional<Envelope> example_envelope() const override;
  /// Every row as a context (tail filled with symbol 0) for tables with at most 256 rows.
  std::vector<Context> corner_contexts() const override;

  std::size_t alphabet_size() const { return size_; }
  std::size_t rows() const { return rows_; }
  double probability(std::size_t row, Symbol sigma) const { return table_[row * size_ + static_cast<std::size_t>(sigma)]; }
  std::size_t row_of(const Context& x) const;
  const std::vector<double>& probabilities() const { return table_; }

 private:
  std::size_t size_;
  std::size_t depth_;
  std::size_t rows_;
  std::vector<double> table_;
  Alphabet alphabet_;
  std::string source_;
};

/// Reads {"alphabet_size", "depth", "probabilities"}; probabilities is a flat row-major array
/// or an array of rows. Rows must sum to 1 within 1e-12.
GFunctionPtr load_markov_json(const std::string& path);

/// Weights p_i, i >= 1, of the countable-alphabet example, with closed-form tails.
struct Ex11Params {
  enum class Weights { kGeometric, kZeta };

  Weights weights = Weights::kGeometric;
  double weight_parameter = 2.0;  // geometric: p_i = (1-1/R) R^{-(i-1)}; zeta: p_i = i^{-s}/zeta(s)
  double alpha = 0.5;

  double p(std::size_t i) const;
  /// sum_{i >= m} p_i for m >= 1.
  double p_tail(std::size_t m) const;
  std::string weights_name() const;
};

/// a_n = a + (a1 - a) n^{-q}, n >= 1, with limit a.
struct HulseParams {
  double limit = 0.5;
  double first = 0.9;
  double rate = 1.0;

  double a(std::size_t n) const;
};

/// Spin couplings a_i = scale * i^{-exponent}, exponent > 1.
struct SpinParams {
  double exponent = 1.5;
  double scale = 1.0;

  double a(std::size_t i) const;
  /// sum_{i > n} a_i
  double tail(std::size_t n) const;
};

/// g(i,x) = p_i b(x) for i >= 1 and g(0,x) = 1 - b(x), with
/// b(x) = zeta(3+alpha)^{-1} sum_{k>=1} k^{-(3+alpha)} / (1 + x_{k-1}) on the naturals.
GFunctionPtr make_ex11(const Ex11Params& params);
/// Two-symbol g: g(0 x) = a_n and g(1 x) = 1 - a_n where n is the position of the first 1 in
/// sigma.x after coordinate 0. On the all-zero context the limit a is used.
GFunctionPtr make_hulse(const HulseParams& params);
/// g(+-1, x) = phi(+- sum_i a_i x_{i-1}), phi(t) = e^t / (e^t + e^{-t}), on {+1,-1}.
/// `capacity` bounds the chain length served by the vectorized tracker.
GFunctionPtr make_spin(const SpinParams& params, std::size_t capacity = std::size_t{1} << 18);
/// g = 1/3 on the integer nearest-neighbour subshift |x_n - x_{n+1}| <= 1.
/// Read on the integers: on the naturals the boundary symbol 0 has two neighbours and g = 1/3
/// would not normalize.
GFunctionPtr make_randomwalk_third();

/// Parses a registry string: "ex11:alpha=0.5,p=geom2", "hulse:a=0.5,a1=0.9,q=1",
/// "spin:a=pow1.5[,c=1]", "randomwalk", "markov:file=<path.json>".
GFunctionPtr make_gfunction(std::string_view spec);

struct RegistryEntry {
  std::string name;
  std::string example;
  std::string summary;
};

std::vector<RegistryEntry> registry();

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace gmlab
