#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "gmlab/error.hpp"
#include "gmlab/registry.hpp"

namespace gmlab {

namespace {

std::size_t checked_power(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (out > (std::size_t{1} << 40) / std::max<std::size_t>(base, 1)) {
      throw Error(ErrorKind::kInstanceTooLarge, "table with |S|^depth rows is too large");
    }
    out *= base;
  }
  return out;
}

// Oscillation of transform(p[row][sigma]) over rows sharing their leading `fixed` digits,
// maximised over groups and symbols. Zero entries under log are -inf.
template <typename Transform>
double grouped_oscillation(const MarkovTable& t, std::size_t fixed, Transform transform) {
  const std::size_t depth = *t.depth();
  if (fixed >= depth) return 0.0;
  std::size_t group = 1;
  for (std::size_t i = fixed; i < depth; ++i) group *= t.alphabet_size();
  double worst = 0.0;
  for (std::size_t start = 0; start < t.rows(); start += group) {
    for (std::size_t s = 0; s < t.alphabet_size(); ++s) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t r = start; r < start + group; ++r) {
        const double v = transform(t.probability(r, static_cast<Symbol>(s)));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi == lo) continue;  // also covers two -inf entries
      worst = std::max(worst, hi - lo);
    }
  }
  return worst;
}

}  // namespace

MarkovTable::MarkovTable(std::size_t alphabet_size, std::size_t depth, std::vector<double> probabilities,
                         Validation validation, std::string source)
    : size_(alphabet_size),
      depth_(depth),
      rows_(checked_power(alphabet_size, depth)),
      table_(std::move(probabilities)),
      alphabet_(Alphabet::finite(alphabet_size)),
      source_(std::move(source)) {
  if (size_ < 1) throw Error(ErrorKind::kConfig, "table alphabet_size must be positive");
  if (table_.size() != rows_ * size_) {
    throw Error(ErrorKind::kConfig, "table needs " + std::to_string(rows_ * size_) + " probabilities, got " +
                                        std::to_string(table_.size()));
  }
  if (validation == Validation::kSkip) return;
  for (std::size_t r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (std::size_t s = 0; s < size_; ++s) {
      const double p = table_[r * size_ + s];
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::kConfig, "table entries must lie in [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw Error(ErrorKind::kConfig, "table row " + std::to_string(r) + " sums to " + format_double(sum));
    }
  }
}

std::string MarkovTable::name() const {
  if (!source_.empty()) return "markov:file=" + source_;
  return "markov:S=" + std::to_string(size_) + ",k=" + std::to_string(depth_);
}

std::string MarkovTable::description() const {
  return "table-driven g on " + std::to_string(size_) + " symbols with memory depth " + std::to_string(depth_);
}

std::size_t MarkovTable::row_of(const Context& x) const {
  std::size_t row = 0;
  for (std::size_t j = 0; j < depth_; ++j) {
    const Symbol s = x.coordinate(j);
    if (s < 0 || static_cast<std::size_t>(s) >= size_) {
      throw Error(ErrorKind::kOutsideAlphabet, "context symbol " + std::to_string(s) + " outside table alphabet");
    }
    row = row * size_ + static_cast<std::size_t>(s);
  }
  return row;
}

Evaluation MarkovTable::evaluate(Symbol sigma, const Context& x, double tol) const {
  check_tolerance(tol);
  if (sigma < 0 || static_cast<std::size_t>(sigma) >= size_) {
    throw Error(ErrorKind::kOutsideAlphabet, "symbol " + std::to_string(sigma) + " outside table alphabet");
  }
  return {probability(row_of(x), sigma), 0.0};
}

SymbolDistribution MarkovTable::distribution(const Context& x, const DistributionOptions& options) const {
  check_tolerance(options.tol);
  const std::size_t row = row_of(x);
  SymbolDistribution out;
  out.symbols = alphabet_.symbols();
  out.probs = Eigen::Map<const Eigen::VectorXd>(table_.data() + row * size_, static_cast<Eigen::Index>(size_));
  return out;
}

std::optional<double> MarkovTable::var_bound(std::size_t n) const {
  return grouped_oscillation(*this, n, [](double p) { return p; });
}

std::optional<double> MarkovTable::svar_sq_bound(std::size_t n) const {
  const std::size_t fixed = n + 1;
  if (fixed >= depth_) return 0.0;
  std::size_t group = 1;
  for (std::size_t i = fixed; i < depth_; ++i) group *= size_;
  double worst = 0.0;
  for (std::size_t start = 0; start < rows_; start += group) {
    std::vector<double> lo(size_, std::numeric_limits<double>::infinity());
    std::vector<double> hi(size_, -std::numeric_limits<double>::infinity());
    for (std::size_t r = start; r < start + group; ++r) {
      for (std::size_t s = 0; s < size_; ++s) {
        const double v = std::sqrt(probability(r, static_cast<Symbol>(s)));
        lo[s] = std::min(lo[s], v);
        hi[s] = std::max(hi[s], v);
      }
    }
    for (std::size_t r = start; r < start + group; ++r) {
      double sum = 0.0;
      for (std::size_t s = 0; s < size_; ++s) {
        const double v = std::sqrt(probability(r, static_cast<Symbol>(s)));
        const double d = std::max(v - lo[s], hi[s] - v);
        sum += d * d;
      }
      worst = std::max(worst, sum);
    }
  }
  return worst;
}

std::optional<double> MarkovTable::svar_sq_tail_bound(std::size_t n) const {
  double sum = 0.0;
  for (std::size_t m = n + 1; m + 1 < depth_; ++m) sum += *svar_sq_bound(m);
  return sum;
}

std::optional<double> MarkovTable::log_var_bound(std::size_t n) const {
  return grouped_oscillation(*this, n, [](double p) {
    return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
  });
}

std::optional<Envelope> MarkovTable::example_envelope() const {
  Envelope env;
  std::vector<double> column_max(size_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t s = 0; s < size_; ++s) column_max[s] = std::max(column_max[s], probability(r, static_cast<Symbol>(s)));
  }
  double K = 0.0;
  for (double m : column_max) K += m;
  env.K = K;
  for (std::size_t s = 0; s < size_; ++s) env.explicit_probs[static_cast<Symbol>(s)] = column_max[s] / K;
  env.provenance = Envelope::Provenance::kExampleSpecific;
  return env;
}

std::vector<Context> MarkovTable::corner_contexts() const {
  if (rows_ > 256) return GFunction::corner_contexts();
  std::vector<Context> out;
  for (std::size_t r = 0; r < rows_; ++r) {
    std::vector<Symbol> head(depth_);
    std::size_t rest = r;
    for (std::size_t j = depth_; j-- > 0;) {
      head[j] = static_cast<Symbol>(rest % size_);
      rest /= size_;
    }
    out.emplace_back(head, ConstantTail{0});
  }
  return out;
}

GFunctionPtr load_markov_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidGfn, "cannot open table file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
    const auto size = doc.at("alphabet_size").get<std::size_t>();
    const auto depth = doc.at("depth").get<std::size_t>();
    std::vector<double> probs;
    for (const auto& item : doc.at("probabilities")) {
      if (item.is_array()) {
        for (const auto& p : item) probs.push_back(p.get<double>());
      } else {
        probs.push_back(item.get<double>());
      }
    }
    return std::make_shared<MarkovTable>(size, depth, std::move(probs), MarkovTable::Validation::kStrict, path);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidGfn, "malformed table file '" + path + "': " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::kInvalidGfn, "invalid table file '" + path + "': " + e.what());
  }
}

}  // namespace gmlab
