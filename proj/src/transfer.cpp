#include "gmlab/transfer.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "gmlab/error.hpp"
#include "gmlab/parallel.hpp"
#include "gmlab/registry.hpp"

namespace gmlab {

namespace {

Context word_context(const std::vector<Symbol>& word, std::size_t from, const Context& fill) {
  std::vector<Symbol> head(word.begin() + static_cast<std::ptrdiff_t>(from), word.end());
  return Context(head, ConstantTail{0}).with_suffix(head.size(), fill);
}

}  // namespace

std::optional<std::size_t> MarkovApprox::index_of(const std::vector<Symbol>& word) const {
  const auto it = std::lower_bound(states.begin(), states.end(), word);
  if (it == states.end() || *it != word) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

std::string MarkovApprox::state_word(std::size_t i) const {
  std::string out;
  for (std::size_t j = 0; j < states.at(i).size(); ++j) {
    if (j) out += ' ';
    out += std::to_string(states[i][j]);
  }
  return out;
}

MarkovApprox build_markov_approx(const GFunction& g, const MarkovApproxOptions& options) {
  if (options.depth < 1) throw Error(ErrorKind::kConfig, "surrogate depth must be at least 1");
  const Alphabet& alphabet = g.alphabet();
  std::size_t m = options.truncation;
  if (m == 0) {
    if (!alphabet.is_finite()) throw Error(ErrorKind::kConfig, "a countable alphabet needs a truncation M >= 2");
    m = *alphabet.size();
  }
  if (alphabet.is_finite()) m = std::min(m, *alphabet.size());
  if (m < 2 && !alphabet.is_finite()) throw Error(ErrorKind::kConfig, "truncation M must be at least 2");

  MarkovApprox ma;
  ma.depth = options.depth;
  ma.tail_fill = options.tail_fill.value_or(Context::constant(alphabet.at(0)));
  for (std::size_t i = 0; i < m; ++i) ma.symbols.push_back(alphabet.at(i));
  ma.exact = g.depth() && *g.depth() <= options.depth && alphabet.is_finite() && m == *alphabet.size();

  // admissible words, built from the deepest coordinate towards coordinate 0
  std::vector<Symbol> word(options.depth);
  const auto extend = [&](auto&& self, std::size_t pos) -> void {
    for (Symbol s : ma.symbols) {
      if (pos + 1 < options.depth && !g.allowed(s, word_context(word, pos + 1, ma.tail_fill))) continue;
      word[pos] = s;
      if (pos == 0) {
        ma.states.push_back(word);
        if (ma.states.size() > options.max_states) {
          throw Error(ErrorKind::kInstanceTooLarge,
                      "surrogate state space exceeds " + std::to_string(options.max_states) + " states");
        }
      } else {
        self(self, pos - 1);
      }
    }
  };
  extend(extend, options.depth - 1);
  std::sort(ma.states.begin(), ma.states.end());

  const std::size_t n = ma.states.size();
  std::vector<std::vector<Eigen::Triplet<double>>> rows(n);
  ma.escaped.assign(n, 0.0);
  ma.escape_bound.assign(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const auto& w = ma.states[i];
    const Context ctx = word_context(w, 0, ma.tail_fill);
    double total = 0.0;
    std::vector<std::pair<std::size_t, double>> entries;
    std::vector<Symbol> next(w.size());
    for (Symbol s : ma.symbols) {
      if (!g.allowed(s, ctx)) continue;
      const double v = g.evaluate(s, ctx, options.tol).value;
      if (v <= 0.0) continue;
      next[0] = s;
      std::copy(w.begin(), w.end() - 1, next.begin() + 1);
      entries.emplace_back(*ma.index_of(next), v);
      total += v;
    }
    if (!(total > 0.0)) {
      throw Error(ErrorKind::kConfig, "state " + ma.state_word(i) + " keeps no mass under the truncation");
    }
    ma.escaped[i] = std::max(0.0, 1.0 - total);
    // plus the rounding of 1 - total over the retained terms
    ma.escape_bound[i] = g.tail_mass_bound(ctx, m) +
                         static_cast<double>(entries.size() + 1) * std::numeric_limits<double>::epsilon();
    if (ma.escaped[i] > options.escape_budget) {
      throw Error(ErrorKind::kConfig, "escaped mass " + format_double(ma.escaped[i]) + " at state " +
                                          ma.state_word(i) + " exceeds the budget");
    }
    for (const auto& [j, v] : entries) {
      rows[i].emplace_back(static_cast<int>(i), static_cast<int>(j), v / total);
    }
  });
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& r : rows) triplets.insert(triplets.end(), r.begin(), r.end());
  ma.kernel.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  ma.kernel.setFromTriplets(triplets.begin(), triplets.end());
  return ma;
}

std::string to_string(StationaryResult::Flag flag) {
  switch (flag) {
    case StationaryResult::Flag::kConverged: return "converged";
    case StationaryResult::Flag::kMaxIter: return "max-iter";
    case StationaryResult::Flag::kPeriodicSuspect: return "periodic-suspect";
  }
  return "?";
}

StationaryResult power_iteration(const MarkovApprox& ma, const Eigen::VectorXd& start, double tol,
                                 std::size_t max_iter) {
  if (start.size() != static_cast<Eigen::Index>(ma.size())) {
    throw Error(ErrorKind::kInvalidDistribution, "start distribution does not match the state space");
  }
  if ((start.array() < 0.0).any() || std::abs(start.sum() - 1.0) > 1e-12) {
    throw Error(ErrorKind::kInvalidDistribution, "start is not a probability distribution");
  }
  StationaryResult out;
  Eigen::RowVectorXd pi = start.transpose();
  Eigen::RowVectorXd before = pi;  // pi_{t-1}
  for (std::size_t t = 0;; ++t) {
    Eigen::RowVectorXd next = pi * ma.kernel;
    const double increment = (next - pi).lpNorm<1>();
    if (increment < tol) {
      out.distribution = pi.transpose();
      out.residual = increment;
      out.iterations = t;
      out.flag = StationaryResult::Flag::kConverged;
      return out;
    }
    // next is pi_{t+1}; compare with pi_{t-1}
    if (t >= 1 && (next - before).lpNorm<1>() < tol) {
      out.distribution = pi.transpose();
      out.residual = increment;
      out.iterations = t;
      out.flag = StationaryResult::Flag::kPeriodicSuspect;
      return out;
    }
    if (t == max_iter) {
      out.distribution = pi.transpose();
      out.residual = increment;
      out.iterations = t;
      out.flag = StationaryResult::Flag::kMaxIter;
      return out;
    }
    before = std::move(pi);
    pi = std::move(next);
  }
}

StationaryResult exact_stationary(const MarkovApprox& ma, std::size_t dense_cap) {
  const auto n = static_cast<Eigen::Index>(ma.size());
  if (ma.size() > dense_cap) {
    throw Error(ErrorKind::kInstanceTooLarge,
                "dense solve limited to " + std::to_string(dense_cap) + " states, got " + std::to_string(n));
  }
  const Eigen::MatrixXd dense = Eigen::MatrixXd(ma.kernel);
  const Eigen::MatrixXd system = dense.transpose() - Eigen::MatrixXd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(1e-10);
  const auto nullity = lu.dimensionOfKernel();
  if (nullity != 1) {
    throw Error(ErrorKind::kNoUniqueSolution,
                "stationary system has nullspace dimension " + std::to_string(nullity));
  }
  Eigen::VectorXd pi = lu.kernel().col(0);
  pi /= pi.sum();
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();
  StationaryResult out;
  out.distribution = pi;
  out.residual = (pi.transpose() * dense - pi.transpose()).lpNorm<1>();
  return out;
}

double tv_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw Error(ErrorKind::kInvalidDistribution, "distributions differ in size");
  return 0.5 * (p - q).lpNorm<1>();
}

UniquenessReport uniqueness_probe(const GFunction& g, const UniquenessOptions& options) {
  return uniqueness_probe(g, build_markov_approx(g, options.approx), options);
}

UniquenessReport uniqueness_probe(const GFunction& g, const MarkovApprox& ma, const UniquenessOptions& options) {
  if (options.starts < 2) throw Error(ErrorKind::kConfig, "the uniqueness probe needs at least 2 starts");
  UniquenessReport report;
  report.states = ma.size();
  report.exact = ma.exact;
  for (double e : ma.escaped) report.max_escaped = std::max(report.max_escaped, e);

  // distinct start states when there are enough of them
  Rng rng = stream_rng(options.seed, 0);
  std::vector<std::size_t> order(ma.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  for (std::size_t s = 0; s < options.starts; ++s) report.start_states.push_back(order[s % order.size()]);

  report.limits.resize(options.starts);
  for (std::size_t s = 0; s < options.starts; ++s) {
    Eigen::VectorXd start = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ma.size()));
    start[static_cast<Eigen::Index>(report.start_states[s])] = 1.0;
    report.limits[s] = power_iteration(ma, start, options.tol, options.max_iter);
    report.all_converged &= report.limits[s].flag == StationaryResult::Flag::kConverged;
    report.periodic_suspect |= report.limits[s].flag == StationaryResult::Flag::kPeriodicSuspect;
  }
  const auto k = static_cast<Eigen::Index>(options.starts);
  report.tv = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double d = tv_distance(report.limits[static_cast<std::size_t>(i)].distribution,
                                   report.limits[static_cast<std::size_t>(j)].distribution);
      report.tv(i, j) = report.tv(j, i) = d;
      report.max_tv = std::max(report.max_tv, d);
    }
  }

  // positivity over the full alphabet: every symbol is allowed and gets positive mass
  report.positive = g.alphabet().is_finite();
  for (std::size_t i = 0; report.positive && i < ma.size(); ++i) {
    const Context ctx = word_context(ma.states[i], 0, ma.tail_fill);
    for (Symbol s : g.alphabet().symbols()) {
      if (!g.allowed(s, ctx) || g.evaluate(s, ctx, options.approx.tol).value <= 0.0) {
        report.positive = false;
        break;
      }
    }
  }
  if (const auto tail = g.svar_sq_tail_bound(0)) report.svar_summable = std::isfinite(*tail);

  const bool observed_unique = report.all_converged && report.max_tv < options.tv_threshold;
  const bool predicted_unique = report.positive && report.svar_summable.value_or(false);
  if (predicted_unique) {
    report.outcome = observed_unique ? "consistent" : "inconsistent";
  } else {
    report.outcome = "no-prediction";
  }
  return report;
}

EscapeReport escape_diagnostic(const GFunction& g, const InitialCondition& init, std::size_t steps,
                               std::size_t paths, std::uint64_t seed, std::size_t window,
                               const SimulationOptions& options) {
  EscapeReport report;
  report.window = window;
  for (int k = 0;; ++k) {
    const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, k / 16.0)));
    if (n > steps) break;
    if (report.checkpoints.empty() || report.checkpoints.back() != n) report.checkpoints.push_back(n);
  }
  if (report.checkpoints.empty() || report.checkpoints.back() != steps) report.checkpoints.push_back(steps);

  if (g.alphabet().is_finite()) {
    report.mean_abs.assign(report.checkpoints.size(), 0.0);
    report.occupancy.assign(report.checkpoints.size(), 1.0);
    report.exponent = 0.0;
    return report;
  }
  if (paths == 0) throw Error(ErrorKind::kConfig, "escape diagnostic needs at least one path");

  const auto runs = simulate_paths(g, init, steps, seed, paths, options);
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t n : report.checkpoints) {
    if (n == 0) continue;
    double total = 0.0;
    std::size_t inside = 0;
    for (const auto& run : runs) {
      const double v = std::abs(static_cast<double>(run.path.added.symbols[n - 1]));
      total += v;
      if (v <= static_cast<double>(window)) ++inside;
    }
    const double mean = total / static_cast<double>(paths);
    report.mean_abs.push_back(mean);
    report.occupancy.push_back(static_cast<double>(inside) / static_cast<double>(paths));
    if (n >= 10 && mean > 0.0) {
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(mean));
    }
  }
  if (lx.size() >= 2) report.exponent = least_squares(lx, ly).slope;
  return report;
}

void write_kernel_csv(std::ostream& out, const MarkovApprox& ma, const std::vector<std::string>& header) {
  for (const auto& line : header) out << "# " << line << '\n';
  out << "from_state,symbol,prob\n";
  for (Eigen::Index i = 0; i < ma.kernel.outerSize(); ++i) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ma.kernel, i); it; ++it) {
      out << ma.state_word(static_cast<std::size_t>(i)) << ','
          << ma.states[static_cast<std::size_t>(it.col())][0] << ',' << format_double(it.value()) << '\n';
    }
  }
}

void write_stationary_csv(std::ostream& out, const MarkovApprox& ma, const Eigen::VectorXd& distribution,
                          const std::vector<std::string>& header) {
  for (const auto& line : header) out << "# " << line << '\n';
  out << "state_word,prob\n";
  for (std::size_t i = 0; i < ma.size(); ++i) {
    out << ma.state_word(i) << ',' << format_double(distribution[static_cast<Eigen::Index>(i)]) << '\n';
  }
}

}  // namespace gmlab
