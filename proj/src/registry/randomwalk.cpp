#include <algorithm>
#include <limits>

#include "gmlab/error.hpp"
#include "gmlab/registry.hpp"

namespace gmlab {

namespace {

class RandomWalkThird final : public GFunction {
 public:
  std::string name() const override { return "randomwalk"; }
  std::string description() const override {
    return "integers with |x_n - x_{n+1}| <= 1 and g = 1/3: a g-function with no finite g-measure";
  }
  const Alphabet& alphabet() const override { return alphabet_; }
  std::optional<std::size_t> depth() const override { return 1; }

  bool allowed(Symbol sigma, const Context& x) const override {
    const auto d = static_cast<std::int64_t>(sigma) - x.coordinate(0);
    return d >= -1 && d <= 1;
  }

  std::optional<std::vector<Symbol>> finite_support(const Context& x) const override {
    const Symbol c = x.coordinate(0);
    std::vector<Symbol> out{c - 1, c, c + 1};
    std::sort(out.begin(), out.end(),
              [this](Symbol a, Symbol b) { return alphabet_.index_of(a) < alphabet_.index_of(b); });
    return out;
  }

  Evaluation evaluate(Symbol sigma, const Context& x, double tol) const override {
    check_tolerance(tol);
    if (!allowed(sigma, x)) {
      throw Error(ErrorKind::kOutsideSubshift, "symbol " + std::to_string(sigma) + " may not precede " +
                                                   std::to_string(x.coordinate(0)));
    }
    return {1.0 / 3.0, 0.0};
  }

  double tail_mass_bound(const Context& x, std::size_t m) const override {
    double mass = 0.0;
    for (Symbol s : *finite_support(x)) {
      if (alphabet_.index_of(s) >= m) mass += 1.0 / 3.0;
    }
    return mass;
  }

  std::optional<double> var_bound(std::size_t n) const override { return n == 0 ? 1.0 / 3.0 : 0.0; }
  std::optional<double> svar_sq_bound(std::size_t) const override { return 0.0; }
  std::optional<double> svar_sq_tail_bound(std::size_t) const override { return 0.0; }
  std::optional<double> log_var_bound(std::size_t n) const override {
    return n == 0 ? std::numeric_limits<double>::infinity() : 0.0;
  }

  Context random_context(Rng& rng, std::size_t head_length) const override {
    return walk_from(rng, random_symbol(rng), head_length, true);
  }

  Context random_extension(Rng& rng, const Context& x, std::size_t keep, std::size_t extra) const override {
    if (keep == 0) return random_context(rng, extra);
    const Context rest = walk_from(rng, x.coordinate(keep - 1), extra, false);
    return x.with_suffix(keep, rest);
  }

  std::vector<Context> corner_contexts() const override {
    return {Context::constant(0), Context::constant(1000000), Context::constant(-1000000),
            Context::periodic({0, 1})};
  }

 private:
  // Admissible walk; when include_start the start symbol is coordinate 0, otherwise the walk
  // continues after it.
  static Context walk_from(Rng& rng, Symbol start, std::size_t length, bool include_start) {
    std::vector<Symbol> head;
    Symbol current = start;
    if (include_start && length > 0) {
      head.push_back(current);
      --length;
    }
    for (std::size_t i = 0; i < length; ++i) {
      current += static_cast<Symbol>(rng() % 3) - 1;
      head.push_back(current);
    }
    if (head.empty() && include_start) return Context::constant(start);
    const Symbol fill = head.empty() ? start : head.back();
    return Context(head, ConstantTail{fill});
  }

  Alphabet alphabet_ = Alphabet::integers();
};

}  // namespace

GFunctionPtr make_randomwalk_third() { return std::make_shared<RandomWalkThird>(); }

}  // namespace gmlab
