#include <cmath>
#include <limits>

#include "gmlab/error.hpp"
#include "gmlab/registry.hpp"

namespace gmlab {

double Ex11Params::p(std::size_t i) const {
  if (i == 0) return 0.0;
  if (weights == Weights::kGeometric) {
    const double r = 1.0 / weight_parameter;
    return (1.0 - r) * std::pow(r, static_cast<double>(i - 1));
  }
  return std::pow(static_cast<double>(i), -weight_parameter) / riemann_zeta(weight_parameter);
}

double Ex11Params::p_tail(std::size_t m) const {
  if (m <= 1) return 1.0;
  if (weights == Weights::kGeometric) return std::pow(1.0 / weight_parameter, static_cast<double>(m - 1));
  return power_tail(weight_parameter, static_cast<double>(m)) / riemann_zeta(weight_parameter);
}

std::string Ex11Params::weights_name() const {
  return (weights == Weights::kGeometric ? "geom" : "zeta") + format_double(weight_parameter);
}

namespace {

class Ex11 final : public GFunction {
 public:
  explicit Ex11(const Ex11Params& params)
      : params_(params), s_(3.0 + params.alpha), zeta_s_(riemann_zeta(3.0 + params.alpha)) {
    if (!(params.alpha > 0.0)) throw Error(ErrorKind::kInvalidGfn, "ex11 needs alpha > 0");
    if (params.weights == Ex11Params::Weights::kGeometric && !(params.weight_parameter > 1.0)) {
      throw Error(ErrorKind::kInvalidGfn, "ex11 geometric weights need R > 1");
    }
    if (params.weights == Ex11Params::Weights::kZeta && !(params.weight_parameter > 1.0)) {
      throw Error(ErrorKind::kInvalidGfn, "ex11 zeta weights need s > 1");
    }
  }

  std::string name() const override {
    return "ex11:alpha=" + format_double(params_.alpha) + ",p=" + params_.weights_name();
  }
  std::string description() const override {
    return "countable alphabet; g(i,x) = p_i b(x), g(0,x) = 1 - b(x); summable s-variation but "
           "infinite variation of log g";
  }
  const Alphabet& alphabet() const override { return alphabet_; }

  Evaluation evaluate(Symbol sigma, const Context& x, double tol) const override {
    check_tolerance(tol);
    if (sigma < 0) throw Error(ErrorKind::kOutsideAlphabet, "ex11 symbols are non-negative");
    const Evaluation b = weight(x, tol);
    if (sigma == 0) return {1.0 - b.value, b.error};
    const double p = params_.p(static_cast<std::size_t>(sigma));
    return {p * b.value, p * b.error};
  }

  SymbolDistribution distribution(const Context& x, const DistributionOptions& options) const override {
    check_tolerance(options.tol);
    const Evaluation b = weight(x, options.tol);
    std::vector<double> probs{1.0 - b.value};
    SymbolDistribution out;
    out.symbols.push_back(0);
    std::size_t m = 1;
    while ((b.value + b.error) * params_.p_tail(m) > options.cutoff) {
      if (m >= options.max_symbols) throw Error(ErrorKind::kHeavyTail, name() + ": tail mass above cutoff");
      out.symbols.push_back(static_cast<Symbol>(m));
      probs.push_back(params_.p(m) * b.value);
      ++m;
    }
    out.tail_mass = (b.value + b.error) * params_.p_tail(m);
    out.error = b.error;
    out.probs = Eigen::Map<const Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
    return out;
  }

  double tail_mass_bound(const Context& x, std::size_t m) const override {
    if (m == 0) return 1.0;
    const Evaluation b = weight(x, 1e-12);
    return (b.value + b.error) * params_.p_tail(m);
  }

  std::optional<double> var_bound(std::size_t n) const override {
    return power_tail(s_, static_cast<double>(n + 1)) / zeta_s_;
  }

  /// var_n b as a function of its own argument: coordinates 0..n fixed, weights k >= n+2 free.
  double weight_var_bound(std::size_t n) const { return power_tail(s_, static_cast<double>(n + 2)) / zeta_s_; }

  std::optional<double> svar_sq_bound(std::size_t n) const override { return std::sqrt(weight_var_bound(n)); }

  std::optional<double> svar_sq_tail_bound(std::size_t n) const override {
    // sqrt(var_m b) <= C (m+1)^{-e} with e = (s-1)/2 > 1; integral comparison for the sum over m > n.
    const double e = 0.5 * (s_ - 1.0);
    const double c = 1.0 / std::sqrt((s_ - 1.0) * zeta_s_);
    return c * std::pow(static_cast<double>(n + 1), 1.0 - e) / (e - 1.0);
  }

  std::optional<double> log_var_bound(std::size_t) const override {
    // b can be made arbitrarily small by large symbols, so log g oscillates without bound.
    return std::numeric_limits<double>::infinity();
  }

  std::optional<Envelope> example_envelope() const override {
    Envelope env;
    env.K = 2.0;
    env.explicit_probs[0] = 0.5;
    env.tail.start = 1;
    if (params_.weights == Ex11Params::Weights::kGeometric) {
      env.tail.form = EnvelopeTail::Form::kGeometric;
      env.tail.first = 0.5 * params_.p(1);
      env.tail.ratio = 1.0 / params_.weight_parameter;
    } else {
      env.tail.form = EnvelopeTail::Form::kPower;
      env.tail.exponent = params_.weight_parameter;
      env.tail.scale = 0.5 / riemann_zeta(params_.weight_parameter);
    }
    env.provenance = Envelope::Provenance::kExampleSpecific;
    return env;
  }

  /// b(x) with certified error.
  Evaluation weight(const Context& x, double tol) const {
    const std::size_t len = x.head_length();
    const auto head = x.reversed_head();  // head[len-1-j] is coordinate j
    // Truncation index beyond which the remaining weight sum is below tol/2.
    const double cut_real = std::ceil(std::pow(0.5 * tol * zeta_s_ * (s_ - 1.0), -1.0 / (s_ - 1.0)));
    const std::size_t cut = cut_real > 1e12 ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(cut_real);
    double sum = 0.0;
    if (len <= cut) {
      for (std::size_t j = len; j-- > 0;) {
        const Symbol v = head[len - 1 - j];
        check_symbol(v);
        sum += std::pow(static_cast<double>(j + 1), -s_) / (1.0 + v);
      }
      // Tail coordinates j = len + r + m p carry weights k = j + 1.
      const std::size_t p = x.tail_period();
      for (std::size_t r = 0; r < p; ++r) {
        const Symbol v = x.tail_symbol(r);
        check_symbol(v);
        const double q = static_cast<double>(len + 1 + r) / static_cast<double>(p);
        sum += std::pow(static_cast<double>(p), -s_) * hurwitz_zeta(s_, q) / (1.0 + v);
      }
      // b lies in (0, 1]; rounding must not push g(i x) above p_i
      return {std::min(1.0, sum / zeta_s_), 4e-16 * (1.0 + sum / zeta_s_)};
    }
    for (std::size_t j = cut; j-- > 0;) {
      const Symbol v = head[len - 1 - j];
      check_symbol(v);
      sum += std::pow(static_cast<double>(j + 1), -s_) / (1.0 + v);
    }
    const double rest = power_tail(s_, static_cast<double>(cut + 1)) / zeta_s_;
    return {std::min(1.0, sum / zeta_s_ + 0.5 * rest), 0.5 * rest + 4e-16};
  }

 private:
  static void check_symbol(Symbol v) {
    if (v < 0) throw Error(ErrorKind::kOutsideAlphabet, "ex11 contexts use non-negative symbols");
  }

  Ex11Params params_;
  double s_;
  double zeta_s_;
  Alphabet alphabet_ = Alphabet::naturals();
};

}  // namespace

GFunctionPtr make_ex11(const Ex11Params& params) { return std::make_shared<Ex11>(params); }

}  // namespace gmlab
