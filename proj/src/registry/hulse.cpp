#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "gmlab/error.hpp"
#include "gmlab/registry.hpp"

namespace gmlab {

double HulseParams::a(std::size_t n) const {
  return limit + (first - limit) * std::pow(static_cast<double>(n), -rate);
}

namespace {

class Hulse final : public GFunction {
 public:
  explicit Hulse(const HulseParams& params) : params_(params) {
    auto inside = [](double v) { return v > 0.0 && v < 1.0; };
    if (!inside(params.limit) || !inside(params.first) || !(params.rate > 0.0)) {
      throw Error(ErrorKind::kInvalidGfn, "hulse needs a, a1 in (0,1) and q > 0");
    }
    lo_ = std::min(params.limit, params.first);
    hi_ = std::max(params.limit, params.first);
  }

  std::string name() const override {
    return "hulse:a=" + format_double(params_.limit) + ",a1=" + format_double(params_.first) +
           ",q=" + format_double(params_.rate);
  }
  std::string description() const override {
    return "two symbols; g depends on the distance to the first 1 (unique g-measure with no variation "
           "hypothesis)";
  }
  const Alphabet& alphabet() const override { return alphabet_; }

  Evaluation evaluate(Symbol sigma, const Context& x, double tol) const override {
    check_tolerance(tol);
    if (sigma != 0 && sigma != 1) throw Error(ErrorKind::kOutsideAlphabet, "hulse symbols are 0 and 1");
    const double an = a_for(x);
    return {sigma == 0 ? an : 1.0 - an, 0.0};
  }

  std::optional<double> var_bound(std::size_t n) const override {
    return std::abs(params_.first - params_.limit) * std::pow(static_cast<double>(n + 1), -params_.rate);
  }

  std::optional<double> svar_sq_bound(std::size_t n) const override {
    const double d = std::abs(params_.first - params_.limit) * std::pow(static_cast<double>(n + 2), -params_.rate);
    return d * d * (0.25 / lo_ + 0.25 / (1.0 - hi_));
  }

  std::optional<double> svar_sq_tail_bound(std::size_t n) const override {
    const double e = 2.0 * params_.rate;
    if (e <= 1.0) return std::numeric_limits<double>::infinity();
    const double c = std::pow(params_.first - params_.limit, 2) * (0.25 / lo_ + 0.25 / (1.0 - hi_));
    return c * std::pow(static_cast<double>(n + 2), 1.0 - e) / (e - 1.0);
  }

  std::optional<double> log_var_bound(std::size_t n) const override {
    const double an = params_.a(n + 1);
    const double a = params_.limit;
    return std::max(std::abs(std::log(an) - std::log(a)), std::abs(std::log1p(-an) - std::log1p(-a)));
  }

  std::optional<Envelope> example_envelope() const override {
    Envelope env;
    env.K = hi_ + (1.0 - lo_);
    env.explicit_probs[0] = hi_ / env.K;
    env.explicit_probs[1] = (1.0 - lo_) / env.K;
    env.provenance = Envelope::Provenance::kExampleSpecific;
    return env;
  }

 private:
  // a_n with n the position (in sigma.x) of the first 1 after coordinate 0.
  double a_for(const Context& x) const {
    const std::size_t len = x.head_length();
    for (std::size_t j = 0; j < len; ++j) {
      const Symbol v = x.coordinate(j);
      check_symbol(v);
      if (v == 1) return params_.a(j + 1);
    }
    const std::size_t p = x.tail_period();
    for (std::size_t r = 0; r < p; ++r) {
      const Symbol v = x.tail_symbol(r);
      check_symbol(v);
      if (v == 1) return params_.a(len + r + 1);
    }
    return params_.limit;
  }

  static void check_symbol(Symbol v) {
    if (v != 0 && v != 1) throw Error(ErrorKind::kOutsideAlphabet, "hulse contexts use symbols 0 and 1");
  }

  HulseParams params_;
  double lo_;
  double hi_;
  Alphabet alphabet_ = Alphabet::finite(2);
};

}  // namespace

GFunctionPtr make_hulse(const HulseParams& params) { return std::make_shared<Hulse>(params); }

}  // namespace gmlab
