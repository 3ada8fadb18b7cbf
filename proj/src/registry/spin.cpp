#include <cmath>
#include <limits>

#include "gmlab/error.hpp"
#include "gmlab/registry.hpp"

namespace gmlab {

double SpinParams::a(std::size_t i) const { return scale * std::pow(static_cast<double>(i), -exponent); }

double SpinParams::tail(std::size_t n) const { return scale * power_tail(exponent, static_cast<double>(n + 1)); }

namespace {

// phi(t) = e^t / (e^t + e^{-t})
double phi(double t) { return 1.0 / (1.0 + std::exp(-2.0 * t)); }

// max over t of d sqrt(phi(t)) / dt, attained at phi = 1/3.
constexpr double kSqrtPhiLipschitz = 0.3849001794597505;  // 2 / (3 sqrt 3)

class Spin;

/// Shares one coupling sum over the added symbols between all tracked initial contexts.
class SpinTracker final : public ContextTracker {
 public:
  SpinTracker(const Spin& g, std::vector<Context> inits);

  void push(Symbol added) override;
  SymbolDistribution distribution(std::size_t j, const DistributionOptions& options) const override;
  Evaluation evaluate(std::size_t j, Symbol sigma, double tol) const override;
  bool allowed(std::size_t, Symbol sigma) const override { return sigma == 1 || sigma == -1; }
  Context context(std::size_t j) const override;
  std::size_t size() const override { return inits_.size(); }
  std::size_t steps() const override { return added_.size(); }

 private:
  double field(std::size_t j) const;

  const Spin& g_;
  std::vector<Context> inits_;
  std::vector<double> added_;
  mutable double head_sum_ = 0.0;
  mutable std::size_t head_sum_steps_ = std::numeric_limits<std::size_t>::max();
};

class Spin final : public GFunction {
 public:
  Spin(const SpinParams& params, std::size_t capacity) : params_(params) {
    if (!(params.exponent > 1.0) || !(params.scale > 0.0)) {
      throw Error(ErrorKind::kInvalidGfn, "spin needs exponent > 1 and scale > 0");
    }
    // reversed_weights_[t] = a_{capacity - t}, so a_{n-m} is a contiguous slice for the tracker.
    reversed_weights_.resize(capacity);
    for (std::size_t t = 0; t < capacity; ++t) reversed_weights_[t] = params.a(capacity - t);
  }

  std::string name() const override {
    std::string out = "spin:a=pow" + format_double(params_.exponent);
    if (params_.scale != 1.0) out += ",c=" + format_double(params_.scale);
    return out;
  }
  std::string description() const override {
    return "spins +1/-1 with g(+-1,x) = phi(+- sum_i a_i x_i); singular chains when the tail sums are "
           "not square summable";
  }
  const Alphabet& alphabet() const override { return alphabet_; }

  Evaluation evaluate(Symbol sigma, const Context& x, double tol) const override {
    check_tolerance(tol);
    check_symbol(sigma);
    return {phi(sigma * field(x, 0)), 1e-15};
  }

  SymbolDistribution distribution(const Context& x, const DistributionOptions& options) const override {
    check_tolerance(options.tol);
    return from_field(field(x, 0));
  }

  std::optional<double> var_bound(std::size_t n) const override { return std::min(1.0, params_.tail(n)); }

  std::optional<double> svar_sq_bound(std::size_t n) const override {
    const double d = kSqrtPhiLipschitz * 2.0 * params_.tail(n + 1);
    return std::min(2.0, 2.0 * d * d);
  }

  std::optional<double> svar_sq_tail_bound(std::size_t n) const override {
    // tail(m) <= c m^{1-b} / (b-1), so the squared bounds decay like m^{2-2b}.
    const double b = params_.exponent;
    if (2.0 * b - 2.0 <= 1.0) return std::numeric_limits<double>::infinity();
    const double lead = 2.0 * std::pow(2.0 * kSqrtPhiLipschitz * params_.scale / (b - 1.0), 2);
    return lead * std::pow(static_cast<double>(n + 1), 3.0 - 2.0 * b) / (2.0 * b - 3.0);
  }

  std::optional<double> log_var_bound(std::size_t n) const override {
    // |d log phi / dt| <= 2 and the free couplings move the field by at most 2 tail(n).
    return 4.0 * params_.tail(n);
  }

  std::optional<Envelope> example_envelope() const override {
    Envelope env;
    env.K = 2.0;
    env.explicit_probs[1] = 0.5;
    env.explicit_probs[-1] = 0.5;
    env.provenance = Envelope::Provenance::kExampleSpecific;
    return env;
  }

  std::unique_ptr<ContextTracker> make_tracker(std::vector<Context> inits) const override {
    for (const auto& c : inits) check_context(c);
    return std::make_unique<SpinTracker>(*this, std::move(inits));
  }

  /// sum_{i >= 0} a_{offset+1+i} x_i: the field a context contributes when it starts at
  /// coupling index offset+1.
  double field(const Context& x, std::size_t offset) const {
    const std::size_t len = x.head_length();
    const auto head = x.reversed_head();
    double sum = 0.0;
    for (std::size_t j = len; j-- > 0;) {
      const Symbol v = head[len - 1 - j];
      check_symbol(v);
      sum += params_.a(offset + j + 1) * v;
    }
    const std::size_t p = x.tail_period();
    const double pd = static_cast<double>(p);
    for (std::size_t r = 0; r < p; ++r) {
      const Symbol v = x.tail_symbol(r);
      check_symbol(v);
      const double q = static_cast<double>(offset + len + 1 + r) / pd;
      sum += v * params_.scale * std::pow(pd, -params_.exponent) * hurwitz_zeta(params_.exponent, q);
    }
    return sum;
  }

  /// sum_{m < n} added[m] a_{n-m}
  double added_field(const std::vector<double>& added) const {
    const std::size_t n = added.size();
    const std::size_t capacity = reversed_weights_.size();
    if (n <= capacity) {
      return Eigen::Map<const Eigen::VectorXd>(added.data(), static_cast<Eigen::Index>(n))
          .dot(Eigen::Map<const Eigen::VectorXd>(reversed_weights_.data() + (capacity - n), static_cast<Eigen::Index>(n)));
    }
    double sum = 0.0;
    for (std::size_t m = 0; m < n; ++m) sum += added[m] * params_.a(n - m);
    return sum;
  }

  static SymbolDistribution from_field(double t) {
    SymbolDistribution out;
    out.symbols = {1, -1};
    out.probs.resize(2);
    out.probs << phi(t), phi(-t);
    out.error = 1e-15;
    return out;
  }

  static void check_symbol(Symbol v) {
    if (v != 1 && v != -1) throw Error(ErrorKind::kOutsideAlphabet, "spin symbols are +1 and -1");
  }

  void check_context(const Context& x) const {
    for (std::size_t j = 0; j < x.head_length(); ++j) check_symbol(x.coordinate(j));
    for (std::size_t r = 0; r < x.tail_period(); ++r) check_symbol(x.tail_symbol(r));
  }

 private:
  SpinParams params_;
  std::vector<double> reversed_weights_;
  Alphabet alphabet_ = Alphabet::of({1, -1});
};

SpinTracker::SpinTracker(const Spin& g, std::vector<Context> inits) : g_(g), inits_(std::move(inits)) {}

void SpinTracker::push(Symbol added) {
  Spin::check_symbol(added);
  added_.push_back(static_cast<double>(added));
}

double SpinTracker::field(std::size_t j) const {
  if (head_sum_steps_ != added_.size()) {
    head_sum_ = g_.added_field(added_);
    head_sum_steps_ = added_.size();
  }
  return head_sum_ + g_.field(inits_.at(j), added_.size());
}

SymbolDistribution SpinTracker::distribution(std::size_t j, const DistributionOptions&) const {
  return Spin::from_field(field(j));
}

Evaluation SpinTracker::evaluate(std::size_t j, Symbol sigma, double) const {
  Spin::check_symbol(sigma);
  return {phi(sigma * field(j)), 1e-15};
}

Context SpinTracker::context(std::size_t j) const {
  Context out = inits_.at(j);
  for (double v : added_) out.push_front(static_cast<Symbol>(v));
  return out;
}

}  // namespace

GFunctionPtr make_spin(const SpinParams& params, std::size_t capacity) {
  return std::make_shared<Spin>(params, capacity);
}

}  // namespace gmlab
