#include "gmlab/hellinger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gmlab/error.hpp"
#include "gmlab/parallel.hpp"

namespace gmlab {

namespace {

void check_entry(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::kInvalidDistribution, "probability entries must be finite and non-negative");
  }
}

double sq_gap(double p, double q) {
  const double r = std::sqrt(p) - std::sqrt(q);
  return r * r;
}

}  // namespace

Interval hellinger_sq(std::span<const double> p, std::span<const double> q, double p_tail, double q_tail) {
  if (p.size() != q.size()) throw Error(ErrorKind::kInvalidDistribution, "vectors differ in length");
  check_entry(p_tail);
  check_entry(q_tail);
  double lo = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    check_entry(p[i]);
    check_entry(q[i]);
    lo += sq_gap(p[i], q[i]);
  }
  return {lo, lo + p_tail + q_tail};
}

Interval hellinger_sq(const SymbolDistribution& p, const SymbolDistribution& q) {
  check_entry(p.tail_mass);
  check_entry(q.tail_mass);
  double lo = 0.0;
  double p_tail = p.tail_mass;
  double q_tail = q.tail_mass;
  // both are in enumeration order, but a symbol may be enumerated by one side only
  std::vector<bool> q_used(q.symbols.size(), false);
  for (std::size_t i = 0; i < p.symbols.size(); ++i) {
    const double pi = p.probs[static_cast<Eigen::Index>(i)];
    check_entry(pi);
    const auto it = std::find(q.symbols.begin(), q.symbols.end(), p.symbols[i]);
    if (it != q.symbols.end()) {
      const auto k = static_cast<std::size_t>(it - q.symbols.begin());
      q_used[k] = true;
      lo += sq_gap(pi, q.probs[static_cast<Eigen::Index>(k)]);
    } else if (q.tail_mass == 0.0) {
      lo += pi;
    } else {
      p_tail += pi;
    }
  }
  for (std::size_t k = 0; k < q.symbols.size(); ++k) {
    if (q_used[k]) continue;
    const double qk = q.probs[static_cast<Eigen::Index>(k)];
    check_entry(qk);
    if (p.tail_mass == 0.0) {
      lo += qk;
    } else {
      q_tail += qk;
    }
  }
  return {lo, lo + p_tail + q_tail};
}

double tlog(double x) {
  if (x < 0.0 || std::isnan(x)) throw Error(ErrorKind::kInvalidDistribution, "tlog of a negative number");
  const double l = std::log(x);
  if (std::abs(l) < 1.0) return l;
  return l > 0.0 ? 1.0 : -1.0;
}

HellingerRecord step_update(HellingerRecord rec, const SymbolDistribution& pi, const SymbolDistribution& pi_tilde,
                            Symbol sigma) {
  const double p = pi.prob(sigma).value_or(0.0);
  const double pt = pi_tilde.prob(sigma).value_or(0.0);
  if (!(pt > 0.0)) {
    throw Error(ErrorKind::kInvalidDistribution,
                "observed symbol " + std::to_string(sigma) + " is outside the sampling distribution's support");
  }
  ++rec.n;
  rec.d = hellinger_sq(pi, pi_tilde);
  rec.d.hi = std::min(rec.d.hi, 2.0);
  rec.d.lo = std::min(rec.d.lo, rec.d.hi);
  rec.B += rec.d.mid();
  rec.B_width += rec.d.width();
  if (p > 0.0) {
    rec.alpha = pt / p;
    rec.logZ += std::log(rec.alpha);
  } else {
    rec.alpha = std::numeric_limits<double>::infinity();
    rec.logZ = std::numeric_limits<double>::infinity();
    rec.singular = true;
  }
  rec.Y += tlog(rec.alpha);
  return rec;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kConverges: return "converges";
    case Verdict::kDiverges: return "diverges";
    case Verdict::kInconclusive: return "inconclusive";
    case Verdict::kNotLocallyAc: return "not_locally_ac";
  }
  return "?";
}

double PathTrace::B_at(std::size_t n) const {
  const auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), n);
  if (it == checkpoints.end() || *it != n) {
    throw Error(ErrorKind::kConfig, "step " + std::to_string(n) + " is not a recorded checkpoint");
  }
  return B[static_cast<std::size_t>(it - checkpoints.begin())];
}

std::vector<std::size_t> acs_checkpoints(std::size_t steps) {
  std::set<std::size_t> out;
  for (std::size_t n = steps; n >= 1; n >>= 1) out.insert(n);
  for (std::size_t p = 1; p <= steps; p *= 10) out.insert(p);
  for (int k = 0;; ++k) {
    const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, k / 16.0)));
    if (n > steps) break;
    out.insert(n);
  }
  return {out.begin(), out.end()};
}

namespace {

std::vector<std::size_t> range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(i);
  return out;
}

std::vector<double> weights_of(const InitialCondition& init) {
  std::vector<double> out;
  for (const auto& [w, ctx] : init.components()) out.push_back(w);
  return out;
}

double last_decade_slope(const PathTrace& trace, std::size_t steps) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < trace.checkpoints.size(); ++i) {
    const std::size_t n = trace.checkpoints[i];
    if (10 * n < steps) continue;
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(trace.B[i]);
  }
  if (x.size() < 2) return 0.0;
  return least_squares(x, y).slope;
}

PathTrace run_path(const GFunction& g, const InitialCondition& null_init, const InitialCondition& sampled_init,
                   const AcsOptions& options, const std::vector<std::size_t>& checkpoints,
                   const std::vector<double>& bounds, std::size_t path) {
  std::vector<Context> contexts;
  for (const auto& [w, ctx] : null_init.components()) contexts.push_back(ctx);
  for (const auto& [w, ctx] : sampled_init.components()) contexts.push_back(ctx);
  const std::size_t na = null_init.components().size();
  auto tracker = g.make_tracker(contexts);
  MixturePredictive null(g.alphabet(), range(0, na), weights_of(null_init));
  MixturePredictive sampled(g.alphabet(), range(na, contexts.size()), weights_of(sampled_init));

  RngStream rng(options.seed, path);
  PathTrace trace;
  HellingerRecord rec;
  std::size_t next_checkpoint = 0;
  const double tol = options.distribution.tol;
  for (std::size_t n = 1; n <= options.steps; ++n) {
    const SymbolDistribution pa = null.distribution(*tracker, options.distribution);
    const SymbolDistribution pb = sampled.distribution(*tracker, options.distribution);
    const Symbol sigma = sample_symbol(pb, rng.uniform(), nullptr, options.distribution.cutoff);
    rec = step_update(rec, pa, pb, sigma);
    trace.witness.symbols.push_back(sigma);
    if (rec.singular) {
      trace.singular_step = n;
      return trace;
    }
    if (n >= 2 && n - 2 < bounds.size()) {
      ++trace.bound_checks;
      const double excess = rec.d.lo - bounds[n - 2];
      trace.max_bound_excess = std::max(trace.max_bound_excess, excess);
      if (excess > tol) ++trace.bound_violations;
    }
    null.observe(*tracker, sigma, tol);
    sampled.observe(*tracker, sigma, tol);
    tracker->push(sigma);
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == n) {
      trace.checkpoints.push_back(n);
      trace.B.push_back(rec.B);
      trace.B_width.push_back(rec.B_width);
      trace.logZ.push_back(rec.logZ);
      trace.Y.push_back(rec.Y);
      ++next_checkpoint;
    }
  }
  trace.witness.symbols.clear();
  trace.slope = last_decade_slope(trace, options.steps);
  return trace;
}

}  // namespace

AcsResult acs_diagnostic(const GFunction& g, const InitialCondition& init_a, const InitialCondition& init_b,
                         const AcsOptions& options) {
  if (options.paths < 8) throw Error(ErrorKind::kConfig, "the diagnostic needs at least 8 paths");
  if (options.steps < 100) throw Error(ErrorKind::kConfig, "the diagnostic needs at least 100 steps");
  const InitialCondition& null_init = options.swap ? init_b : init_a;
  const InitialCondition& sampled_init = options.swap ? init_a : init_b;

  AcsResult result;
  std::vector<double> bounds;
  if (null_init.is_point() && sampled_init.is_point() && g.svar_sq_bound(0)) {
    result.bound_available = true;
    bounds.resize(options.steps >= 2 ? options.steps - 1 : 0);
    for (std::size_t m = 0; m < bounds.size(); ++m) bounds[m] = *g.svar_sq_bound(m);
  }

  const auto checkpoints = acs_checkpoints(options.steps);
  result.traces.resize(options.paths);
  parallel_for(options.paths, [&](std::size_t i) {
    result.traces[i] = run_path(g, null_init, sampled_init, options, checkpoints, bounds, i);
  });

  for (std::size_t i = 0; i < result.traces.size(); ++i) {
    const auto& t = result.traces[i];
    result.bound_violations += t.bound_violations;
    if (t.singular_step && !result.singular_witness) {
      result.singular_witness = SingularWitness{i, *t.singular_step, t.witness};
    }
  }
  if (result.singular_witness) {
    result.verdict = Verdict::kNotLocallyAc;
    return result;
  }

  const std::size_t n = options.steps;
  std::vector<double> slopes;
  std::vector<double> increments;
  std::size_t small = 0;
  for (const auto& t : result.traces) {
    slopes.push_back(t.slope);
    const auto upper = [&](std::size_t m) {
      const auto it = std::lower_bound(t.checkpoints.begin(), t.checkpoints.end(), m);
      const auto k = static_cast<std::size_t>(it - t.checkpoints.begin());
      return std::pair{t.B[k], t.B_width[k]};
    };
    const auto [b1, w1] = upper(n);
    const auto [b2, w2] = upper(n / 2);
    const auto [b4, w4] = upper(n / 4);
    // interval widths count against convergence
    const double inc = std::max(b1 - b2 + 0.5 * (w1 - w2), b2 - b4 + 0.5 * (w2 - w4));
    increments.push_back(inc);
    if (inc < options.increment_threshold) ++small;
  }
  result.converged_fraction = static_cast<double>(small) / static_cast<double>(result.traces.size());
  result.final_increment_q95 = quantile(increments, 0.95);
  result.slope = median(slopes);

  Rng rng = stream_rng(options.seed, std::numeric_limits<std::uint64_t>::max());
  std::vector<double> medians;
  medians.reserve(options.bootstrap);
  std::vector<double> resample(slopes.size());
  for (std::size_t b = 0; b < options.bootstrap; ++b) {
    for (auto& v : resample) {
      const auto k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(slopes.size()));
      v = slopes[std::min(k, slopes.size() - 1)];
    }
    medians.push_back(median(resample));
  }
  if (!medians.empty()) result.slope_ci = {quantile(medians, 0.025), quantile(medians, 0.975)};

  if (result.converged_fraction >= options.converged_fraction) {
    result.verdict = Verdict::kConverges;
  } else if (result.slope > options.slope_threshold && result.slope_ci.first > 0.0) {
    result.verdict = Verdict::kDiverges;
  } else {
    result.verdict = Verdict::kInconclusive;
  }
  return result;
}

CInequalityScan c_inequality_scan(std::span<const double> grid) {
  CInequalityScan out;
  for (double x : grid) {
    if (!(x >= 0.0) || x == 1.0 || !std::isfinite(x)) continue;
    const double t = tlog(x);
    const double middle = x * t + x * t * t + 1.0 - x;
    const double r = 1.0 - std::sqrt(x);
    const double denom = r * r;
    if (!(denom > 0.0) || !(middle > 0.0)) continue;
    const double ratio = middle / denom;
    const double c = std::max(ratio, 1.0 / ratio);
    if (out.points++ == 0 || c > out.C) {
      out.C = c;
      out.argmax = x;
    }
  }
  return out;
}

}  // namespace gmlab
