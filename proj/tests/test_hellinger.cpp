#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gmlab/error.hpp"
#include "gmlab/hellinger.hpp"
#include "support.hpp"

using namespace gmlab;
using gmlab::testing::table;

namespace {

SymbolDistribution dist(std::vector<Symbol> symbols, std::vector<double> probs, double tail = 0.0) {
  SymbolDistribution d;
  d.symbols = std::move(symbols);
  d.probs = Eigen::Map<Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
  d.tail_mass = tail;
  return d;
}

double oracle_sq(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::pow(std::sqrt(p[i]) - std::sqrt(q[i]), 2);
  return s;
}

}  // namespace

TEST(HellingerSq, Examples) {
  const std::vector<double> a = {0.5, 0.5};
  const std::vector<double> b = {0.25, 0.75};
  EXPECT_EQ(hellinger_sq(a, a).hi, 0.0);
  const std::vector<double> e0 = {1.0, 0.0};
  const std::vector<double> e1 = {0.0, 1.0};
  EXPECT_EQ(hellinger_sq(e0, e1).lo, 2.0);
  const auto d = hellinger_sq(a, b);
  EXPECT_NEAR(d.lo, oracle_sq(a, b), 1e-16);
  EXPECT_NEAR(d.lo, 0.06815, 1e-5);
  EXPECT_EQ(d.lo, d.hi);
}

TEST(HellingerSq, TailsWidenUpperEnd) {
  const std::vector<double> p = {0.5, 0.4};
  const std::vector<double> q = {0.45, 0.45};
  const auto d = hellinger_sq(p, q, 0.1, 0.1);
  EXPECT_NEAR(d.hi - d.lo, 0.2, 1e-16);
  EXPECT_THROW(hellinger_sq(std::vector<double>{-0.1, 1.1}, std::vector<double>{0.5, 0.5}), Error);
  EXPECT_THROW(hellinger_sq(std::vector<double>{1.0}, std::vector<double>{0.5, 0.5}), Error);
}

TEST(HellingerSq, AlignsBySymbol) {
  // finite supports {0,1,2} and {1,2,3}: unmatched symbols are exact zeros on the other side
  const auto p = dist({0, 1, 2}, {0.2, 0.3, 0.5});
  const auto q = dist({1, 2, 3}, {0.1, 0.6, 0.3});
  const auto d = hellinger_sq(p, q);
  EXPECT_NEAR(d.lo, oracle_sq({0.2, 0.3, 0.5, 0.0}, {0.0, 0.1, 0.6, 0.3}), 1e-15);
  EXPECT_EQ(d.lo, d.hi);
  // with a tail on q, p's unmatched mass moves into the interval width
  const auto qt = dist({1, 2}, {0.1, 0.6}, 0.3);
  const auto e = hellinger_sq(p, qt);
  EXPECT_NEAR(e.lo, oracle_sq({0.3, 0.5}, {0.1, 0.6}), 1e-15);
  EXPECT_NEAR(e.hi, e.lo + 0.2 + 0.3, 1e-15);
}

TEST(Tlog, Branches) {
  EXPECT_EQ(tlog(1.0), 0.0);
  EXPECT_EQ(tlog(std::exp(2.0)), 1.0);
  EXPECT_NEAR(tlog(std::exp(0.5)), 0.5, 1e-15);
  EXPECT_NEAR(tlog(std::exp(-0.5)), -0.5, 1e-15);
  EXPECT_EQ(tlog(0.0), -1.0);
  EXPECT_EQ(tlog(std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_EQ(tlog(std::numbers::e), 1.0);
}

TEST(StepUpdate, Examples) {
  const auto a = dist({0, 1}, {0.5, 0.5});
  const auto b = dist({0, 1}, {0.25, 0.75});
  const auto same = step_update({}, a, a, 1);
  EXPECT_EQ(same.alpha, 1.0);
  EXPECT_EQ(same.d.mid(), 0.0);
  EXPECT_EQ(same.B, 0.0);
  EXPECT_EQ(same.logZ, 0.0);
  EXPECT_EQ(same.n, 1u);
  const auto r = step_update({}, a, b, 1);
  EXPECT_NEAR(r.alpha, 1.5, 1e-15);
  EXPECT_NEAR(r.d.mid(), oracle_sq({0.5, 0.5}, {0.25, 0.75}), 1e-16);
  EXPECT_NEAR(r.logZ, std::log(1.5), 1e-15);
  EXPECT_NEAR(r.Y, std::log(1.5), 1e-15);
  const auto r2 = step_update(r, a, b, 0);
  EXPECT_NEAR(r2.B, 2.0 * r.B, 1e-16);
  EXPECT_NEAR(r2.logZ, std::log(1.5) + std::log(0.5), 1e-15);
}

TEST(StepUpdate, SingularWitness) {
  const auto a = dist({0, 1}, {1.0, 0.0});
  const auto b = dist({0, 1}, {0.5, 0.5});
  const auto r = step_update({}, a, b, 1);
  EXPECT_TRUE(r.singular);
  EXPECT_TRUE(std::isinf(r.alpha));
  EXPECT_EQ(r.Y, 1.0);
  EXPECT_THROW(step_update({}, b, a, 1), Error);
}

namespace {

struct Enumerated {
  double mu = 1.0;
  double mu_tilde = 1.0;
  double Z = 1.0;
  HellingerRecord rec;
};

// All words of length n with their probabilities under both chains.
std::vector<Enumerated> enumerate(const GFunction& g, const InitialCondition& a, const InitialCondition& b,
                                  std::size_t n, std::vector<Word>* words) {
  std::vector<Enumerated> out;
  const std::size_t size = *g.alphabet().size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= size;
  for (std::size_t code = 0; code < count; ++code) {
    Enumerated e;
    Word added{{}, Word::Orientation::kChainAdded};
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      const Symbol s = g.alphabet().at(c % size);
      c /= size;
      const auto pa = conditional_distribution(g, added, a);
      const auto pb = conditional_distribution(g, added, b);
      e.mu *= *pa.prob(s);
      e.mu_tilde *= *pb.prob(s);
      e.rec = step_update(e.rec, pa, pb, s);
      added.symbols.push_back(s);
    }
    e.Z = std::exp(e.rec.logZ);
    out.push_back(e);
    if (words) words->push_back(added);
  }
  return out;
}

}  // namespace

TEST(LikelihoodRatio, MartingaleUnderNullChain) {
  const auto g = table(2, 1, {0.3, 0.7, 0.6, 0.4});
  const auto a = InitialCondition::point(Context::constant(0));
  const auto b = InitialCondition::point(Context::constant(1));
  for (std::size_t n = 1; n <= 8; ++n) {
    double expectation = 0.0;
    double mass = 0.0;
    for (const auto& e : enumerate(*g, a, b, n, nullptr)) {
      expectation += e.mu * e.Z;
      mass += e.mu;
      EXPECT_NEAR(e.Z, e.mu_tilde / e.mu, 1e-12);
    }
    EXPECT_NEAR(mass, 1.0, 1e-12);
    EXPECT_NEAR(expectation, 1.0, 1e-12);
  }
}

TEST(LikelihoodRatio, HellingerIdentityByEnumeration) {
  const auto g = table(3, 2, {0.2, 0.3, 0.5, 0.1, 0.1, 0.8, 0.3, 0.3, 0.4, 0.5, 0.25, 0.25, 0.6, 0.2, 0.2,
                              0.1, 0.6, 0.3, 0.4, 0.4, 0.2, 0.9, 0.05, 0.05, 1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto a = InitialCondition::point(parse_context("word:0,2;tail=1"));
  const auto b = InitialCondition::point(parse_context("word:2,1;tail=0"));
  std::vector<Word> words;
  enumerate(*g, a, b, 3, &words);
  for (const auto& w : words) {
    const auto pa = conditional_distribution(*g, w, a);
    const auto pb = conditional_distribution(*g, w, b);
    double integral = 0.0;
    for (Symbol s = 0; s < 3; ++s) integral += *pa.prob(s) * std::pow(1.0 - std::sqrt(*pb.prob(s) / *pa.prob(s)), 2);
    EXPECT_NEAR(integral, hellinger_sq(pa, pb).mid(), 1e-12);
  }
}

TEST(LikelihoodRatio, ChangeOfMeasure) {
  const auto g = table(2, 1, {0.3, 0.7, 0.6, 0.4});
  const auto a = InitialCondition::point(Context::constant(0));
  const auto b = InitialCondition::point(Context::constant(1));
  Rng rng = stream_rng(2, 0);
  const auto words = enumerate(*g, a, b, 6, nullptr);
  for (int trial = 0; trial < 20; ++trial) {
    double lhs = 0.0;
    double rhs = 0.0;
    for (const auto& e : words) {
      const double f = 2.0 * uniform01(rng) - 1.0;
      lhs += f * e.mu_tilde;
      rhs += e.Z * f * e.mu;
    }
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(Checkpoints, DyadicDecadalAndDense) {
  const auto cps = acs_checkpoints(100000);
  const auto has = [&](std::size_t n) { return std::binary_search(cps.begin(), cps.end(), n); };
  for (std::size_t n : {1u, 10u, 100u, 1000u, 10000u, 100000u, 50000u, 25000u, 12500u}) EXPECT_TRUE(has(n)) << n;
  EXPECT_TRUE(std::is_sorted(cps.begin(), cps.end()));
  EXPECT_GE(cps.size(), 80u);
  EXPECT_EQ(cps.back(), 100000u);
}

TEST(AcsDiagnostic, IdenticalInitsConverge) {
  const auto g = make_gfunction("spin:a=pow1.5");
  const auto init = InitialCondition::point(Context::constant(1));
  AcsOptions options;
  options.paths = 8;
  options.steps = 2000;
  options.seed = 1;
  const auto r = acs_diagnostic(*g, init, init, options);
  EXPECT_EQ(r.verdict, Verdict::kConverges);
  for (const auto& t : r.traces) {
    for (double b : t.B) EXPECT_EQ(b, 0.0);
    for (double z : t.logZ) EXPECT_EQ(z, 0.0);
  }
}

TEST(AcsDiagnostic, FiniteDepthMerges) {
  const auto g = table(2, 3, {0.1, 0.9, 0.4, 0.6, 0.7, 0.3, 0.2, 0.8, 0.5, 0.5, 0.35, 0.65, 0.9, 0.1, 0.6, 0.4});
  AcsOptions options;
  options.paths = 8;
  options.steps = 500;
  options.seed = 4;
  const auto r = acs_diagnostic(*g, InitialCondition::point(Context::constant(0)),
                                InitialCondition::point(Context::constant(1)), options);
  EXPECT_EQ(r.verdict, Verdict::kConverges);
  EXPECT_EQ(r.bound_violations, 0u);
  for (const auto& t : r.traces) {
    const double b3 = t.B_at(3);
    EXPECT_GT(b3, 0.0);
    for (std::size_t i = 0; i < t.checkpoints.size(); ++i) {
      if (t.checkpoints[i] >= 3) EXPECT_EQ(t.B[i], b3);
    }
  }
}

TEST(AcsDiagnostic, SingularWitnessShortCircuits) {
  const auto g = make_gfunction("randomwalk");
  AcsOptions options;
  options.paths = 8;
  options.steps = 100;
  const auto r = acs_diagnostic(*g, InitialCondition::point(Context::constant(0)),
                                InitialCondition::point(Context::constant(5)), options);
  EXPECT_EQ(r.verdict, Verdict::kNotLocallyAc);
  ASSERT_TRUE(r.singular_witness.has_value());
  EXPECT_EQ(r.singular_witness->step, 1u);
  EXPECT_EQ(r.singular_witness->cylinder.size(), 1u);
}

TEST(AcsDiagnostic, InvariantsAlongSpinPaths) {
  const auto g = make_gfunction("spin:a=pow1.5");
  AcsOptions options;
  options.paths = 8;
  options.steps = 3000;
  options.seed = 9;
  const auto r = acs_diagnostic(*g, InitialCondition::point(Context::constant(1)),
                                InitialCondition::point(Context::constant(-1)), options);
  EXPECT_TRUE(r.bound_available);
  EXPECT_EQ(r.bound_violations, 0u);
  for (const auto& t : r.traces) {
    EXPECT_GT(t.bound_checks, 0u);
    EXPECT_TRUE(std::is_sorted(t.B.begin(), t.B.end()));
    for (std::size_t i = 1; i < t.B.size(); ++i) {
      const double steps = static_cast<double>(t.checkpoints[i] - t.checkpoints[i - 1]);
      EXPECT_LE(t.B[i] - t.B[i - 1], 2.0 * steps);
    }
  }
}

TEST(AcsDiagnostic, SwapSamplesUnderFirstInit) {
  const auto g = table(2, 1, {0.3, 0.7, 0.6, 0.4});
  const auto a = InitialCondition::point(Context::constant(0));
  const auto b = InitialCondition::point(Context::constant(1));
  AcsOptions options;
  options.paths = 8;
  options.steps = 100;
  options.seed = 3;
  options.swap = true;
  const auto swapped = acs_diagnostic(*g, a, b, options);
  options.swap = false;
  const auto direct = acs_diagnostic(*g, b, a, options);
  EXPECT_EQ(swapped.traces[0].logZ, direct.traces[0].logZ);
}

TEST(AcsDiagnostic, RejectsTinyRuns) {
  const auto g = table(2, 1, {0.3, 0.7, 0.6, 0.4});
  const auto a = InitialCondition::point(Context::constant(0));
  AcsOptions options;
  options.paths = 4;
  EXPECT_THROW(acs_diagnostic(*g, a, a, options), Error);
  options.paths = 8;
  options.steps = 50;
  EXPECT_THROW(acs_diagnostic(*g, a, a, options), Error);
}

TEST(CInequality, ScanIsFinite) {
  const std::vector<double> zero = {0.0};
  const auto at_zero = c_inequality_scan(zero);
  EXPECT_EQ(at_zero.points, 1u);
  EXPECT_DOUBLE_EQ(at_zero.C, 1.0);
  const std::vector<double> one = {1.0};
  EXPECT_EQ(c_inequality_scan(one).points, 0u);

  std::vector<double> grid;
  for (int i = 0; i < 10000; ++i) grid.push_back(std::pow(10.0, -6.0 + 9.0 * i / 9999.0));
  const auto scan = c_inequality_scan(grid);
  EXPECT_EQ(scan.points, grid.size() - static_cast<std::size_t>(std::count(grid.begin(), grid.end(), 1.0)));
  EXPECT_TRUE(std::isfinite(scan.C));
  EXPECT_GE(scan.C, 1.0);
  RecordProperty("C", std::to_string(scan.C));
}
