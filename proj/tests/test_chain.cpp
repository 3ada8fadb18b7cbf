#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "gmlab/chain.hpp"
#include "gmlab/error.hpp"
#include "support.hpp"

using namespace gmlab;
using gmlab::testing::binary_table;
using gmlab::testing::table;

namespace {

SymbolDistribution two_point(double p) {
  SymbolDistribution d;
  d.symbols = {0, 1};
  d.probs.resize(2);
  d.probs << p, 1.0 - p;
  return d;
}

}  // namespace

TEST(InitialCondition, MixtureWeightsValidated) {
  EXPECT_NO_THROW(InitialCondition::mixture({{0.25, Context::constant(0)}, {0.75, Context::constant(1)}}));
  EXPECT_THROW(InitialCondition::mixture({{0.5, Context::constant(0)}, {0.4, Context::constant(1)}}), Error);
  EXPECT_THROW(InitialCondition::mixture({{1.5, Context::constant(0)}, {-0.5, Context::constant(1)}}), Error);
  EXPECT_THROW(InitialCondition::mixture({}), Error);
}

TEST(InitialCondition, LiteralRoundTrip) {
  const auto init = parse_initial_condition("mix:0.25@const:0|0.75@word:1,0;tail=1");
  EXPECT_FALSE(init.is_point());
  EXPECT_EQ(init.components()[1].second, parse_context("word:1,0;tail=1"));
  EXPECT_EQ(parse_initial_condition(init.to_string()).to_string(), init.to_string());
  EXPECT_TRUE(parse_initial_condition("const:1").is_point());
  EXPECT_THROW(parse_initial_condition("mix:0.5const:0"), Error);
}

TEST(SampleSymbol, InverseCdfContract) {
  EXPECT_EQ(sample_symbol(two_point(0.3), 0.25), 0);
  EXPECT_EQ(sample_symbol(two_point(0.3), 0.3), 1);
  EXPECT_EQ(sample_symbol(two_point(0.3), 0.999), 1);
  EXPECT_EQ(sample_symbol(two_point(1.0), 0.9999), 0);
  EXPECT_EQ(sample_symbol(two_point(0.0), 0.0), 1);
}

TEST(SampleSymbol, HeavyTailRefused) {
  SymbolDistribution d = two_point(0.5);
  d.probs *= 0.9;
  d.tail_mass = 0.1;
  try {
    sample_symbol(d, 0.5);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kHeavyTail);
  }
}

TEST(SampleSymbol, CutoffEventsCounted) {
  SymbolDistribution d = two_point(0.5);
  d.tail_mass = 1e-13;
  SamplingStats stats;
  sample_symbol(d, 0.5, &stats);
  sample_symbol(two_point(0.5), 0.5, &stats);
  EXPECT_EQ(stats.draws, 2u);
  EXPECT_EQ(stats.cutoff_events, 1u);
}

TEST(SampleSymbol, Ex11FrequenciesWithinBinomialBands) {
  const auto g = make_gfunction("ex11:alpha=0.5,p=geom2");
  const Context x = parse_context("word:2,0,1;tail=3");
  const auto dist = g->distribution(x, {});
  RngStream rng(99, 0);
  std::map<Symbol, int> counts;
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) ++counts[sample_symbol(dist, rng.uniform())];
  for (Symbol s = 0; s < 12; ++s) {
    const double p = g->evaluate(s, x, 1e-12).value;
    const double sd = std::sqrt(p * (1 - p) / kDraws);
    EXPECT_NEAR(counts[s] / static_cast<double>(kDraws), p, 4.0 * sd + 1e-12) << "symbol " << s;
  }
}

TEST(ConditionalDistribution, EmptyWordIsG) {
  const auto g = binary_table();
  const auto d = conditional_distribution(*g, Word{}, InitialCondition::point(Context::constant(1)));
  EXPECT_DOUBLE_EQ(*d.prob(0), 0.6);
  EXPECT_DOUBLE_EQ(*d.prob(1), 0.4);
}

TEST(ConditionalDistribution, DepthOneSeesLastAddedSymbol) {
  const auto g = binary_table();
  const Word added{{1, 1, 0}, Word::Orientation::kChainAdded};
  for (Symbol fill : {0, 1}) {
    const auto d = conditional_distribution(*g, added, InitialCondition::point(Context::constant(fill)));
    EXPECT_DOUBLE_EQ(*d.prob(0), 0.3);
  }
}

TEST(ConditionalDistribution, Ex11DirectVersusPrepend) {
  const auto g = make_gfunction("ex11:alpha=0.5,p=geom2");
  const Context ones = Context::constant(1);
  const auto d = conditional_distribution(*g, Word{{1}, Word::Orientation::kChainAdded},
                                          InitialCondition::point(ones), {1e-12});
  const Context x = ones.prepend(1);
  for (std::size_t i = 0; i < d.symbols.size(); ++i) {
    EXPECT_NEAR(d.probs[static_cast<Eigen::Index>(i)], g->evaluate(d.symbols[i], x, 1e-12).value, 1e-12);
  }
}

TEST(ConditionalDistribution, MarkovPropertyThroughConcatenation) {
  const auto g = table(2, 2, {0.1, 0.9, 0.4, 0.6, 0.7, 0.3, 0.2, 0.8});
  const Context y = parse_context("word:0,1;tail=1");
  const Word added{{1, 0, 0, 1}, Word::Orientation::kChainAdded};
  const auto d = conditional_distribution(*g, added, InitialCondition::point(y));
  Context x = y;
  for (Symbol s : added.symbols) x.push_front(s);
  const auto e = g->distribution(x, {});
  EXPECT_EQ(d.symbols, e.symbols);
  EXPECT_EQ(d.probs, e.probs);
  // prefix-orientation input means the same word
  const auto f = conditional_distribution(*g, added.reoriented(), InitialCondition::point(y));
  EXPECT_EQ(d.probs, f.probs);
}

TEST(ConditionalDistribution, ShiftCompatibility) {
  const auto g = table(2, 2, {0.1, 0.9, 0.4, 0.6, 0.7, 0.3, 0.2, 0.8});
  const Context y = Context::constant(0);
  const std::vector<Symbol> word = {1, 1, 0, 1, 0};
  for (std::size_t n = 0; n + 1 < word.size(); ++n) {
    const Word after{{word.begin() + 1, word.begin() + 1 + static_cast<std::ptrdiff_t>(n)},
                     Word::Orientation::kChainAdded};
    const Word full{{word.begin(), word.begin() + 1 + static_cast<std::ptrdiff_t>(n)},
                    Word::Orientation::kChainAdded};
    const auto a = conditional_distribution(*g, full, InitialCondition::point(y));
    const auto b = conditional_distribution(*g, after, InitialCondition::point(y.prepend(word[0])));
    EXPECT_EQ(a.probs, b.probs);
  }
}

TEST(ConditionalDistribution, MixtureUsesPosteriorWeights) {
  const auto g = binary_table();
  const auto init = InitialCondition::mixture({{0.5, Context::constant(0)}, {0.5, Context::constant(1)}});
  const auto d0 = conditional_distribution(*g, Word{}, init);
  EXPECT_NEAR(*d0.prob(0), 0.5 * 0.3 + 0.5 * 0.6, 1e-15);
  // after adding symbol 1: posterior weights 0.7/1.1 and 0.4/1.1, but both components now see x_0 = 1
  const auto d1 = conditional_distribution(*g, Word{{1}, Word::Orientation::kChainAdded}, init);
  EXPECT_NEAR(*d1.prob(0), 0.6, 1e-15);
  // depth-2 table where the init still matters after one step
  const auto h = table(2, 2, {0.1, 0.9, 0.4, 0.6, 0.7, 0.3, 0.2, 0.8});
  const auto d2 = conditional_distribution(*h, Word{{0}, Word::Orientation::kChainAdded}, init);
  // first step reads rows (0,0) and (1,1); the second reads rows (0,0) and (0,1)
  const double w0 = 0.5 * 0.1 / (0.5 * 0.1 + 0.5 * 0.2);
  EXPECT_NEAR(*d2.prob(0), w0 * 0.1 + (1 - w0) * 0.4, 1e-15);
}

TEST(ConditionalDistribution, CylinderProbabilitiesSumToOne) {
  const auto g = table(2, 2, {0.1, 0.9, 0.4, 0.6, 0.7, 0.3, 0.2, 0.8});
  const auto init = InitialCondition::mixture({{0.3, Context::constant(0)}, {0.7, Context::periodic({1, 0})}});
  for (std::size_t n = 1; n <= 8; ++n) {
    double total = 0.0;
    for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
      double prob = 1.0;
      Word added{{}, Word::Orientation::kChainAdded};
      for (std::size_t i = 0; i < n; ++i) {
        const Symbol s = static_cast<Symbol>((code >> i) & 1u);
        prob *= *conditional_distribution(*g, added, init).prob(s);
        added.symbols.push_back(s);
      }
      total += prob;
    }
    EXPECT_NEAR(total, 1.0, static_cast<double>(n) * 1e-12);
  }
}

TEST(SimulatePath, DeterministicRowsGiveOnePath) {
  // 0 -> 1 -> 0 -> ... with certainty
  const auto g = table(2, 1, {0.0, 1.0, 1.0, 0.0});
  RngStream rng(3, 0);
  const auto run = simulate_path(*g, InitialCondition::point(Context::constant(0)), 6, rng);
  EXPECT_EQ(run.path.added.symbols, (std::vector<Symbol>{1, 0, 1, 0, 1, 0}));
}

TEST(SimulatePath, SameSeedSameWord) {
  const auto g = make_gfunction("ex11:alpha=0.5,p=geom2");
  const auto init = InitialCondition::point(Context::constant(1));
  RngStream a(42, 5);
  RngStream b(42, 5);
  RngStream c(42, 6);
  const auto ra = simulate_path(*g, init, 2000, a);
  EXPECT_EQ(ra.path.added, simulate_path(*g, init, 2000, b).path.added);
  EXPECT_NE(ra.path.added, simulate_path(*g, init, 2000, c).path.added);
  const auto batch = simulate_paths(*g, init, 2000, 42, 7);
  EXPECT_EQ(batch[5].path.added, ra.path.added);
}

TEST(SimulatePath, CurrentContextPrependsAddedSymbols) {
  const auto g = binary_table();
  RngStream rng(1, 0);
  const auto run = simulate_path(*g, InitialCondition::point(Context::constant(0)), 5, rng);
  const Context x = run.path.current_context();
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(x.coordinate(i), run.path.added.symbols[4 - i]);
  EXPECT_EQ(x.coordinate(5), 0);
}

TEST(SimulatePath, SpinFromAllPlusMostlyPlus) {
  const auto g = make_gfunction("spin:a=pow1.5");
  RngStream rng(7, 0);
  const auto run = simulate_path(*g, InitialCondition::point(Context::constant(1)), 100000, rng);
  std::size_t plus = 0;
  for (Symbol s : run.path.added.symbols) plus += s == 1;
  EXPECT_GT(plus / 100000.0, 0.9);
}

TEST(SimulatePath, MixtureDrawsComponent) {
  const auto g = binary_table();
  const auto init = InitialCondition::mixture({{0.5, Context::constant(0)}, {0.5, Context::constant(1)}});
  std::size_t ones = 0;
  for (std::uint64_t p = 0; p < 400; ++p) {
    RngStream rng(8, p);
    const auto run = simulate_path(*g, init, 1, rng);
    ASSERT_TRUE(run.path.component.has_value());
    ones += *run.path.component;
  }
  EXPECT_NEAR(ones / 400.0, 0.5, 4.0 * 0.025);
}

TEST(SimulatePath, EnvelopeSamplerMatchesInverseCdfLaw) {
  const auto g = make_gfunction("ex11:alpha=0.5,p=geom2");
  SimulationOptions options;
  options.envelope = g->example_envelope();
  const Context x = Context::constant(1);
  std::map<Symbol, int> counts;
  SamplingStats stats;
  RngStream rng(4, 0);
  constexpr int kDraws = 200000;
  for (int i = 0; i < kDraws; ++i) ++counts[sample_by_envelope(*g, x, *options.envelope, rng, stats)];
  for (Symbol s = 0; s < 6; ++s) {
    const double p = g->evaluate(s, x, 1e-12).value;
    EXPECT_NEAR(counts[s] / static_cast<double>(kDraws), p, 4.0 * std::sqrt(p * (1 - p) / kDraws));
  }
  EXPECT_EQ(stats.acceptances, static_cast<std::uint64_t>(kDraws));
  const double rate = static_cast<double>(stats.acceptances) / static_cast<double>(stats.proposals);
  EXPECT_NEAR(rate, 0.5, 4.0 * std::sqrt(0.25 / static_cast<double>(stats.proposals)));

  RngStream r1(4, 1);
  const auto run = simulate_path(*g, InitialCondition::point(x), 100, r1, options);
  EXPECT_EQ(run.stats.acceptances, 100u);
}

TEST(PathCsv, HeaderAndRows) {
  const auto g = binary_table();
  RngStream rng(1, 0);
  const auto run = simulate_path(*g, InitialCondition::point(Context::constant(0)), 10, rng);
  std::ostringstream out;
  write_path_csv(out, run.path, {"gfn=test", "seed=1"});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# gfn=test");
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line, "step,symbol");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 10);
}
