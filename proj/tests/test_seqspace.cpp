#include <gtest/gtest.h>

#include "gmlab/error.hpp"
#include "gmlab/seqspace.hpp"

using namespace gmlab;

namespace {

Context head_const(std::vector<Symbol> head, Symbol fill) { return Context(head, ConstantTail{fill}); }

}  // namespace

TEST(Context, CoordinateReadsHeadThenTail) {
  const Context x = head_const({3, 1}, 0);
  EXPECT_EQ(x.coordinate(0), 3);
  EXPECT_EQ(x.coordinate(1), 1);
  EXPECT_EQ(x.coordinate(99), 0);
  EXPECT_EQ(Context::periodic({1, 2}).coordinate(3), 2);
  EXPECT_EQ(Context::periodic({1, 2}).coordinate(4), 1);
}

TEST(Context, PeriodicTailStartsAfterHead) {
  const Context x({7}, PeriodicTail{{1, 2}});
  EXPECT_EQ(x.coordinate(0), 7);
  EXPECT_EQ(x.coordinate(1), 1);
  EXPECT_EQ(x.coordinate(2), 2);
  EXPECT_EQ(x.coordinate(3), 1);
}

TEST(Context, PrependShiftsCoordinates) {
  const Context x = head_const({1}, 0);
  const Context y = x.prepend(5);
  EXPECT_EQ(y, head_const({5, 1}, 0));
  EXPECT_EQ(y.coordinate(0), 5);
  const Context z = y.prepend(9);
  EXPECT_EQ(z.coordinate(2), x.coordinate(0));
  for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(z.coordinate(i + 2), x.coordinate(i));
}

TEST(Context, PrependIsInjective) {
  const Context x = head_const({1, 2}, 0);
  const Context y = Context({1, 2}, PeriodicTail{{0}});
  EXPECT_EQ(agree_depth(x.prepend(4), y.prepend(4)), kAgreeEverywhere);
  const Context w = head_const({1, 3}, 0);
  EXPECT_NE(x.prepend(4), w.prepend(4));
}

TEST(AgreeDepth, Examples) {
  const Context x = head_const({1, 2, 3}, 0);
  EXPECT_EQ(agree_depth(x, x), kAgreeEverywhere);
  EXPECT_EQ(agree_depth(x, head_const({1, 2, 4}, 0)), 1);
  EXPECT_EQ(agree_depth(head_const({2}, 0), head_const({3}, 0)), kDisagreeAtZero);
}

TEST(AgreeDepth, EqualSequencesWithDifferentRepresentations) {
  EXPECT_EQ(agree_depth(Context::constant(1), Context::periodic({1, 1})), kAgreeEverywhere);
  EXPECT_EQ(agree_depth(head_const({0, 0}, 0), Context::constant(0)), kAgreeEverywhere);
  EXPECT_EQ(agree_depth(Context::periodic({0, 1}), Context::periodic({0, 1, 0, 1})), kAgreeEverywhere);
}

TEST(AgreeDepth, DisagreementInsideTail) {
  EXPECT_EQ(agree_depth(Context::periodic({0, 1}), Context::periodic({0, 2})), 0);
  EXPECT_EQ(agree_depth(head_const({5}, 0), head_const({5, 0, 0, 0}, 1)), 3);
}

TEST(AgreeDepth, SymmetricAndShiftsWithPrepend) {
  const std::vector<Context> xs = {head_const({1, 2, 3}, 0), head_const({1, 2, 4}, 0), Context::periodic({1, 2}),
                                   head_const({1}, 2), Context::constant(1)};
  for (const auto& x : xs) {
    for (const auto& y : xs) {
      const auto d = agree_depth(x, y);
      EXPECT_EQ(d, agree_depth(y, x));
      const auto shifted = agree_depth(x.prepend(7), y.prepend(7));
      if (d == kAgreeEverywhere) {
        EXPECT_EQ(shifted, kAgreeEverywhere);
      } else {
        EXPECT_EQ(shifted, d + 1);
      }
    }
  }
}

TEST(ContextLiteral, ParsesAllForms) {
  EXPECT_EQ(parse_context("const:0"), Context::constant(0));
  EXPECT_EQ(parse_context("const:+1"), Context::constant(1));
  EXPECT_EQ(parse_context("const:-1"), Context::constant(-1));
  EXPECT_EQ(parse_context("periodic:1,2"), Context::periodic({1, 2}));
  EXPECT_EQ(parse_context("word:3,1;tail=0"), head_const({3, 1}, 0));
  EXPECT_EQ(parse_context("word:3;periodic=0,1"), Context({3}, PeriodicTail{{0, 1}}));
}

TEST(ContextLiteral, RoundTrips) {
  for (const char* literal : {"const:0", "periodic:1,2", "word:3,1;tail=0", "word:-1,1;tail=-1"}) {
    const Context x = parse_context(literal);
    EXPECT_EQ(parse_context(x.to_string()), x) << literal;
  }
}

TEST(ContextLiteral, RejectsGarbage) {
  for (const char* literal : {"", "const:", "const:x", "periodic:", "word:1,2", "foo:1", "word:1;tail=q"}) {
    try {
      parse_context(literal);
      ADD_FAILURE() << "accepted '" << literal << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidContext) << literal;
    }
  }
}

TEST(Alphabet, EnumerationOrders) {
  const Alphabet z = Alphabet::integers();
  EXPECT_EQ(z.at(0), 0);
  EXPECT_EQ(z.at(1), 1);
  EXPECT_EQ(z.at(2), -1);
  EXPECT_EQ(z.at(3), 2);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(z.index_of(z.at(i)), i);
  const Alphabet n = Alphabet::naturals();
  EXPECT_EQ(n.at(7), 7);
  EXPECT_FALSE(n.contains(-1));
  const Alphabet spins = Alphabet::of({1, -1});
  EXPECT_EQ(spins.at(1), -1);
  EXPECT_EQ(spins.size(), 2u);
  EXPECT_THROW(spins.at(2), Error);
}

TEST(Word, ReorientReversesOrder) {
  const Word added{{1, 2, 3}, Word::Orientation::kChainAdded};
  const Word prefix = added.reoriented();
  EXPECT_EQ(prefix.orientation, Word::Orientation::kContextPrefix);
  EXPECT_EQ(prefix.symbols, (std::vector<Symbol>{3, 2, 1}));
  EXPECT_EQ(prefix.reoriented(), added);
}
