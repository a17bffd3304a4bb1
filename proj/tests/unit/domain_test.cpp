#include <gtest/gtest.h>

#include <map>

#include "amb/domain.hpp"
#include "amb/error.hpp"
#include "amb/stdlib.hpp"
#include "program_corpus.hpp"
#include "domain_oracle.hpp"
#include "random_data.hpp"

namespace amb {
namespace {

using domain::data_set;
using domain::leq;
using domain::lub;
using testing::consistent;
using testing::DataSet;
using testing::in_data;
using testing::is_amb_bot_bot;
using testing::is_bot;
using testing::labels;
using testing::Labels;
using testing::oracle_data;
using testing::oracle_leq;
using testing::same_set;
using testing::show;

constexpr int kSamples = 10000;

DataSet as_set(const std::vector<FiniteData>& v) { return DataSet(v.begin(), v.end()); }

bool contains(const DataSet& s, const FiniteData& d) { return s.count(d) > 0; }

FiniteData D(const char* text) { return parse_data(text); }

TEST(Order, Examples) {
  EXPECT_TRUE(leq(d_bot(), d_nil()));
  EXPECT_FALSE(leq(d_nil(), d_bot()));
  EXPECT_TRUE(leq(D("Pair(bot, Nil)"), D("Pair(Left, Nil)")));
  EXPECT_FALSE(leq(D("Left"), D("Right")));
  EXPECT_TRUE(leq(D("Amb(0, bot)"), D("Amb(0, 1)")));
  EXPECT_FALSE(leq(D("Amb(0, bot)"), D("Pair(0, bot)")));
}

TEST(Lub, Examples) {
  auto c = lub(D("Amb(0, bot)"), D("Amb(bot, 1)"));
  ASSERT_TRUE(c);
  EXPECT_TRUE(data_equal(*c, D("Amb(0, 1)")));
  EXPECT_FALSE(lub(D("0"), D("1")));
  EXPECT_FALSE(lub(d_fun(lam("x", var("x"))), d_fun(lam("x", nil()))));
  auto f = lub(d_fun(lam("x", var("x"))), d_fun(lam("y", var("y"))));
  ASSERT_TRUE(f);
  EXPECT_EQ((*f)->kind(), DKind::Fun);
}

TEST(Rank, Examples) {
  EXPECT_EQ(domain::rank(d_bot()), 0u);
  EXPECT_EQ(domain::rank(d_fun(lam("x", var("x")))), 0u);
  EXPECT_EQ(domain::rank(d_nil()), 1u);
  EXPECT_EQ(domain::rank(D("Pair(Nil, Left(Nil))")), 3u);
  EXPECT_EQ(domain::rank(D("Amb(bot, bot)")), 1u);
}

TEST(Denote, Examples) {
  Program f = stdlib::get("f_example");
  EXPECT_TRUE(data_equal(domain::denote_fuel(app(f, numeral(0)), 1000, 8), d_numeral(0)));
  EXPECT_TRUE(data_equal(domain::denote_fuel(app(f, numeral(1)), 1000, 8), d_bot()));
  EXPECT_TRUE(data_equal(domain::denote_fuel(amb(numeral(0), numeral(1)), 1000, 8), D("Amb(0, 1)")));
  EXPECT_TRUE(data_equal(domain::denote_fuel(bottom(), 1000, 8), d_bot()));
  EXPECT_EQ(domain::denote_fuel(lam("x", var("x")), 10, 8)->kind(), DKind::Fun);
  EXPECT_THROW(domain::denote_fuel(var("x"), 10, 8), OpenTerm);
}

// Constructor levels, not counting Amb nodes.
std::size_t ctor_depth(const FiniteData& a) {
  std::size_t m = 0;
  for (const auto& c : a->children()) m = std::max(m, ctor_depth(c));
  if (a->kind() == DKind::Bot || a->kind() == DKind::Fun) return 0;
  return a->kind() == DKind::AmbD ? m : 1 + m;
}

TEST(Denote, CutAtDepth) {
  FiniteData d = domain::denote_fuel(stdlib::get("random_nat"), 1000, 3);
  EXPECT_TRUE(d->has_bot());
  EXPECT_EQ(ctor_depth(d), 3u) << print(d);
}

TEST(Denote, MonotoneInFuelAndDepth) {
  for (const auto& p : testing::soundness_corpus()) {
    Program m = testing::link(p);
    FiniteData prev = d_bot();
    for (std::size_t k : {1, 4, 16, 64, 256, 1024}) {
      FiniteData same_depth = domain::denote_fuel(m, k, 8);
      EXPECT_TRUE(leq(domain::denote_fuel(m, k, 4), same_depth)) << p.name << " fuel " << k;
      FiniteData cur = domain::denote_fuel(m, k, 6);
      EXPECT_TRUE(leq(prev, cur)) << p.name << " fuel " << k << ": " << print(prev) << " vs " << print(cur);
      prev = cur;
    }
  }
}

TEST(DataSet, Examples) {
  EXPECT_TRUE(same_set(data_set(D("Amb(0, 1)")), DataSet{d_numeral(0), d_numeral(1)}));
  EXPECT_TRUE(same_set(data_set(D("Amb(bot, bot)")), DataSet{d_bot()}));
  EXPECT_TRUE(same_set(data_set(D("Amb(0, bot)")), DataSet{d_numeral(0)}));
  EXPECT_TRUE(same_set(data_set(D("Pair(Amb(Nil, bot), Nil)")), DataSet{D("Pair(Nil, Nil)")}));
  EXPECT_TRUE(same_set(data_set(D("Amb(Amb(bot, bot), 1)")), DataSet{d_bot(), d_numeral(1)}));
  auto s = data_set(D("Pair(Amb(0, 1), Amb(Left, Right))"));
  EXPECT_EQ(s.size(), 4u) << show(s);
}

TEST(DataSet, Budget) {
  FiniteData a = D("Amb(0, 1)");
  for (int i = 0; i < 12; ++i) a = d_pair(a, D("Amb(0, 1)"));
  EXPECT_THROW(data_set(a, SIZE_MAX, 1000), Budget);
}

TEST(DataSet, ProgramsFromTheIntroduction) {
  auto amb01 = data_set(domain::denote_fuel(amb(numeral(0), numeral(1)), 1000, 8), 8);
  EXPECT_TRUE(same_set(amb01, DataSet{d_numeral(0), d_numeral(1)})) << show(amb01);
  Program m = app(app(stdlib::get("mapamb"), stdlib::get("f_example")), amb(numeral(0), numeral(1)));
  auto mapped = data_set(domain::denote_fuel(m, 1000, 8), 8);
  EXPECT_TRUE(same_set(mapped, DataSet{d_numeral(0)})) << show(mapped);
}

TEST(Predicates, Examples) {
  EXPECT_TRUE(domain::is_data_elem(D("Pair(0, bot)")));
  EXPECT_FALSE(domain::is_data_elem(D("Left(Amb(Nil, Nil))")));
  EXPECT_TRUE(domain::is_reg_elem(D("Amb(0, Pair(Amb(1, bot), Nil))")));
  EXPECT_FALSE(domain::is_reg_elem(D("Amb(Amb(0, 1), bot)")));
  EXPECT_TRUE(domain::is_reg_elem(D("Amb(bot, bot)")));
}

TEST(Properties, OrderAgreesWithOracle) {
  testing::Rng rng(11);
  for (int i = 0; i < kSamples; ++i) {
    FiniteData a = testing::random_data(rng);
    FiniteData b = i % 2 ? testing::random_below(rng, a) : testing::random_data(rng);
    ASSERT_EQ(leq(b, a), oracle_leq(b, a)) << print(b) << " vs " << print(a);
    ASSERT_TRUE(leq(testing::random_below(rng, a), a)) << print(a);
  }
}

TEST(Properties, LubAgreesWithOracle) {
  testing::Rng rng(12);
  for (int i = 0; i < kSamples; ++i) {
    FiniteData top = testing::random_data(rng);
    FiniteData a = testing::random_below(rng, top);
    FiniteData b = i % 3 ? testing::random_below(rng, top) : testing::random_data(rng);
    auto c = lub(a, b);
    ASSERT_EQ(c.has_value(), consistent(a, b)) << print(a) << " , " << print(b);
    if (!c) continue;
    ASSERT_TRUE(leq(a, *c) && leq(b, *c));
    Labels want = labels(a);
    for (const auto& [at, l] : labels(b)) want[at] = l;
    ASSERT_EQ(labels(*c), want) << print(a) << " , " << print(b);
  }
}

TEST(Properties, DataSetAgreesWithOracle) {
  testing::Rng rng(13);
  for (int i = 0; i < kSamples; ++i) {
    FiniteData a = testing::random_data(rng);
    DataSet s = data_set(a);
    ASSERT_TRUE(same_set(s, as_set(oracle_data(a)))) << print(a) << ": " << show(s);
    for (const auto& d : s) ASSERT_TRUE(in_data(d, a)) << print(d) << " in " << print(a);
  }
}

TEST(Properties, DominatedByDataAgreesWithEnumeration) {
  testing::Rng rng(14);
  for (int i = 0; i < kSamples; ++i) {
    FiniteData a = testing::random_data(rng);
    FiniteData m = i % 2 ? testing::random_data(rng, {3, false, true, true}) : testing::random_below(rng, a);
    if (m->has_amb()) continue;
    bool want = false;
    for (const auto& d : oracle_data(a)) want = want || oracle_leq(m, d);
    ASSERT_EQ(domain::dominated_by_data(m, a), want) << print(m) << " vs " << print(a);
  }
}

TEST(Properties, SelectionIsAMemberOfData) {
  testing::Rng rng(15);
  for (int i = 0; i < kSamples / 4; ++i) {
    FiniteData top = testing::random_data(rng);
    auto chain = testing::random_chain(rng, top, 1 + i % 5);
    FiniteData d = domain::select_data(chain);
    ASSERT_TRUE(in_data(d, top)) << print(d) << " from " << print(top);
  }
  EXPECT_THROW(domain::select_data({}), Error);
  EXPECT_THROW(domain::select_data({d_numeral(0), d_numeral(1)}), Error);
}

// Data sets are never empty.
TEST(Lemmas, DataIsNonempty) {
  testing::Rng rng(21);
  for (int i = 0; i < kSamples; ++i) {
    FiniteData a = testing::random_data(rng);
    ASSERT_FALSE(oracle_data(a).empty()) << print(a);
    ASSERT_FALSE(data_set(a).empty()) << print(a);
  }
}

// An element without Amb is its own only data value.
TEST(Lemmas, DataElementsAreFixed) {
  testing::Rng rng(22);
  int seen = 0;
  for (int i = 0; i < kSamples; ++i) {
    FiniteData a = testing::random_data(rng, {5, i % 2 == 0, true, true});
    if (!domain::is_data_elem(a)) continue;
    ++seen;
    ASSERT_TRUE(same_set(data_set(a), DataSet{a})) << print(a);
  }
  EXPECT_GT(seen, kSamples / 4);
}

// Resolving the choices of a regular element leaves no Amb behind.
TEST(Lemmas, RegularElementsResolveToData) {
  testing::Rng rng(23);
  int seen = 0;
  for (int i = 0; i < kSamples; ++i) {
    FiniteData a = testing::random_data(rng);
    if (!domain::is_reg_elem(a)) continue;
    ++seen;
    for (const auto& d : data_set(a)) ASSERT_TRUE(domain::is_data_elem(d)) << print(d) << " from " << print(a);
  }
  EXPECT_GT(seen, 1000);
}

// For elements of a regular type other than a variable, ⊥ ∈ data(a) exactly when a is ⊥ or Amb(⊥, ⊥),
// and then data(a) = {⊥}.
TEST(Lemmas, BottomInDataOnlyForBottomLikeElements) {
  const char* types[] = {"nat", "fix a. A(1 + a)", "A(nat)", "A(3 * (fix a. A(3 * a)))", "fix a. A(3 * a)", "stream(2)",
                         "A(nat -> nat)", "A(2) * A(2)", "1 + A(2)", "fix a. A(1 + a * a)"};
  testing::Rng rng(24);
  for (int i = 0; i < kSamples; ++i) {
    Type t = parse_type(types[i % std::size(types)]);
    ASSERT_TRUE(is_regular(t));
    FiniteData a = testing::random_of_type(rng, t, 5);
    DataSet s = data_set(a);
    bool has_bot = contains(s, d_bot());
    bool bot_like = is_bot(a) || is_amb_bot_bot(a);
    ASSERT_EQ(has_bot, bot_like) << print(a) << " : " << types[i % std::size(types)] << ": " << show(s);
    if (has_bot) ASSERT_TRUE(same_set(s, DataSet{d_bot()})) << print(a);
  }
}

// Every data value of an approximation extends to a data value of the element.
TEST(Lemmas, ApproximationsExtend) {
  testing::Rng rng(25);
  for (int i = 0; i < kSamples; ++i) {
    FiniteData a = testing::random_data(rng);
    FiniteData a0 = testing::random_below(rng, a);
    auto full = oracle_data(a);
    for (const auto& d0 : data_set(a0)) {
      bool found = false;
      for (const auto& d : full) found = found || oracle_leq(d0, d);
      ASSERT_TRUE(found) << print(d0) << " from " << print(a0) << " below " << print(a);
    }
  }
}

// Data values of a lub come from one side or are the lub of one value from each side.
bool splits(const FiniteData& w, const DataSet& da, const DataSet& db) {
  if (contains(da, w) || contains(db, w)) return true;
  for (const auto& u : da) {
    for (const auto& v : db) {
      auto uv = lub(u, v);
      if (uv && data_equal(*uv, w)) return true;
    }
  }
  return false;
}

TEST(Lemmas, LubOfDataValuesSmallestCase) {
  // Choice on the left component, extra information on the right one.
  FiniteData a = D("Pair(Amb(0, 1), bot)");
  FiniteData b = D("Pair(Amb(0, bot), Nil)");
  auto c = lub(a, b);
  ASSERT_TRUE(c);
  EXPECT_TRUE(splits(D("Pair(1, Nil)"), data_set(a), data_set(b)));
}

TEST(Lemmas, LubOfDataValues) {
  testing::Rng rng(26);
  int violations = 0;
  std::string first;
  for (int i = 0; i < kSamples; ++i) {
    FiniteData top = testing::random_data(rng);
    FiniteData a = testing::random_below(rng, top, 0.3);
    FiniteData b = testing::random_below(rng, top, 0.3);
    auto c = lub(a, b);
    ASSERT_TRUE(c);
    DataSet da = data_set(a), db = data_set(b);
    for (const auto& w : data_set(*c)) {
      if (splits(w, da, db)) continue;
      if (violations++ == 0) first = print(w) + " from " + print(a) + " and " + print(b);
      break;
    }
  }
  EXPECT_EQ(violations, 0) << "first: " << first;
}

}  // namespace
}  // namespace amb
