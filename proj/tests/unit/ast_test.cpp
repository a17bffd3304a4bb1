#include <gtest/gtest.h>

#include <random>

#include "amb/ast.hpp"
#include "amb/error.hpp"
#include "amb/stdlib.hpp"
#include "program_corpus.hpp"

namespace amb {
namespace {

TEST(Parse, IdentityLambda) { EXPECT_TRUE(alpha_equal(parse_program("\\a. a"), lam("a", var("a")))); }

TEST(Parse, RandomAssignment) {
  Program expected = rec(lam("a", amb(left(nil()), right(var("a")))));
  EXPECT_TRUE(alpha_equal(parse_program("rec \\a. Amb(Left(Nil), Right(a))"), expected));
}

TEST(Parse, LeftRightBody) {
  Program expected = case_of(var("b"), {{Ctor::Left, {"_"}, left(nil())}, {Ctor::Right, {"_"}, right(nil())}});
  EXPECT_TRUE(alpha_equal(parse_program("case b { Left(_) -> Left; Right(_) -> Right }"), expected));
}

TEST(Parse, NumeralsAreLeftRightChains) {
  EXPECT_TRUE(alpha_equal(parse_program("0"), left(nil())));
  EXPECT_TRUE(alpha_equal(parse_program("2"), right(right(left(nil())))));
}

TEST(Parse, StrictApplicationAndBottom) {
  EXPECT_TRUE(alpha_equal(parse_program("f $ bot"), strict_app(var("f"), bottom())));
}

TEST(Parse, ErrorCarriesPosition) {
  try {
    parse_program("\\a.\n  (a b");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(Parse, RejectsWrongConstructorArity) { EXPECT_THROW(parse_program("Pair(Nil)"), Error); }

TEST(Construct, ArityAndClauseInvariants) {
  EXPECT_THROW(con(Ctor::Pair, {nil()}), std::invalid_argument);
  EXPECT_THROW(case_of(nil(), {{Ctor::Left, {}, nil()}}), std::invalid_argument);
  EXPECT_THROW(case_of(nil(), {{Ctor::Nil, {}, nil()}, {Ctor::Nil, {}, nil()}}), std::invalid_argument);
}

TEST(Subst, VariableByNil) { EXPECT_TRUE(alpha_equal(subst(var("a"), "a", nil()), nil())); }

TEST(Subst, AvoidsCapture) {
  Program r = subst(lam("b", var("a")), "a", var("b"));
  ASSERT_EQ(r->kind(), Kind::Lam);
  EXPECT_EQ(free_vars(r), std::set<std::string>{"b"});
  EXPECT_TRUE(alpha_equal(r, lam("c", var("b"))));
  EXPECT_FALSE(alpha_equal(r, lam("b", var("b"))));
}

TEST(Subst, ReplacesEveryOccurrence) {
  EXPECT_TRUE(alpha_equal(subst(app(var("a"), var("a")), "a", bottom()), app(bottom(), bottom())));
}

TEST(Types, Determined) {
  EXPECT_TRUE(is_determined(nat_t()));
  EXPECT_FALSE(is_determined(tvar("a")));
  EXPECT_FALSE(is_determined(amb_t(unit_t())));
  EXPECT_TRUE(is_determined(fix_t("a", fix_t("b", arrow_t(tvar("a"), tvar("b"))))));
}

TEST(Types, Regular) {
  EXPECT_TRUE(is_regular(fix_t("a", amb_t(sum_t(unit_t(), tvar("a"))))));
  EXPECT_FALSE(is_regular(fix_t("a", amb_t(tvar("a")))));
  EXPECT_TRUE(is_regular(nat_t()));
  EXPECT_FALSE(is_regular(fix_t("a", arrow_t(tvar("a"), unit_t()))));
  EXPECT_FALSE(is_regular(fix_t("a", tvar("a"))));
  EXPECT_FALSE(is_regular(amb_t(amb_t(unit_t()))));
}

TEST(Types, RegularityIgnoresBinderNames) {
  const std::pair<const char*, const char*> variants[] = {
      {"fix a. A(1 + a)", "fix z. A(1 + z)"},
      {"fix a. A(a)", "fix q. A(q)"},
      {"fix a. a -> 1", "fix b. b -> 1"},
      {"fix a. fix b. A(a * b)", "fix b. fix a. A(b * a)"},
      {"fix a. A(2) * a", "stream(A(2))"},
  };
  for (auto [x, y] : variants) {
    Type t = parse_type(x), u = parse_type(y);
    EXPECT_TRUE(alpha_equal(t, u)) << x;
    EXPECT_EQ(is_regular(t), is_regular(u)) << x;
  }
}

TEST(RoundTrip, StdlibDefinitions) {
  for (const auto& d : stdlib::module().defs) {
    std::string text = print(d.body);
    EXPECT_TRUE(alpha_equal(parse_program(text), d.body)) << d.name << ": " << text;
    if (d.type) EXPECT_TRUE(alpha_equal(parse_type(print(*d.type)), *d.type)) << d.name;
  }
}

TEST(RoundTrip, LinkedCorpusPrograms) {
  for (const auto& p : testing::soundness_corpus()) {
    Program m = testing::link(p);
    std::string text = print(m);
    EXPECT_TRUE(alpha_equal(parse_program(text), m)) << p.name << ": " << text;
  }
}

TEST(RoundTrip, ModuleReparses) {
  Module m = parse_module(stdlib::source());
  std::string text;
  for (const auto& d : m.defs) {
    text += "def " + d.name + (d.type ? " : " + print(*d.type) : "") + " = " + print(d.body) + ";\n";
  }
  Module again = parse_module(text);
  ASSERT_EQ(again.defs.size(), m.defs.size());
  for (std::size_t i = 0; i < m.defs.size(); ++i) {
    EXPECT_TRUE(alpha_equal(again.defs[i].body, m.defs[i].body)) << m.defs[i].name;
  }
}

// Random open terms over a small set of names.
class TermGen {
 public:
  explicit TermGen(std::uint64_t seed) : rng_(seed) {}

  Program gen(int depth) {
    static const char* names[] = {"a", "b", "c", "d"};
    int k = std::uniform_int_distribution<int>(0, depth > 0 ? 7 : 2)(rng_);
    switch (k) {
      case 0:
        return var(names[std::uniform_int_distribution<int>(0, 3)(rng_)]);
      case 1:
        return nil();
      case 2:
        return bottom();
      case 3:
        return lam(names[std::uniform_int_distribution<int>(0, 3)(rng_)], gen(depth - 1));
      case 4:
        return app(gen(depth - 1), gen(depth - 1));
      case 5:
        return strict_app(gen(depth - 1), gen(depth - 1));
      case 6:
        return pair(gen(depth - 1), amb(gen(depth - 1), gen(depth - 1)));
      default: {
        Program s = gen(depth - 1);
        return case_of(s, {{Ctor::Left, {"c"}, gen(depth - 1)}, {Ctor::Pair, {"a", "d"}, gen(depth - 1)}});
      }
    }
  }

 private:
  std::mt19937_64 rng_;
};

TEST(Subst, FreeVariablesBound) {
  TermGen g(1);
  for (int i = 0; i < 500; ++i) {
    Program m = g.gen(4), n = g.gen(3);
    auto fv = free_vars(subst(m, "a", n));
    auto allowed = free_vars(m);
    allowed.erase("a");
    for (const auto& x : free_vars(n)) allowed.insert(x);
    for (const auto& x : fv) EXPECT_TRUE(allowed.count(x)) << x;
  }
}

TEST(Subst, Compositional) {
  TermGen g(2);
  int checked = 0;
  for (int i = 0; i < 2000 && checked < 500; ++i) {
    Program m = g.gen(4), n = g.gen(3), k = g.gen(3);
    if (occurs_free(k, "a")) continue;
    ++checked;
    Program lhs = subst(subst(m, "a", n), "b", k);
    Program rhs = subst(subst(m, "b", k), "a", subst(n, "b", k));
    EXPECT_TRUE(alpha_equal(lhs, rhs)) << print(m) << " / " << print(n) << " / " << print(k);
  }
  EXPECT_EQ(checked, 500);
}

TEST(Subst, RoundTripOfRandomTerms) {
  TermGen g(3);
  for (int i = 0; i < 500; ++i) {
    Program m = g.gen(5);
    std::string text = print(m);
    try {
      EXPECT_TRUE(alpha_equal(parse_program(text), m)) << text;
    } catch (const ParseError& e) {
      ADD_FAILURE() << e.what() << " in " << text;
    }
  }
}

}  // namespace
}  // namespace amb
