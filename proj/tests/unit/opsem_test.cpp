#include <gtest/gtest.h>

#include <deque>
#include <map>

#include "amb/domain.hpp"
#include "amb/error.hpp"
#include "amb/opsem.hpp"
#include "amb/stdlib.hpp"
#include "program_corpus.hpp"
#include "random_data.hpp"

namespace amb {
namespace {

using namespace opsem;
using testing::DataSet;
using testing::same_set;
using testing::show;

Program id() { return lam("a", var("a")); }

// Programs reachable from `m` by ↝ and ⇝c steps, breadth first, at most `limit` of them.
std::vector<Program> reducts(const Program& m, std::size_t limit) {
  std::vector<Program> out;
  std::deque<Program> todo{m};
  while (!todo.empty() && out.size() < limit) {
    Program p = todo.front();
    todo.pop_front();
    out.push_back(p);
    if (p->size() > 4000) continue;
    for (const auto& s : step_choice_successors(p)) todo.push_back(s.result);
    if (auto h = step_head(p)) todo.push_back(h->result);
  }
  return out;
}

TEST(Whnf, Examples) {
  EXPECT_TRUE(is_whnf(id()));
  EXPECT_TRUE(is_whnf(amb(bottom(), bottom())));
  EXPECT_FALSE(is_whnf(app(id(), nil())));
  EXPECT_TRUE(is_dwhnf(nil()));
  EXPECT_FALSE(is_dwhnf(amb(nil(), nil())));
  EXPECT_TRUE(is_dwhnf(lam("a", bottom())));
}

TEST(BotLike, Examples) {
  EXPECT_TRUE(is_bot_like(app(nil(), nil())));
  EXPECT_TRUE(is_bot_like(case_of(id(), {{Ctor::Nil, {}, nil()}})));
  EXPECT_FALSE(is_bot_like(nil()));
  EXPECT_TRUE(is_bot_like(bottom()));
  EXPECT_TRUE(is_bot_like(strict_app(left(nil()), nil())));
  EXPECT_TRUE(is_bot_like(case_of(left(nil()), {{Ctor::Right, {"x"}, var("x")}})));
  EXPECT_FALSE(is_bot_like(app(id(), nil())));
}

TEST(StepHead, Rec) {
  Program m = lam("s", pair(nil(), var("s")));
  auto r = step_head(rec(m));
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_equal(r->result, app(m, rec(m))));
  EXPECT_EQ(r->axiom, Rule::S6);
}

TEST(StepHead, StrictArgumentFirst) {
  auto r = step_head(strict_app(id(), app(lam("b", var("b")), nil())));
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_equal(r->result, strict_app(id(), nil())));
  EXPECT_EQ(r->context, Rule::S5);
}

TEST(StepHead, CaseOnAmb) {
  Program m = case_of(amb(nil(), bottom()), {{Ctor::Amb, {"a", "b"}, var("a")}});
  auto r = step_head(m);
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_equal(r->result, nil()));
  EXPECT_EQ(r->axiom, Rule::S7);
}

TEST(StepHead, BottomLoops) {
  auto r = step_head(bottom());
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_equal(r->result, bottom()));
  EXPECT_EQ(r->axiom, Rule::S9);
}

TEST(StepHead, OpenTermThrows) { EXPECT_THROW(step_head(app(var("x"), nil())), OpenTerm); }

TEST(Choice, AmbNilBottom) {
  auto s = step_choice_successors(amb(nil(), bottom()));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].rule, Rule::C3);
  EXPECT_TRUE(alpha_equal(s[0].result, nil()));
  EXPECT_EQ(s[1].rule, Rule::C2p);
  EXPECT_TRUE(alpha_equal(s[1].result, amb(nil(), bottom())));
}

TEST(Choice, NilIsNormal) { EXPECT_TRUE(step_choice_successors(nil()).empty()); }

TEST(Choice, StepLeftOrCommitRight) {
  auto s = step_choice_successors(amb(app(id(), nil()), nil()));
  bool c2 = false, c3p = false;
  for (const auto& x : s) {
    if (x.rule == Rule::C2 && alpha_equal(x.result, amb(nil(), nil()))) c2 = true;
    if (x.rule == Rule::C3p && alpha_equal(x.result, nil())) c3p = true;
  }
  EXPECT_TRUE(c2);
  EXPECT_TRUE(c3p);
}

TEST(Parallel, Examples) {
  EXPECT_TRUE(alpha_equal(step_parallel_picks(pair(app(id(), nil()), nil()), {}), pair(nil(), nil())));
  EXPECT_TRUE(alpha_equal(step_parallel_picks(id(), {}), id()));
  EXPECT_TRUE(alpha_equal(step_parallel_picks(amb(nil(), bottom()), {0}), nil()));
  EXPECT_THROW(step_parallel_picks(amb(nil(), bottom()), {}), InvalidPick);
  EXPECT_THROW(step_parallel_picks(amb(nil(), bottom()), {2}), InvalidPick);
}

TEST(ProjectMD, Examples) {
  EXPECT_TRUE(data_equal(project_MD(pair(nil(), app(id(), nil()))), d_pair(d_nil(), d_bot())));
  EXPECT_TRUE(data_equal(project_MD(amb(nil(), nil())), d_bot()));
  EXPECT_TRUE(data_equal(project_MD(nil()), d_nil()));
  EXPECT_EQ(project_MD(id())->kind(), DKind::Fun);
}

TEST(Run, RandomNat) {
  RunOptions o;
  o.fuel = 200;
  o.depth = 6;
  auto r = run_extract(stdlib::get("random_nat"), Schedule::round_robin(), o);
  // A numeral, or a Right chain still waiting on its next choice.
  FiniteData d = r.value;
  while (d->kind() == DKind::Ri) d = d->child(0);
  EXPECT_TRUE(d->kind() == DKind::Bot || (d->kind() == DKind::Le && d->child(0)->kind() == DKind::Nil)) << print(r.value);
}

TEST(Run, AmbNilBottomCommitsLeft) {
  std::vector<Schedule> schedules{Schedule::round_robin()};
  for (std::uint64_t s = 0; s < 20; ++s) schedules.push_back(Schedule::seeded(s));
  for (const auto& s : schedules) {
    RunOptions o;
    o.fuel = 8;
    auto r = run_extract(amb(nil(), bottom()), s, o);
    EXPECT_TRUE(data_equal(r.value, d_nil())) << s.seed;
  }
  EXPECT_TRUE(same_set(enumerate_schedules(amb(nil(), bottom()), 2), DataSet{d_bot(), d_nil()}));
}

TEST(Run, BottomStaysBottom) {
  RunOptions o;
  o.fuel = 50;
  auto r = run_extract(bottom(), Schedule::seeded(3), o);
  EXPECT_TRUE(data_equal(r.value, d_bot()));
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.steps, 50u);
}

TEST(Enumerate, Examples) {
  auto a = enumerate_schedules(amb(numeral(0), numeral(1)), 4);
  EXPECT_TRUE(same_set(a, DataSet{d_bot(), d_numeral(0), d_numeral(1)})) << show(a);
  EXPECT_TRUE(same_set(enumerate_schedules(nil(), 1), DataSet{d_nil()}));
  auto s = enumerate_schedules(app(app(stdlib::get("mapamb"), stdlib::get("f_example")), amb(numeral(0), numeral(1))), 12);
  bool any = false;
  for (const auto& d : s) {
    if (d->has_bot()) continue;
    any = true;
    EXPECT_TRUE(data_equal(d, d_numeral(0))) << print(d);
  }
  EXPECT_TRUE(any);
}

TEST(Enumerate, BudgetExceeded) {
  EnumerateOptions o;
  o.node_limit = 10;
  EXPECT_THROW(enumerate_schedules(stdlib::get("random_nat"), 20, o), Budget);
}

TEST(Properties, HeadStepIsDeterministic) {
  for (const auto& p : testing::soundness_corpus()) {
    for (const auto& m : reducts(testing::link(p), 60)) {
      auto a = step_head(m), b = step_head(m);
      ASSERT_EQ(a.has_value(), b.has_value());
      if (a) EXPECT_TRUE(alpha_equal(a->result, b->result)) << p.name;
    }
  }
}

TEST(Properties, HeadNormalFormsAreWhnf) {
  for (const auto& p : testing::soundness_corpus()) {
    Program m = testing::link(p);
    for (int i = 0; i < 100; ++i) {
      auto s = step_head(m);
      EXPECT_EQ(!s.has_value(), is_whnf(m)) << p.name << " after " << i;
      if (!s) break;
      m = s->result;
    }
    for (const auto& r : reducts(testing::link(p), 60)) EXPECT_EQ(!step_head(r).has_value(), is_whnf(r)) << p.name;
  }
}

TEST(Properties, ChoiceNormalIffDwhnf) {
  for (const auto& p : testing::soundness_corpus()) {
    for (const auto& m : reducts(testing::link(p), 60)) {
      EXPECT_EQ(step_choice_successors(m).empty(), is_dwhnf(m)) << p.name << ": " << print_capped(m, 80);
    }
  }
}

TEST(Properties, WhnfIsNeverBotLike) {
  for (const auto& p : testing::soundness_corpus()) {
    for (const auto& m : reducts(testing::link(p), 60)) {
      if (is_whnf(m)) EXPECT_FALSE(is_bot_like(m)) << p.name;
    }
  }
}

TEST(Properties, SnapshotsIncrease) {
  for (const auto& p : testing::soundness_corpus()) {
    for (std::uint64_t seed : {0, 1, 2}) {
      RunOptions o;
      o.fuel = 200;
      o.depth = 12;
      o.record_trace = true;
      o.stop_when_converged = false;
      auto r = run_extract(testing::link(p), Schedule::seeded(seed), o);
      FiniteData prev = project_MD(r.trace.initial);
      for (const auto& s : r.trace.steps) {
        EXPECT_TRUE(domain::leq(prev, s.snapshot)) << p.name << " step " << s.index;
        prev = s.snapshot;
      }
    }
  }
}

TEST(Properties, HeadStepPreservesData) {
  constexpr std::size_t kFuel = 5000;
  constexpr std::size_t kDepth = 8;
  for (const auto& p : testing::soundness_corpus()) {
    Program m = testing::link(p);
    for (int i = 0; i < 10; ++i) {
      auto s = step_head(m);
      if (!s) break;
      auto before = domain::data_set(domain::denote_fuel(m, kFuel, kDepth), kDepth);
      auto after = domain::data_set(domain::denote_fuel(s->result, kFuel - 1, kDepth), kDepth);
      EXPECT_TRUE(same_set(before, after)) << p.name << " at step " << i << ": " << show(before) << " vs " << show(after);
      m = s->result;
    }
  }
}

TEST(Properties, RunsAreSound) {
  constexpr std::size_t kDepth = 8;
  for (const auto& p : testing::soundness_corpus()) {
    Program m = testing::link(p);
    auto oracle = domain::data_set(domain::denote_fuel(m, 100000, kDepth), kDepth);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      RunOptions o;
      o.fuel = 300;
      o.depth = kDepth;
      auto r = run_extract(m, Schedule::seeded(seed), o);
      bool below = false;
      for (const auto& d : oracle) below = below || domain::leq(r.value, d);
      EXPECT_TRUE(below) << p.name << " seed " << seed << ": " << print(r.value);
    }
  }
}

TEST(Productivity, RegularProgramsReachDwhnf) {
  for (const auto& p : testing::soundness_corpus()) {
    if (!testing::is_regular_program(p)) continue;
    Program m = testing::link(p);
    FiniteData d = domain::denote_fuel(m, 100000, 4);
    if (d->kind() == DKind::Bot || (d->kind() == DKind::AmbD && d->child(0)->kind() == DKind::Bot &&
                                    d->child(1)->kind() == DKind::Bot)) {
      continue;
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      EXPECT_TRUE(steps_to_dwhnf(m, Schedule::seeded(seed), 2000).has_value()) << p.name << " seed " << seed;
    }
    EXPECT_TRUE(steps_to_dwhnf(m, Schedule::round_robin(), 2000).has_value()) << p.name;
  }
}

TEST(Productivity, NestedAmbHasLoopingFairSchedule) {
  Program m = amb(amb(nil(), nil()), amb(bottom(), bottom()));
  // Commit to the right side, then alternate inside Amb(⊥, ⊥) forever.
  Schedule s = Schedule::explicit_picks({1}, {0, 1}, 2);
  EXPECT_FALSE(steps_to_dwhnf(m, s, 2000).has_value());
  EXPECT_TRUE(steps_to_dwhnf(m, Schedule::round_robin(), 2000).has_value());
}

TEST(Fairness, UnfairExplicitScheduleIsRejected) {
  Program loop = parse_program("rec \\x. x");
  RunOptions o;
  o.fuel = 20;
  EXPECT_THROW(run_extract(amb(loop, loop), Schedule::explicit_picks({}, {0}, 3), o), UnfairSchedule);
  EXPECT_THROW(make_scheduler(Schedule::explicit_picks({}, {}, 2)), UnfairSchedule);
  EXPECT_THROW(make_scheduler(Schedule::explicit_picks({}, {0, 5}, 2)), InvalidPick);
}

// Longest run of consecutive same-side picks at each Amb locus. A commit replaces the Amb there, so the
// run starts over.
std::map<Path, std::size_t> longest_runs(const Trace& t) {
  std::map<Path, std::pair<int, std::size_t>> cur;
  std::map<Path, std::size_t> best;
  for (const auto& s : t.steps) {
    for (const auto& f : s.firings) {
      if (f.side < 0) continue;
      auto& [side, len] = cur[f.path];
      len = side == f.side ? len + 1 : 1;
      side = f.side;
      best[f.path] = std::max(best[f.path], len);
      if (f.rule == Rule::C3 || f.rule == Rule::C3p) cur.erase(f.path);
    }
  }
  return best;
}

TEST(Fairness, PoliciesRespectTheirWindow) {
  Program loop = parse_program("rec \\x. x");
  Program m = pair(amb(loop, loop), amb(amb(loop, loop), loop));
  RunOptions o;
  o.fuel = 400;
  o.record_trace = true;
  auto rr = run_extract(m, Schedule::round_robin(), o);
  auto runs = longest_runs(rr.trace);
  EXPECT_EQ(runs.size(), 2u);
  for (const auto& [path, len] : runs) EXPECT_LE(len, 1u) << path_string(path);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Schedule s = Schedule::seeded(seed);
    auto r = run_extract(m, s, o);
    for (const auto& [path, len] : longest_runs(r.trace)) EXPECT_LT(len, s.window) << path_string(path);
  }
}

TEST(Parallel, BackendAgreesOnSimplePrograms) {
  ParallelOptions o;
  o.fuel = 10000;
  o.depth = 8;
  EXPECT_TRUE(data_equal(run_parallel(amb(nil(), bottom()), o), d_nil()));
  FiniteData v = run_parallel(amb(numeral(0), numeral(1)), o);
  EXPECT_TRUE(data_equal(v, d_numeral(0)) || data_equal(v, d_numeral(1))) << print(v);
  EXPECT_TRUE(data_equal(run_parallel(app(stdlib::get("f_example"), numeral(0)), o), d_numeral(0)));
}

}  // namespace
}  // namespace amb
