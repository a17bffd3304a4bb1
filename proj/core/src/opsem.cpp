#include "amb/opsem.hpp"

#include <unordered_set>

#include "amb/error.hpp"

namespace amb::opsem {

std::string_view tag(Rule r) {
  switch (r) {
    case Rule::S1: return "s-i";
    case Rule::S2: return "s-ii";
    case Rule::S3: return "s-iii";
    case Rule::S4: return "s-iv";
    case Rule::S5: return "s-v";
    case Rule::S6: return "s-vi";
    case Rule::S7: return "s-vii";
    case Rule::S8: return "s-viii";
    case Rule::S9: return "s-ix";
    case Rule::C1: return "c-i";
    case Rule::C2: return "c-ii";
    case Rule::C2p: return "c-ii'";
    case Rule::C3: return "c-iii";
    case Rule::C3p: return "c-iii'";
    case Rule::P1: return "p-i";
    case Rule::P2: return "p-ii";
    case Rule::P3: return "p-iii";
  }
  return "?";
}

bool is_whnf(const Program& m) { return m->kind() == Kind::Lam || m->kind() == Kind::Con; }

bool is_dwhnf(const Program& m) { return is_whnf(m) && !m->is_con(Ctor::Amb); }

bool is_bot_like(const Program& m) {
  switch (m->kind()) {
    case Kind::Bottom:
      return true;
    case Kind::App:
    case Kind::StrictApp:
      return m->fun()->kind() == Kind::Con;
    case Kind::Case: {
      const Program& s = m->scrutinee();
      if (s->kind() == Kind::Lam) return true;
      return s->kind() == Kind::Con && m->clause_for(s->ctor()) == nullptr;
    }
    default:
      return false;
  }
}

namespace {

void require_closed(const Program& m) {
  if (!m->closed()) throw OpenTerm("term is not closed: " + print_capped(m, 60));
}

struct Frame {
  Program node;
  Rule rule;
};

// One ↝ step on a closed term; `fixed` reports that the redex was ⊥ itself, so the step is the identity.
std::optional<HeadStep> head_step(const Program& m, bool* fixed) {
  std::vector<Frame> frames;
  Program cur = m;
  Program result;
  Rule axiom = Rule::S9;
  if (fixed) *fixed = false;
  while (!result) {
    if (is_bot_like(cur)) {
      if (fixed && cur->kind() == Kind::Bottom) *fixed = true;
      axiom = Rule::S9;
      result = bottom();
      break;
    }
    switch (cur->kind()) {
      case Kind::Lam:
      case Kind::Con:
        return std::nullopt;
      case Kind::Var:
      case Kind::BVar:
        throw OpenTerm("free variable in head position: " + print_capped(cur, 60));
      case Kind::Bottom:
        break;  // handled as ⊥-like
      case Kind::App:
        if (cur->fun()->kind() == Kind::Lam) {
          axiom = Rule::S1;
          result = instantiate1(cur->fun()->body(), cur->arg());
        } else {
          frames.push_back({cur, Rule::S2});
          cur = cur->fun();
        }
        break;
      case Kind::StrictApp:
        if (!is_whnf(cur->arg())) {
          frames.push_back({cur, Rule::S5});
          cur = cur->arg();
        } else if (cur->fun()->kind() == Kind::Lam) {
          axiom = Rule::S3;
          result = instantiate1(cur->fun()->body(), cur->arg());
        } else {
          frames.push_back({cur, Rule::S4});
          cur = cur->fun();
        }
        break;
      case Kind::Rec:
        axiom = Rule::S6;
        result = app(cur->body(), cur);
        break;
      case Kind::Case: {
        const Program& s = cur->scrutinee();
        if (s->kind() == Kind::Con) {
          axiom = Rule::S7;
          result = instantiate(cur->clause_for(s->ctor())->body, s->children());
        } else {
          frames.push_back({cur, Rule::S8});
          cur = s;
        }
        break;
      }
    }
  }
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
    const Program& n = it->node;
    switch (it->rule) {
      case Rule::S2:
        result = app(result, n->arg());
        break;
      case Rule::S4:
        result = strict_app(result, n->arg());
        break;
      case Rule::S5:
        result = strict_app(n->fun(), result);
        break;
      case Rule::S8:
        result = case_raw(result, n->clauses());
        break;
      default:
        break;
    }
  }
  return HeadStep{result, frames.empty() ? axiom : frames.front().rule, axiom};
}

}  // namespace

std::optional<HeadStep> step_head(const Program& m) {
  require_closed(m);
  return head_step(m, nullptr);
}

std::optional<Program> head_normalize(const Program& m, std::size_t fuel, std::size_t* used) {
  require_closed(m);
  Program cur = m;
  std::size_t n = 0;
  bool fixed = false;
  while (!is_whnf(cur)) {
    if (n >= fuel) {
      if (used) *used = n;
      return std::nullopt;
    }
    auto s = head_step(cur, &fixed);
    ++n;
    if (fixed) {
      // ⊥ steps to itself forever; the remaining fuel would be burnt the same way.
      if (used) *used = fuel;
      return std::nullopt;
    }
    cur = s->result;
  }
  if (used) *used = n;
  return cur;
}

std::vector<ChoiceStep> step_choice_successors(const Program& m) {
  require_closed(m);
  std::vector<ChoiceStep> out;
  if (!is_whnf(m)) {
    auto s = head_step(m, nullptr);
    out.push_back({Rule::C1, s->axiom, -1, s->result});
    return out;
  }
  if (!m->is_con(Ctor::Amb)) return out;
  for (int side = 0; side < 2; ++side) {
    const Program& mi = m->children()[side];
    if (is_whnf(mi)) {
      out.push_back({side == 0 ? Rule::C3 : Rule::C3p, std::nullopt, side, mi});
    } else {
      auto s = head_step(mi, nullptr);
      Program r = side == 0 ? amb(s->result, m->children()[1]) : amb(m->children()[0], s->result);
      out.push_back({side == 0 ? Rule::C2 : Rule::C2p, s->axiom, side, r});
    }
  }
  return out;
}

FiniteData project_MD(const Program& m) {
  switch (m->kind()) {
    case Kind::Lam:
      return d_fun(m);
    case Kind::Con:
      switch (m->ctor()) {
        case Ctor::Nil:
          return d_nil();
        case Ctor::Left:
          return d_le(project_MD(m->children()[0]));
        case Ctor::Right:
          return d_ri(project_MD(m->children()[0]));
        case Ctor::Pair:
          return d_pair(project_MD(m->children()[0]), project_MD(m->children()[1]));
        case Ctor::Amb:
          return d_bot();
      }
      break;
    default:
      break;
  }
  return d_bot();
}

namespace {

FiniteData truncate_at(const FiniteData& d, std::size_t depth, std::size_t ambs) {
  if (depth == 0) return d_bot();
  switch (d->kind()) {
    case DKind::Bot:
    case DKind::Nil:
    case DKind::Fun:
      return d;
    case DKind::AmbD:
      if (ambs >= depth) return d_bot();
      return d_amb(truncate_at(d->child(0), depth, ambs + 1), truncate_at(d->child(1), depth, ambs + 1));
    default: {
      std::vector<FiniteData> kids;
      bool same = true;
      for (const auto& c : d->children()) {
        kids.push_back(truncate_at(c, depth - 1, 0));
        same = same && kids.back() == c;
      }
      return same ? d : d_node(d->kind(), std::move(kids));
    }
  }
}

}  // namespace

FiniteData truncate(const FiniteData& d, std::size_t depth) { return truncate_at(d, depth, 0); }

std::string path_string(const Path& p) {
  if (p.empty()) return "root";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) s += ".";
    s += std::to_string(p[i]);
  }
  return s;
}

namespace {

class ParallelStepper {
 public:
  ParallelStepper(Scheduler& sched, std::size_t step, std::vector<Firing>* firings, std::size_t horizon)
      : sched_(sched), step_(step), firings_(firings), horizon_(horizon) {}

  Program run(const Program& t, std::size_t level) {
    if (level >= horizon_) return t;
    if (t->kind() == Kind::Lam) return t;
    if (t->kind() == Kind::Con && t->ctor() != Ctor::Amb) {
      const auto& kids = t->children();
      if (kids.empty()) return t;
      std::vector<Program> next;
      next.reserve(kids.size());
      bool changed = false;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        path_.push_back(static_cast<std::uint8_t>(i));
        next.push_back(run(kids[i], level + 1));
        path_.pop_back();
        changed = changed || next.back() != kids[i];
      }
      return changed ? con(t->ctor(), std::move(next)) : t;
    }
    if (t->is_con(Ctor::Amb)) {
      const Program& l = t->children()[0];
      const Program& r = t->children()[1];
      Locus locus{&path_, step_, is_whnf(l), is_whnf(r)};
      int side = sched_.pick(locus);
      if (side != 0 && side != 1) throw InvalidPick("pick " + std::to_string(side) + " at " + path_string(path_));
      const Program& mine = side == 0 ? l : r;
      if (side == 0 ? locus.left_whnf : locus.right_whnf) {
        record(side == 0 ? Rule::C3 : Rule::C3p, std::nullopt, side);
        sched_.committed(path_);
        return mine;
      }
      auto s = head_step(mine, nullptr);
      record(side == 0 ? Rule::C2 : Rule::C2p, s->axiom, side);
      return side == 0 ? amb(s->result, r) : amb(l, s->result);
    }
    auto s = head_step(t, nullptr);
    record(Rule::C1, s->axiom, -1);
    return s->result;
  }

 private:
  void record(Rule r, std::optional<Rule> axiom, int side) {
    if (firings_) firings_->push_back({path_, r, axiom, side});
  }

  Scheduler& sched_;
  std::size_t step_;
  std::vector<Firing>* firings_;
  std::size_t horizon_;
  Path path_;
};

class PickList : public Scheduler {
 public:
  explicit PickList(const std::vector<int>& picks) : picks_(picks) {}
  int pick(const Locus& l) override {
    if (next_ >= picks_.size()) throw InvalidPick("not enough picks at " + path_string(*l.path));
    return picks_[next_++];
  }
  void committed(const Path&) override {}
  std::size_t consumed() const { return next_; }

 private:
  const std::vector<int>& picks_;
  std::size_t next_ = 0;
};

void count_loci(const Program& t, std::size_t level, std::size_t horizon, std::size_t& n) {
  if (level >= horizon || t->kind() == Kind::Lam) return;
  if (t->kind() == Kind::Con && t->ctor() != Ctor::Amb) {
    for (const auto& c : t->children()) count_loci(c, level + 1, horizon, n);
    return;
  }
  if (t->is_con(Ctor::Amb)) ++n;
}

}  // namespace

Program step_parallel(const Program& m, Scheduler& sched, std::size_t step_index, std::vector<Firing>* firings,
                      std::size_t horizon) {
  require_closed(m);
  ParallelStepper p(sched, step_index, firings, horizon);
  return p.run(m, 0);
}

std::size_t count_amb_loci(const Program& m, std::size_t horizon) {
  std::size_t n = 0;
  count_loci(m, 0, horizon, n);
  return n;
}

Program step_parallel_picks(const Program& m, const std::vector<int>& picks) {
  PickList sched(picks);
  Program r = step_parallel(m, sched, 0);
  if (sched.consumed() != picks.size()) throw InvalidPick("too many picks supplied");
  return r;
}

namespace {

Rule root_rule(const Program& m) {
  if (m->kind() == Kind::Lam) return Rule::P3;
  if (m->kind() == Kind::Con && m->ctor() != Ctor::Amb) return Rule::P2;
  return Rule::P1;
}

}  // namespace

RunResult run_extract(const Program& m, const Schedule& schedule, const RunOptions& opts) {
  require_closed(m);
  auto sched = make_scheduler(schedule);
  RunResult res;
  res.trace.initial = m;
  Program cur = m;
  FiniteData snap = truncate(project_MD(cur), opts.depth);
  for (std::size_t step = 0; step < opts.fuel; ++step) {
    if (opts.done ? opts.done(snap) : opts.stop_when_converged && !snap->has_bot()) break;
    std::vector<Firing> firings;
    Rule root = root_rule(cur);
    cur = step_parallel(cur, *sched, step, opts.record_trace ? &firings : nullptr, opts.depth);
    ++res.steps;
    snap = truncate(project_MD(cur), opts.depth);
    if (opts.record_trace) res.trace.steps.push_back({step, root, std::move(firings), cur, snap});
  }
  res.value = snap;
  res.converged = !snap->has_bot();
  res.final_program = cur;
  return res;
}

std::optional<std::size_t> steps_to_dwhnf(const Program& m, const Schedule& schedule, std::size_t fuel) {
  require_closed(m);
  auto sched = make_scheduler(schedule);
  Program cur = m;
  for (std::size_t step = 0; step <= fuel; ++step) {
    if (is_dwhnf(cur)) return step;
    if (step == fuel) break;
    cur = step_parallel(cur, *sched, step, nullptr, 1);
  }
  return std::nullopt;
}

std::set<FiniteData, DataLess> enumerate_schedules(const Program& m, std::size_t steps, const EnumerateOptions& opts) {
  require_closed(m);
  std::set<FiniteData, DataLess> out;
  std::unordered_set<Program, ProgramHash, ProgramEq> seen{m};
  std::vector<Program> frontier{m};
  out.insert(truncate(project_MD(m), opts.depth));
  for (std::size_t s = 0; s < steps && !frontier.empty(); ++s) {
    std::vector<Program> next;
    for (const auto& t : frontier) {
      std::size_t loci = count_amb_loci(t, opts.depth);
      if (loci > 20) throw Budget("too many Amb loci to enumerate: " + std::to_string(loci));
      std::vector<int> picks(loci);
      for (std::size_t mask = 0; mask < (std::size_t{1} << loci); ++mask) {
        for (std::size_t i = 0; i < loci; ++i) picks[i] = static_cast<int>((mask >> i) & 1);
        PickList sched(picks);
        Program succ = step_parallel(t, sched, s, nullptr, opts.depth);
        if (seen.insert(succ).second) {
          next.push_back(succ);
          out.insert(truncate(project_MD(succ), opts.depth));
          if (seen.size() > opts.node_limit) {
            throw Budget("schedule enumeration exceeded " + std::to_string(opts.node_limit) + " programs");
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace amb::opsem
