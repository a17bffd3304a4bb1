#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "amb/ast.hpp"
#include "amb/data.hpp"

namespace amb::opsem {

enum class Rule : std::uint8_t {
  S1, S2, S3, S4, S5, S6, S7, S8, S9,
  C1, C2, C2p, C3, C3p,
  P1, P2, P3,
};

// "s-i", "c-ii'", ...
std::string_view tag(Rule r);

bool is_whnf(const Program& m);
bool is_dwhnf(const Program& m);
bool is_bot_like(const Program& m);

struct HeadStep {
  Program result;
  Rule context;  // outermost rule of the derivation (equals `axiom` when the redex is the root)
  Rule axiom;    // the rule applied at the redex: s-i, s-iii, s-vi, s-vii or s-ix
};

// One ↝ step. Empty exactly on w.h.n.f.s. Throws OpenTerm on free variables.
std::optional<HeadStep> step_head(const Program& m);

// Iterates ↝ for at most `fuel` steps; empty if no w.h.n.f. was reached.
// `used`, when given, receives the number of steps taken.
std::optional<Program> head_normalize(const Program& m, std::size_t fuel, std::size_t* used = nullptr);

struct ChoiceStep {
  Rule rule;                  // c-i, c-ii, c-ii', c-iii or c-iii'
  std::optional<Rule> axiom;  // the ↝ axiom underneath c-i/c-ii/c-ii'
  int side = -1;              // 0 or 1 under Amb, -1 for c-i
  Program result;
};

// All ⇝c successors. For an Amb-headed term the list is [left action, right action].
std::vector<ChoiceStep> step_choice_successors(const Program& m);

// The evaluated data part M_D.
FiniteData project_MD(const Program& m);

// Cuts a tree at `depth` data-constructor levels; runs of directly nested Amb are cut at `depth` too.
FiniteData truncate(const FiniteData& d, std::size_t depth);

// ---------------------------------------------------------------------------
// Scheduling

using Path = std::vector<std::uint8_t>;
std::string path_string(const Path& p);

enum class Policy : std::uint8_t { RoundRobin, Seeded, Explicit };

struct Schedule {
  Policy policy = Policy::RoundRobin;
  std::uint64_t seed = 0;
  std::size_t window = 2;
  std::vector<int> prefix;  // explicit picks consumed first
  std::vector<int> cycle;   // then repeated forever

  static Schedule round_robin();
  static Schedule seeded(std::uint64_t seed, std::size_t window = 4);
  static Schedule explicit_picks(std::vector<int> prefix, std::vector<int> cycle, std::size_t window);
};

// An Amb locus awaiting a decision during one ⇝p step.
struct Locus {
  const Path* path;
  std::size_t step;
  bool left_whnf;
  bool right_whnf;
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  // Returns the side (0 or 1) to act on at this locus.
  virtual int pick(const Locus& l) = 0;
  // Called after a commit at `path`; per-locus state there must be forgotten.
  virtual void committed(const Path& path) = 0;
};

// Throws UnfairSchedule if an explicit schedule starves a side for `window` steps and
// InvalidPick for picks outside {0, 1}.
std::unique_ptr<Scheduler> make_scheduler(const Schedule& s);

struct Firing {
  Path path;
  Rule rule;
  std::optional<Rule> axiom;
  int side = -1;
};

struct TraceStep {
  std::size_t index;
  Rule root;  // p-i, p-ii or p-iii
  std::vector<Firing> firings;
  Program result;
  FiniteData snapshot;
};

struct Trace {
  Program initial;
  std::vector<TraceStep> steps;
};

// One ⇝p step. Loci below `horizon` data-constructor levels are left untouched.
Program step_parallel(const Program& m, Scheduler& sched, std::size_t step_index, std::vector<Firing>* firings = nullptr,
                      std::size_t horizon = SIZE_MAX);

// Applies `picks` in pre-order to the Amb loci of `m`; throws InvalidPick if the count or a value is wrong.
Program step_parallel_picks(const Program& m, const std::vector<int>& picks);
std::size_t count_amb_loci(const Program& m, std::size_t horizon = SIZE_MAX);

struct RunOptions {
  std::size_t fuel = 100000;
  std::size_t depth = 64;
  bool record_trace = false;
  // Stop as soon as the snapshot truncated at `depth` has no ⊥ left.
  bool stop_when_converged = true;
  // Replaces the convergence test when set.
  std::function<bool(const FiniteData&)> done;
};

struct RunResult {
  FiniteData value;  // truncated M_D of the last program
  Trace trace;
  std::size_t steps = 0;
  bool converged = false;  // value contains no ⊥
  Program final_program;
};

RunResult run_extract(const Program& m, const Schedule& schedule, const RunOptions& opts);

// Number of ⇝p steps until the program is a d.w.h.n.f., if that happens within `fuel`.
std::optional<std::size_t> steps_to_dwhnf(const Program& m, const Schedule& schedule, std::size_t fuel);

struct EnumerateOptions {
  std::size_t node_limit = 200000;
  std::size_t depth = SIZE_MAX;  // truncation of the collected projections and the stepping horizon
};

// M_D of every program reachable by at most `steps` ⇝p steps under any picks. Throws Budget.
std::set<FiniteData, DataLess> enumerate_schedules(const Program& m, std::size_t steps,
                                                   const EnumerateOptions& opts = {});

// ---------------------------------------------------------------------------
// Parallel backend: each Amb races its two sides on separate threads; the first side to
// reach w.h.n.f. is written to a once-only commit cell and the other is cancelled.
// Results are not reproducible.

struct ParallelOptions {
  std::size_t fuel = 100000;  // per thread
  std::size_t depth = 64;
};

FiniteData run_parallel(const Program& m, const ParallelOptions& opts);

}  // namespace amb::opsem
