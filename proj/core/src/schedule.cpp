#include <map>

#include "amb/error.hpp"
#include "amb/opsem.hpp"
#include "hashing.hpp"

namespace amb::opsem {

Schedule Schedule::round_robin() { return Schedule{}; }

Schedule Schedule::seeded(std::uint64_t seed, std::size_t window) {
  Schedule s;
  s.policy = Policy::Seeded;
  s.seed = seed;
  s.window = window;
  return s;
}

Schedule Schedule::explicit_picks(std::vector<int> prefix, std::vector<int> cycle, std::size_t window) {
  Schedule s;
  s.policy = Policy::Explicit;
  s.prefix = std::move(prefix);
  s.cycle = std::move(cycle);
  s.window = window;
  return s;
}

namespace {

// Consecutive picks of one side at one locus.
struct Run {
  int side = -1;
  std::size_t length = 0;
};

class RunTracker {
 public:
  explicit RunTracker(std::size_t window) : max_run_(window - 1) {}

  // True if picking `side` keeps the other side within the window.
  bool allowed(const Path& p, int side) {
    const Run& r = runs_[p];
    return r.side != side || r.length < max_run_;
  }

  void note(const Path& p, int side) {
    Run& r = runs_[p];
    if (r.side == side) {
      ++r.length;
    } else {
      r.side = side;
      r.length = 1;
    }
  }

  void forget(const Path& p) { runs_.erase(p); }

 private:
  std::size_t max_run_;
  std::map<Path, Run> runs_;
};

class RoundRobin : public Scheduler {
 public:
  int pick(const Locus& l) override {
    int& next = next_[*l.path];
    int side = next;
    next = 1 - side;
    return side;
  }
  void committed(const Path& p) override { next_.erase(p); }

 private:
  std::map<Path, int> next_;
};

std::size_t path_hash(const Path& p) {
  std::size_t h = detail::mix(p.size());
  for (auto b : p) h = detail::combine(h, b);
  return h;
}

class Seeded : public Scheduler {
 public:
  Seeded(std::uint64_t seed, std::size_t window) : seed_(seed), runs_(window) {}

  int pick(const Locus& l) override {
    std::size_t r = detail::mix(detail::combine(detail::mix(seed_), detail::combine(l.step, path_hash(*l.path))));
    int side = static_cast<int>(r & 1);
    if (!runs_.allowed(*l.path, side)) side = 1 - side;
    runs_.note(*l.path, side);
    return side;
  }
  void committed(const Path& p) override { runs_.forget(p); }

 private:
  std::uint64_t seed_;
  RunTracker runs_;
};

class Explicit : public Scheduler {
 public:
  Explicit(std::vector<int> prefix, std::vector<int> cycle, std::size_t window)
      : prefix_(std::move(prefix)), cycle_(std::move(cycle)), window_(window), runs_(window) {
    if (cycle_.empty()) throw UnfairSchedule("an explicit schedule needs a non-empty repeating part");
    for (int p : prefix_) check_value(p);
    for (int p : cycle_) check_value(p);
  }

  int pick(const Locus& l) override {
    int side = next_ < prefix_.size() ? prefix_[next_] : cycle_[(next_ - prefix_.size()) % cycle_.size()];
    ++next_;
    if (!runs_.allowed(*l.path, side)) {
      throw UnfairSchedule("side " + std::to_string(1 - side) + " at " + path_string(*l.path) + " starved for " +
                           std::to_string(window_) + " steps");
    }
    runs_.note(*l.path, side);
    return side;
  }
  void committed(const Path& p) override { runs_.forget(p); }

 private:
  static void check_value(int p) {
    if (p != 0 && p != 1) throw InvalidPick("pick " + std::to_string(p) + " is not 0 or 1");
  }

  std::vector<int> prefix_;
  std::vector<int> cycle_;
  std::size_t window_;
  std::size_t next_ = 0;
  RunTracker runs_;
};

}  // namespace

std::unique_ptr<Scheduler> make_scheduler(const Schedule& s) {
  if (s.window < 2) throw Error("fairness window must be at least 2");
  switch (s.policy) {
    case Policy::RoundRobin:
      return std::make_unique<RoundRobin>();
    case Policy::Seeded:
      return std::make_unique<Seeded>(s.seed, s.window);
    case Policy::Explicit:
      return std::make_unique<Explicit>(s.prefix, s.cycle, s.window);
  }
  return std::make_unique<RoundRobin>();
}

}  // namespace amb::opsem
