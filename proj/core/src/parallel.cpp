#include <chrono>
#include <condition_variable>
#include <mutex>
#include <stop_token>
#include <thread>

#include "amb/error.hpp"
#include "amb/opsem.hpp"

namespace amb::opsem {

namespace {

using namespace std::chrono_literals;

// Head-normalizes `m`, polling both stop tokens every few steps.
std::optional<Program> normalize(const Program& m, std::size_t fuel, const std::stop_token& own,
                                 const std::stop_token& outer) {
  Program cur = m;
  for (std::size_t n = 0; !is_whnf(cur); ++n) {
    if (n >= fuel) return std::nullopt;
    if ((n & 63) == 0 && (own.stop_requested() || outer.stop_requested())) return std::nullopt;
    auto s = step_head(cur);
    if (cur->kind() == Kind::Bottom) return std::nullopt;
    cur = s->result;
  }
  return cur;
}

struct CommitCell {
  std::mutex mu;
  std::condition_variable cv;
  std::optional<Program> value;
  int finished = 0;
};

class Evaluator {
 public:
  explicit Evaluator(const ParallelOptions& opts) : opts_(opts) {}

  FiniteData eval(const Program& m, std::size_t depth, std::size_t ambs, const std::stop_token& outer) {
    if (depth == 0 || outer.stop_requested()) return d_bot();
    auto w = normalize(m, opts_.fuel, std::stop_token{}, outer);
    if (!w) return d_bot();
    const Program& v = *w;
    if (v->kind() == Kind::Lam) return d_fun(v);
    if (v->is_con(Ctor::Amb)) {
      if (ambs >= depth) return d_bot();
      auto winner = race(v->children()[0], v->children()[1], outer);
      if (!winner) return d_bot();
      return eval(*winner, depth, ambs + 1, outer);
    }
    std::vector<FiniteData> kids;
    for (const auto& c : v->children()) kids.push_back(eval(c, depth - 1, 0, outer));
    switch (v->ctor()) {
      case Ctor::Nil:
        return d_nil();
      case Ctor::Left:
        return d_le(kids[0]);
      case Ctor::Right:
        return d_ri(kids[0]);
      default:
        return d_pair(kids[0], kids[1]);
    }
  }

 private:
  std::optional<Program> race(const Program& a, const Program& b, const std::stop_token& outer) {
    CommitCell cell;
    auto worker = [&](const Program& side) {
      return [&cell, &outer, side, this](std::stop_token own) {
        auto r = normalize(side, opts_.fuel, own, outer);
        std::lock_guard lock(cell.mu);
        if (r && !cell.value) cell.value = r;
        ++cell.finished;
        cell.cv.notify_all();
      };
    };
    std::jthread left(worker(a));
    std::jthread right(worker(b));
    {
      std::unique_lock lock(cell.mu);
      while (!cell.value && cell.finished < 2 && !outer.stop_requested()) cell.cv.wait_for(lock, 1ms);
    }
    left.request_stop();
    right.request_stop();
    left.join();
    right.join();
    return cell.value;
  }

  ParallelOptions opts_;
};

}  // namespace

FiniteData run_parallel(const Program& m, const ParallelOptions& opts) {
  if (!m->closed()) throw OpenTerm("term is not closed: " + print_capped(m, 60));
  Evaluator ev(opts);
  std::stop_source never;
  return ev.eval(m, opts.depth, 0, never.get_token());
}

}  // namespace amb::opsem
