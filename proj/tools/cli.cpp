#include "amb/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>

#include "amb/ast.hpp"
#include "amb/domain.hpp"
#include "amb/error.hpp"
#include "amb/gray.hpp"
#include "amb/logic.hpp"
#include "amb/opsem.hpp"
#include "amb/typesys.hpp"

namespace amb::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kDefaultFuel = 100000;
constexpr std::size_t kDefaultDepth = 64;
constexpr std::size_t kDefaultWidth = 160;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A positive integer from the environment, or `fallback` when unset.
std::size_t env_size(const char* name, std::size_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    std::size_t pos = 0;
    unsigned long long n = std::stoull(v, &pos);
    if (pos == std::string(v).size() && n > 0) return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
  }
  throw UsageError(std::string(name) + " must be a positive integer, got '" + v + "'");
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("AMB_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t pos = 0;
    unsigned long long n = std::stoull(v, &pos);
    if (pos == std::string(v).size()) return n;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("AMB_SEED must be an unsigned integer, got '") + v + "'");
}

struct Budget {
  std::size_t fuel = kDefaultFuel;
  std::size_t depth = kDefaultDepth;
};

struct ScheduleFlags {
  CLI::Option* seed_opt = nullptr;
  CLI::Option* schedule_opt = nullptr;
  std::uint64_t seed = 0;
  std::string schedule = "rr";

  opsem::Schedule resolve() const {
    bool seeded = seed_opt->count() > 0;
    std::uint64_t s = seed;
    if (!seeded && schedule_opt->count() > 0) {
      seeded = schedule == "seeded";
      if (seeded) s = env_seed().value_or(0);
    } else if (!seeded) {
      if (auto e = env_seed()) {
        seeded = true;
        s = *e;
      }
    }
    return seeded ? opsem::Schedule::seeded(s) : opsem::Schedule::round_robin();
  }
};

void add_budget(CLI::App* sub, Budget& b, bool fuel = true) {
  if (fuel) sub->add_option("--fuel", b.fuel, "step budget (AMB_FUEL)")->check(CLI::PositiveNumber);
  sub->add_option("--depth", b.depth, "truncation depth (AMB_DEPTH)")->check(CLI::PositiveNumber);
}

void add_schedule(CLI::App* sub, ScheduleFlags& s) {
  s.seed_opt = sub->add_option("--seed", s.seed, "seeded schedule with this seed (AMB_SEED)");
  s.schedule_opt = sub->add_option("--schedule", s.schedule, "rr or seeded")->check(CLI::IsMember({"rr", "seeded"}));
  s.seed_opt->excludes(s.schedule_opt);
}

std::string header(const opsem::Schedule& s) {
  if (s.policy == opsem::Policy::Seeded) return "# schedule: seeded, seed: " + std::to_string(s.seed);
  return "# schedule: rr";
}

void schedule_json(Json& j, const opsem::Schedule& s) {
  bool seeded = s.policy == opsem::Policy::Seeded;
  j["schedule"] = seeded ? "seeded" : "rr";
  j["seed"] = seeded ? Json(s.seed) : Json(nullptr);
}

Program load_main(const std::string& file) {
  Module m = load_module(file);
  if (!m.main) throw Error(file + ": no main definition");
  return m.link_main();
}

std::string firing_tag(const opsem::Firing& f) {
  std::string t(opsem::tag(f.rule));
  if (f.axiom && *f.axiom != f.rule) t += "/" + std::string(opsem::tag(*f.axiom));
  return t;
}

struct TraceLine {
  std::size_t step;
  std::string rule;
  std::string path;
  std::string term;
};

std::vector<TraceLine> trace_lines(const opsem::Trace& t, std::size_t width) {
  std::vector<TraceLine> out;
  for (const auto& s : t.steps) {
    std::string term = print_capped(s.result, width);
    if (s.firings.empty()) {
      out.push_back({s.index, std::string(opsem::tag(s.root)), "root", term});
      continue;
    }
    for (const auto& f : s.firings) out.push_back({s.index, firing_tag(f), opsem::path_string(f.path), term});
  }
  return out;
}

std::string format(const TraceLine& l) {
  return std::to_string(l.step) + "  " + l.rule + "  " + l.path + "  " + l.term;
}

// ---------------------------------------------------------------------------

struct CheckCmd {
  std::string file;
  bool json = false;

  int operator()(std::ostream& out) const {
    Module m = load_module(file);
    auto reports = typesys::check_module(m);
    bool all = true;
    Json defs = Json::array();
    for (const auto& r : reports) {
      all = all && r.report.accepted;
      std::string type = r.type ? print(*r.type) : "?";
      if (json) {
        Json d;
        d["name"] = r.name;
        d["type"] = type;
        d["accepted"] = r.report.accepted;
        if (!r.report.accepted) d["message"] = r.report.describe();
        defs.push_back(d);
      } else {
        out << r.name << " : " << type << "  " << r.report.describe() << "\n";
      }
    }
    if (m.main && !json) out << "main  unchecked: main carries no type ascription\n";
    if (json) {
      Json j;
      j["command"] = "check";
      j["file"] = file;
      j["defs"] = defs;
      j["main"] = m.main ? "unchecked" : "absent";
      j["accepted"] = all;
      out << j.dump(2) << "\n";
    }
    return all ? kOk : kDomainError;
  }
};

struct RunCmd {
  std::string file;
  Budget budget;
  ScheduleFlags sched;
  std::string trace_path;
  std::size_t width = kDefaultWidth;
  bool json = false;
  bool strict = false;
  bool parallel = false;
  bool trace_to_stdout = false;

  int operator()(std::ostream& out, std::ostream& err) const {
    Program p = load_main(file);
    if (parallel) return run_parallel(p, out, err);
    opsem::Schedule s = sched.resolve();
    opsem::RunOptions opts;
    opts.fuel = budget.fuel;
    opts.depth = budget.depth;
    opts.record_trace = trace_to_stdout || !trace_path.empty();
    auto res = opsem::run_extract(p, s, opts);
    std::vector<TraceLine> lines;
    if (opts.record_trace) lines = trace_lines(res.trace, width);
    if (!trace_path.empty()) {
      std::ofstream f(trace_path);
      if (!f) throw Error("cannot write " + trace_path);
      for (const auto& l : lines) f << format(l) << "\n";
    }
    if (json) {
      Json j;
      j["command"] = trace_to_stdout ? "trace" : "run";
      j["file"] = file;
      schedule_json(j, s);
      j["fuel"] = budget.fuel;
      j["depth"] = budget.depth;
      if (trace_to_stdout) {
        Json t = Json::array();
        for (const auto& l : lines) t.push_back({{"step", l.step}, {"rule", l.rule}, {"path", l.path}, {"term", l.term}});
        j["trace"] = t;
      }
      j["value"] = print(res.value);
      j["steps"] = res.steps;
      j["converged"] = res.converged;
      out << j.dump(2) << "\n";
    } else {
      out << header(s) << "\n";
      if (trace_to_stdout) {
        for (const auto& l : lines) out << format(l) << "\n";
      }
      out << "value: " << print(res.value) << "\n";
      out << "steps: " << res.steps << "\n";
      out << "converged: " << (res.converged ? "yes" : "no") << "\n";
    }
    if (strict && !res.converged) {
      err << "error: no complete value within " << budget.fuel << " steps\n";
      return kDomainError;
    }
    return kOk;
  }

  int run_parallel(const Program& p, std::ostream& out, std::ostream& err) const {
    err << "warning: --parallel races threads; results are not reproducible\n";
    opsem::ParallelOptions opts;
    opts.fuel = budget.fuel;
    opts.depth = budget.depth;
    FiniteData v = opsem::run_parallel(p, opts);
    bool converged = !v->has_bot();
    if (json) {
      Json j;
      j["command"] = "run";
      j["file"] = file;
      j["schedule"] = "parallel";
      j["seed"] = nullptr;
      j["value"] = print(v);
      j["converged"] = converged;
      out << j.dump(2) << "\n";
    } else {
      out << "# schedule: parallel\n";
      out << "value: " << print(v) << "\n";
      out << "converged: " << (converged ? "yes" : "no") << "\n";
    }
    if (strict && !converged) {
      err << "error: no complete value within " << budget.fuel << " steps per thread\n";
      return kDomainError;
    }
    return kOk;
  }
};

void print_set(std::ostream& out, const domain::DataSet& ds, bool json, Json j) {
  if (json) {
    Json els = Json::array();
    for (const auto& d : ds) els.push_back(print(d));
    j["elements"] = els;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& d : ds) out << print(d) << "\n";
  }
}

struct DataCmd {
  std::string file;
  Budget budget;
  bool json = false;
  bool strict = false;

  int operator()(std::ostream& out, std::ostream& err) const {
    Program p = load_main(file);
    FiniteData d = domain::denote_fuel(p, budget.fuel, budget.depth);
    auto ds = domain::data_set(d, budget.depth);
    Json j;
    j["command"] = "data";
    j["file"] = file;
    j["fuel"] = budget.fuel;
    j["depth"] = budget.depth;
    print_set(out, ds, json, j);
    bool partial = std::any_of(ds.begin(), ds.end(), [](const FiniteData& e) { return e->has_bot(); });
    if (strict && (partial || ds.empty())) {
      err << "error: data set is incomplete at fuel " << budget.fuel << " and depth " << budget.depth << "\n";
      return kDomainError;
    }
    return kOk;
  }
};

struct EnumerateCmd {
  std::string file;
  std::size_t steps = 20;
  std::size_t depth = kDefaultDepth;
  std::size_t nodes = 200000;
  bool json = false;

  int operator()(std::ostream& out) const {
    Program p = load_main(file);
    opsem::EnumerateOptions opts;
    opts.node_limit = nodes;
    opts.depth = depth;
    auto ds = opsem::enumerate_schedules(p, steps, opts);
    Json j;
    j["command"] = "enumerate";
    j["file"] = file;
    j["steps"] = steps;
    j["depth"] = depth;
    print_set(out, ds, json, j);
    return kOk;
  }
};

struct LogicCmd {
  std::string file;
  std::string show;
  std::vector<std::string> names;
  bool json = false;

  static Json analyse(const std::string& show, const logic::Formula& a) {
    if (show == "harrop") return logic::is_harrop(a);
    if (show == "strict") return logic::is_strict(a);
    if (show == "admissible") return logic::is_admissible(a);
    if (show == "tau") return print(logic::tau(a));
    if (show == "minus") return logic::print(logic::erase_minus(a));
    return logic::print(logic::realizability_translate(a));
  }

  static Json analyse(const std::string& show, const logic::Predicate& p) {
    if (show == "harrop") return logic::is_harrop(p);
    if (show == "strict") {
      std::vector<logic::FOTerm> xs;
      for (std::size_t i = 0; i < logic::arity(p); ++i) xs.push_back(logic::t_var("x" + std::to_string(i)));
      return logic::is_strict(logic::f_app(p, xs));
    }
    if (show == "admissible") return logic::is_admissible(p);
    if (show == "tau") return print(logic::tau(p));
    if (show == "minus") return logic::print(logic::erase_minus(p));
    return logic::print(logic::realizability_translate(p));
  }

  int operator()(std::ostream& out) const {
    auto cfp = logic::load_cfp(file);
    for (const auto& n : names) {
      if (!cfp.find(n)) throw Error(file + ": no declaration named " + n);
    }
    Json results = Json::array();
    for (const auto& [name, decl] : cfp.decls) {
      if (!names.empty() && std::find(names.begin(), names.end(), name) == names.end()) continue;
      Json v = std::visit([&](const auto& d) { return analyse(show, d); }, decl);
      if (json) {
        results.push_back({{"name", name}, {"value", v}});
      } else {
        std::string text = v.is_boolean() ? (v.get<bool>() ? "yes" : "no") : v.get<std::string>();
        out << name << ": " << text << "\n";
      }
    }
    if (json) {
      Json j;
      j["command"] = "logic";
      j["file"] = file;
      j["show"] = show;
      j["results"] = results;
      out << j.dump(2) << "\n";
    }
    return kOk;
  }
};

struct Gray2sdCmd {
  std::string x;
  std::size_t digits = 16;
  std::size_t fuel = kDefaultFuel;
  ScheduleFlags sched;
  std::vector<std::size_t> delays;
  std::optional<std::size_t> bot_at;
  std::string zero = "bot";
  std::string program = "gtos";
  bool json = false;
  bool strict = false;

  int operator()(std::ostream& out, std::ostream& err) const {
    gray::GtosOptions opts;
    opts.schedule = sched.resolve();
    opts.digits = digits;
    opts.fuel = fuel;
    opts.delays = delays;
    opts.bot_at = bot_at;
    opts.zero = zero == "plus" ? gray::ZeroDigit::Plus : zero == "minus" ? gray::ZeroDigit::Minus : gray::ZeroDigit::Bot;
    opts.program = program;
    gray::Rational value = gray::parse_rational(x);
    auto res = gray::gtos_run(value, opts);
    if (json) {
      Json j;
      j["command"] = "gray2sd";
      j["x"] = gray::to_string(value);
      schedule_json(j, opts.schedule);
      j["program"] = program;
      j["digits"] = res.digits;
      j["complete"] = res.complete;
      j["steps"] = res.steps;
      out << j.dump(2) << "\n";
    } else {
      out << header(opts.schedule) << "\n";
      for (int d : res.digits) out << gray::dtosd(d);
      if (!res.complete) out << gray::dtosd(std::nullopt);
      out << "\n";
    }
    if (strict && !res.complete) {
      err << "error: only " << res.digits.size() << " of " << digits << " digits within " << fuel << " steps\n";
      return kDomainError;
    }
    return kOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpreter and tools for a lambda calculus with globally angelic choice", "amb"};
  app.require_subcommand(1);

  CheckCmd check;
  RunCmd run;
  RunCmd trace;
  DataCmd data;
  EnumerateCmd enumerate;
  LogicCmd logic_cmd;
  Gray2sdCmd gray2sd;

  try {
    Budget defaults{env_size("AMB_FUEL", kDefaultFuel), env_size("AMB_DEPTH", kDefaultDepth)};
    run.budget = trace.budget = data.budget = defaults;
    enumerate.depth = defaults.depth;
    gray2sd.fuel = defaults.fuel;
    gray2sd.digits = env_size("AMB_DIGITS", gray2sd.digits);
    run.width = trace.width = env_size("AMB_TRACE_WIDTH", kDefaultWidth);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  auto* c = app.add_subcommand("check", "type-check every definition of a .amb file");
  c->add_option("FILE", check.file)->required()->check(CLI::ExistingFile);
  c->add_flag("--json", check.json);

  auto add_run = [&](CLI::App* sub, RunCmd& cmd) {
    sub->add_option("FILE", cmd.file)->required()->check(CLI::ExistingFile);
    add_budget(sub, cmd.budget);
    add_schedule(sub, cmd.sched);
    sub->add_option("--width", cmd.width, "cap on printed term width in traces")->check(CLI::PositiveNumber);
    sub->add_flag("--json", cmd.json);
    sub->add_flag("--strict", cmd.strict, "exit 1 if the value is still partial when fuel runs out");
  };
  auto* r = app.add_subcommand("run", "run main under a fair schedule and print its data part");
  add_run(r, run);
  r->add_option("--trace", run.trace_path, "write the reduction trace to this file");
  r->add_flag("--parallel", run.parallel, "race Amb sides on threads (not reproducible)");
  auto* t = app.add_subcommand("trace", "like run, printing the reduction trace");
  add_run(t, trace);
  trace.trace_to_stdout = true;

  auto* d = app.add_subcommand("data", "print the data set of the denotation of main");
  d->add_option("FILE", data.file)->required()->check(CLI::ExistingFile);
  add_budget(d, data.budget);
  d->add_flag("--json", data.json);
  d->add_flag("--strict", data.strict, "exit 1 if some element is still partial");

  auto* e = app.add_subcommand("enumerate", "data parts reachable from main under any schedule");
  e->add_option("FILE", enumerate.file)->required()->check(CLI::ExistingFile);
  e->add_option("--steps", enumerate.steps, "number of parallel steps")->check(CLI::NonNegativeNumber);
  e->add_option("--depth", enumerate.depth)->check(CLI::PositiveNumber);
  e->add_option("--nodes", enumerate.nodes, "search node budget")->check(CLI::PositiveNumber);
  e->add_flag("--json", enumerate.json);

  auto* l = app.add_subcommand("logic", "analyse the declarations of a .cfp file");
  l->add_option("FILE", logic_cmd.file)->required()->check(CLI::ExistingFile);
  l->add_option("--show", logic_cmd.show)
      ->required()
      ->check(CLI::IsMember({"harrop", "strict", "admissible", "tau", "minus", "realize"}));
  l->add_option("--name", logic_cmd.names, "restrict to these declarations");
  l->add_flag("--json", logic_cmd.json);

  auto* g = app.add_subcommand("gray2sd", "convert a rational's Gray code to signed digits");
  g->add_option("--x", gray2sd.x, "P/Q, integer or decimal in [-1, 1]")->required();
  g->add_option("--digits", gray2sd.digits)->check(CLI::PositiveNumber);
  g->add_option("--fuel", gray2sd.fuel)->check(CLI::PositiveNumber);
  add_schedule(g, gray2sd.sched);
  g->add_option("--delays", gray2sd.delays, "comma list of per-digit step delays")->delimiter(',');
  g->add_option("--bot-at", gray2sd.bot_at, "make this input digit undefined");
  g->add_option("--zero", gray2sd.zero, "presentation of an undefined digit")->check(CLI::IsMember({"bot", "plus", "minus"}));
  g->add_option("--program", gray2sd.program)->check(CLI::IsMember({"gtos", "gtos_simple"}));
  g->add_flag("--json", gray2sd.json);
  g->add_flag("--strict", gray2sd.strict, "exit 1 if fewer digits than requested were produced");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& ex) {
    int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*c) return check(out);
    if (*r) return run(out, err);
    if (*t) return trace(out, err);
    if (*d) return data(out, err);
    if (*e) return enumerate(out);
    if (*l) return logic_cmd(out);
    if (*g) return gray2sd(out, err);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsageError;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kDomainError;
  }
  return kUsageError;
}

}  // namespace amb::cli
