#include "amb/typesys.hpp"

#include <algorithm>

#include "amb/error.hpp"

namespace amb::typesys {

TypeContext::TypeContext(std::initializer_list<std::pair<std::string, Type>> entries) {
  for (const auto& [n, t] : entries) add(n, t);
}

void TypeContext::add(const std::string& name, const Type& t) {
  if (lookup(name)) throw Error("duplicate context entry '" + name + "'");
  entries_.emplace_back(name, t);
}

const Type* TypeContext::lookup(const std::string& name) const {
  for (const auto& [n, t] : entries_) {
    if (n == name) return &t;
  }
  return nullptr;
}

std::string TypingReport::describe() const {
  if (accepted) return "accepted";
  std::string s = "rejected: " + message;
  if (!expected.empty() && !actual.empty()) {
    s += " (expected " + expected + ", found " + actual + ")";
  } else if (!expected.empty()) {
    s += " (expected " + expected + ")";
  }
  if (!locus.empty()) s += " at " + locus;
  return s;
}

namespace {

constexpr std::size_t kUnifyBudget = 200000;
constexpr int kUnfoldLimit = 64;

struct Reject {
  std::string message;
  Program at;
  std::string path;
  std::string expected;
  std::string actual;
};

class Checker {
 public:
  explicit Checker(const Globals& globals) : globals_(globals) {}

  void bind_local(const std::string& name, const Type& t) { locals_.emplace_back(name, t); }

  void check(const Program& m, const Type& t) {
    switch (m->kind()) {
      case Kind::Bottom:
        return;
      case Kind::BVar:
        fail(m, "loosely bound variable");
      case Kind::Var: {
        Type actual = lookup(m);
        expect_equal(m, t, actual);
        return;
      }
      case Kind::Lam: {
        Type e = expose(t);
        if (e->kind() == TKind::Meta) {
          Type shape = arrow_t(fresh(), fresh());
          unify_or_fail(m, e, shape);
          e = shape;
        }
        if (e->kind() != TKind::Arrow) fail(m, "lambda checked against a non-function type", t);
        auto [name, body] = open1(m);
        with_local(name, e->left(), [&] { descend(0, [&] { check(body, e->right()); }); });
        return;
      }
      case Kind::Con:
        check_con(m, t);
        return;
      case Kind::Rec: {
        const Program& f = m->body();
        if (f->kind() == Kind::Lam) {
          auto [name, body] = open1(f);
          with_local(name, t, [&] { descend(0, [&] { check(body, t); }); });
        } else {
          descend(0, [&] { check(f, arrow_t(t, t)); });
        }
        return;
      }
      case Kind::Case:
        check_case(m, t);
        return;
      case Kind::App:
      case Kind::StrictApp: {
        Type tf = fresh();
        descend(0, [&] { check(m->fun(), tf); });
        Type e = expose(tf);
        if (e->kind() == TKind::Meta) {
          Type shape = arrow_t(fresh(), fresh());
          unify_or_fail(m->fun(), e, shape);
          e = shape;
        }
        if (e->kind() != TKind::Arrow) fail(m->fun(), "applied term is not a function", {}, tf);
        expect_equal(m, t, e->right());
        descend(1, [&] { check(m->arg(), e->left()); });
        return;
      }
    }
  }

  bool unify(const Type& a, const Type& b) {
    budget_ = 0;
    assumed_.clear();
    return unify_rec(a, b);
  }

  Type zonk(const Type& t) const {
    Type r = resolve(t);
    if (!r->has_meta()) return r;
    if (r->kind() == TKind::Meta) return r;
    std::vector<Type> kids;
    for (const auto& c : r->children()) kids.push_back(zonk(c));
    switch (r->kind()) {
      case TKind::Sum:
        return sum_t(kids[0], kids[1]);
      case TKind::Prod:
        return prod_t(kids[0], kids[1]);
      case TKind::Arrow:
        return arrow_t(kids[0], kids[1]);
      case TKind::AmbT:
        return amb_t(kids[0]);
      case TKind::Fix:
        return fix_raw(r->name(), kids[0]);
      default:
        return r;
    }
  }

  std::string current_path() const {
    std::string s;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      if (i > 0) s += ".";
      s += std::to_string(path_[i]);
    }
    return s;
  }

 private:
  [[noreturn]] void fail(const Program& at, const std::string& msg, std::optional<Type> expected = {},
                         std::optional<Type> actual = {}) {
    Reject r{msg, at, current_path(), "", ""};
    if (expected) r.expected = print(zonk(*expected));
    if (actual) r.actual = print(zonk(*actual));
    throw r;
  }

  template <typename F>
  void descend(int index, F&& f) {
    path_.push_back(index);
    f();
    path_.pop_back();
  }

  template <typename F>
  void with_local(const std::string& name, const Type& t, F&& f) {
    locals_.emplace_back(name, t);
    f();
    locals_.pop_back();
  }

  std::pair<std::string, Program> open1(const Program& lam_node) {
    std::string name = "%v" + std::to_string(counter_++);
    return {name, instantiate1(lam_node->body(), var(name))};
  }

  Type fresh() {
    metas_.push_back(nullptr);
    return tmeta(static_cast<std::uint32_t>(metas_.size() - 1));
  }

  Type resolve(Type t) const {
    while (t->kind() == TKind::Meta && metas_[t->index()]) t = metas_[t->index()];
    return t;
  }

  // Resolves metas and unfolds fixpoints until the head is informative.
  Type expose(const Type& t) const {
    Type r = resolve(t);
    for (int i = 0; i < kUnfoldLimit && r->kind() == TKind::Fix; ++i) r = resolve(unfold(r));
    return r;
  }

  Type lookup(const Program& v) {
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
      if (it->first == v->name()) return it->second;
    }
    if (auto g = globals_.find(v->name()); g != globals_.end()) {
      Type t = g->second.type;
      for (const auto& a : free_vars(t)) t = subst(t, a, fresh());
      return t;
    }
    fail(v, "unbound variable '" + v->name() + "'");
  }

  void expect_equal(const Program& at, const Type& expected, const Type& actual) {
    if (!unify(expected, actual)) fail(at, "type mismatch", expected, actual);
  }

  void unify_or_fail(const Program& at, const Type& a, const Type& b) {
    if (!unify(a, b)) fail(at, "type mismatch", a, b);
  }

  bool occurs(std::uint32_t id, const Type& t) const {
    Type r = resolve(t);
    if (r->kind() == TKind::Meta) return r->index() == id;
    if (!r->has_meta()) return false;
    return std::any_of(r->children().begin(), r->children().end(), [&](const Type& c) { return occurs(id, c); });
  }

  bool unify_rec(const Type& x, const Type& y) {
    if (++budget_ > kUnifyBudget) return false;
    Type a = resolve(x);
    Type b = resolve(y);
    if (a == b) return true;
    if (a->kind() == TKind::Meta) {
      if (b->kind() == TKind::Meta && b->index() == a->index()) return true;
      if (occurs(a->index(), b)) return false;
      metas_[a->index()] = b;
      return true;
    }
    if (b->kind() == TKind::Meta) return unify_rec(b, a);
    for (const auto& [p, q] : assumed_) {
      if (alpha_equal(p, a) && alpha_equal(q, b)) return true;
    }
    if (a->kind() == TKind::Fix || b->kind() == TKind::Fix) {
      assumed_.emplace_back(a, b);
      return unify_rec(a->kind() == TKind::Fix ? unfold(a) : a, b->kind() == TKind::Fix ? unfold(b) : b);
    }
    if (a->kind() != b->kind()) return false;
    if (a->kind() == TKind::Var) return a->name() == b->name();
    if (a->kind() == TKind::BVar) return a->index() == b->index();
    for (std::size_t i = 0; i < a->children().size(); ++i) {
      if (!unify_rec(a->children()[i], b->children()[i])) return false;
    }
    return true;
  }

  Type shape_for(Ctor c) {
    switch (c) {
      case Ctor::Nil:
        return unit_t();
      case Ctor::Left:
      case Ctor::Right:
        return sum_t(fresh(), fresh());
      case Ctor::Pair:
        return prod_t(fresh(), fresh());
      case Ctor::Amb:
        return amb_t(fresh());
    }
    return unit_t();
  }

  static TKind kind_for(Ctor c) {
    switch (c) {
      case Ctor::Nil:
        return TKind::Unit;
      case Ctor::Left:
      case Ctor::Right:
        return TKind::Sum;
      case Ctor::Pair:
        return TKind::Prod;
      case Ctor::Amb:
        return TKind::AmbT;
    }
    return TKind::Unit;
  }

  void check_con(const Program& m, const Type& t) {
    Type e = expose(t);
    if (e->kind() == TKind::Meta) {
      Type shape = shape_for(m->ctor());
      unify_or_fail(m, e, shape);
      e = shape;
    }
    if (e->kind() != kind_for(m->ctor())) {
      fail(m, std::string(ctor_name(m->ctor())) + " does not inhabit this type", t);
    }
    const auto& kids = m->children();
    switch (m->ctor()) {
      case Ctor::Nil:
        return;
      case Ctor::Left:
        descend(0, [&] { check(kids[0], e->left()); });
        return;
      case Ctor::Right:
        descend(0, [&] { check(kids[0], e->right()); });
        return;
      case Ctor::Pair:
        descend(0, [&] { check(kids[0], e->left()); });
        descend(1, [&] { check(kids[1], e->right()); });
        return;
      case Ctor::Amb:
        descend(0, [&] { check(kids[0], e->body()); });
        descend(1, [&] { check(kids[1], e->body()); });
        return;
    }
  }

  void check_case(const Program& m, const Type& t) {
    Type ts = fresh();
    descend(0, [&] { check(m->scrutinee(), ts); });
    Type e = expose(ts);
    if (e->kind() == TKind::Meta && !m->clauses().empty()) {
      Type shape = shape_for(m->clauses().front().ctor);
      unify_or_fail(m->scrutinee(), e, shape);
      e = shape;
    }
    int index = 1;
    for (const auto& cl : m->clauses()) {
      int here = index++;
      if (cl.ctor == Ctor::Nil) fail(m, "no typing rule for a case clause on Nil");
      if (e->kind() != kind_for(cl.ctor)) {
        fail(m->scrutinee(), "clause " + std::string(ctor_name(cl.ctor)) + " does not match the scrutinee type", {},
             ts);
      }
      std::vector<Type> binder_types;
      switch (cl.ctor) {
        case Ctor::Left:
          binder_types = {e->left()};
          break;
        case Ctor::Right:
          binder_types = {e->right()};
          break;
        case Ctor::Pair:
          binder_types = {e->left(), e->right()};
          break;
        case Ctor::Amb:
          binder_types = {e->body(), e->body()};
          break;
        case Ctor::Nil:
          break;
      }
      std::vector<Program> names;
      std::size_t base = locals_.size();
      for (const auto& bt : binder_types) {
        std::string n = "%v" + std::to_string(counter_++);
        names.push_back(var(n));
        locals_.emplace_back(n, bt);
      }
      Program body = instantiate(cl.body, names);
      descend(here, [&] { check(body, t); });
      locals_.resize(base);
    }
  }

  const Globals& globals_;
  std::vector<std::pair<std::string, Type>> locals_;
  std::vector<Type> metas_;
  std::vector<std::pair<Type, Type>> assumed_;
  std::vector<int> path_;
  std::size_t budget_ = 0;
  std::size_t counter_ = 0;
};

std::set<std::string> rigid_vars(const TypeContext& ctx, const Type& t) {
  std::set<std::string> vars = free_vars(t);
  for (const auto& [n, ty] : ctx.entries()) {
    auto fv = free_vars(ty);
    vars.insert(fv.begin(), fv.end());
  }
  return vars;
}

}  // namespace

bool type_equal(const Type& s, const Type& t) {
  Globals none;
  Checker c(none);
  return c.unify(s, t);
}

TypingReport check(const TypeContext& ctx, const Program& m, const Type& t, const Globals& globals) {
  auto determined = rigid_vars(ctx, t);
  if (!is_regular(t, determined)) throw NonRegularType("type " + print(t) + " is not regular");
  for (const auto& [n, ty] : ctx.entries()) {
    if (!is_regular(ty, determined)) throw NonRegularType("context entry " + n + " : " + print(ty) + " is not regular");
  }
  Checker c(globals);
  for (const auto& [n, ty] : ctx.entries()) c.bind_local(n, ty);
  TypingReport report;
  try {
    c.check(m, t);
  } catch (const Reject& r) {
    report.accepted = false;
    report.message = r.message;
    report.locus = print_capped(r.at, 80);
    report.path = r.path;
    report.expected = r.expected;
    report.actual = r.actual;
  }
  return report;
}

std::vector<DefReport> check_module(const Module& m) {
  std::vector<DefReport> out;
  Globals globals;
  for (const auto& d : m.defs) {
    DefReport r{d.name, d.type, {}};
    if (!d.type) {
      r.report.accepted = false;
      r.report.message = "no type ascription";
      out.push_back(r);
      continue;
    }
    TypeContext ctx;
    // Self-reference is the rec rule: the name is bound at the declared type.
    ctx.add(d.name, *d.type);
    try {
      r.report = check(ctx, d.body, *d.type, globals);
    } catch (const NonRegularType& e) {
      r.report.accepted = false;
      r.report.message = e.what();
    }
    globals[d.name] = Scheme{*d.type};
    out.push_back(r);
  }
  return out;
}

}  // namespace amb::typesys
