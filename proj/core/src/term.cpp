#include <algorithm>
#include <functional>
#include <stdexcept>
#include <utility>

#include "amb/ast.hpp"
#include "hashing.hpp"

namespace amb {

int arity(Ctor c) {
  switch (c) {
    case Ctor::Nil:
      return 0;
    case Ctor::Left:
    case Ctor::Right:
      return 1;
    case Ctor::Pair:
    case Ctor::Amb:
      return 2;
  }
  return 0;
}

std::string_view ctor_name(Ctor c) {
  switch (c) {
    case Ctor::Nil:
      return "Nil";
    case Ctor::Left:
      return "Left";
    case Ctor::Right:
      return "Right";
    case Ctor::Pair:
      return "Pair";
    case Ctor::Amb:
      return "Amb";
  }
  return "?";
}

std::optional<Ctor> ctor_from_name(std::string_view name) {
  for (Ctor c : {Ctor::Nil, Ctor::Left, Ctor::Right, Ctor::Pair, Ctor::Amb}) {
    if (ctor_name(c) == name) return c;
  }
  return std::nullopt;
}

Term::Term(Kind kind, std::string name, std::uint32_t index, Ctor ctor, std::vector<Program> children,
           std::vector<Clause> clauses)
    : kind_(kind),
      name_(std::move(name)),
      index_(index),
      ctor_(ctor),
      children_(std::move(children)),
      clauses_(std::move(clauses)) {
  std::size_t h = detail::mix(static_cast<std::size_t>(kind_) + 1);
  switch (kind_) {
    case Kind::Var:
      has_free_ = true;
      h = detail::combine(h, std::hash<std::string>{}(name_));
      break;
    case Kind::BVar:
      loose_ = index_ + 1;
      h = detail::combine(h, index_);
      break;
    case Kind::Con:
      h = detail::combine(h, static_cast<std::size_t>(ctor_));
      break;
    default:
      break;
  }
  for (const auto& c : children_) {
    h = detail::combine(h, c->hash());
    has_free_ = has_free_ || c->has_free();
    size_ += c->size();
    loose_ = std::max(loose_, c->loose());
  }
  if (kind_ == Kind::Lam && loose_ > 0) --loose_;
  for (const auto& cl : clauses_) {
    h = detail::combine(h, static_cast<std::size_t>(cl.ctor) + 17);
    h = detail::combine(h, cl.body->hash());
    has_free_ = has_free_ || cl.body->has_free();
    size_ += cl.body->size();
    auto k = static_cast<std::uint32_t>(cl.binders.size());
    if (cl.body->loose() > k) loose_ = std::max(loose_, cl.body->loose() - k);
  }
  hash_ = h;
}

const Clause* Term::clause_for(Ctor c) const {
  for (const auto& cl : clauses_) {
    if (cl.ctor == c) return &cl;
  }
  return nullptr;
}

bool operator==(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Kind::Var:
      if (a.name() != b.name()) return false;
      break;
    case Kind::BVar:
      if (a.index() != b.index()) return false;
      break;
    case Kind::Con:
      if (a.ctor() != b.ctor()) return false;
      break;
    default:
      break;
  }
  if (a.children().size() != b.children().size() || a.clauses().size() != b.clauses().size()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    if (!(*a.children()[i] == *b.children()[i])) return false;
  }
  for (std::size_t i = 0; i < a.clauses().size(); ++i) {
    const auto& x = a.clauses()[i];
    const auto& y = b.clauses()[i];
    if (x.ctor != y.ctor || x.binders.size() != y.binders.size() || !(*x.body == *y.body)) return false;
  }
  return true;
}

bool alpha_equal(const Program& a, const Program& b) { return *a == *b; }

namespace {

Program make(Kind kind, std::string name, std::uint32_t index, Ctor ctor, std::vector<Program> children,
             std::vector<Clause> clauses = {}) {
  return std::make_shared<const Term>(kind, std::move(name), index, ctor, std::move(children),
                                      std::move(clauses));
}

// Rebuilds `t` with new children/clause bodies, reusing `t` when nothing changed.
template <typename F>
Program map_children(const Program& t, F&& f) {
  bool changed = false;
  std::vector<Program> kids;
  kids.reserve(t->children().size());
  for (const auto& c : t->children()) {
    std::uint32_t extra = t->kind() == Kind::Lam ? 1 : 0;
    kids.push_back(f(c, extra));
    changed = changed || kids.back() != c;
  }
  std::vector<Clause> cls;
  cls.reserve(t->clauses().size());
  for (const auto& cl : t->clauses()) {
    Clause n = cl;
    n.body = f(cl.body, static_cast<std::uint32_t>(cl.binders.size()));
    changed = changed || n.body != cl.body;
    cls.push_back(std::move(n));
  }
  if (!changed) return t;
  return make(t->kind(), t->name(), t->index(), t->ctor(), std::move(kids), std::move(cls));
}

Program shift(const Program& t, std::uint32_t by, std::uint32_t depth) {
  if (by == 0 || t->loose() <= depth) return t;
  if (t->kind() == Kind::BVar) return bvar(t->index() + by);
  return map_children(t, [&](const Program& c, std::uint32_t extra) { return shift(c, by, depth + extra); });
}

Program close_names(const Program& t, const std::vector<std::string>& names, std::uint32_t depth) {
  if (!t->has_free() && t->loose() <= depth) return t;
  auto k = static_cast<std::uint32_t>(names.size());
  if (t->kind() == Kind::Var) {
    for (std::uint32_t j = 0; j < k; ++j) {
      if (names[j] == t->name() && names[j] != "_") {
        // Later binders shadow earlier ones with the same name.
        bool shadowed = false;
        for (std::uint32_t l = j + 1; l < k; ++l) shadowed = shadowed || names[l] == names[j];
        if (!shadowed) return bvar(depth + k - 1 - j);
      }
    }
    return t;
  }
  if (t->kind() == Kind::BVar) return t->index() >= depth ? bvar(t->index() + k) : t;
  return map_children(t, [&](const Program& c, std::uint32_t extra) { return close_names(c, names, depth + extra); });
}

Program open_at(const Program& t, const std::vector<Program>& values, std::uint32_t depth) {
  if (t->loose() <= depth) return t;
  auto k = static_cast<std::uint32_t>(values.size());
  if (t->kind() == Kind::BVar) {
    std::uint32_t i = t->index();
    if (i < depth) return t;
    if (i < depth + k) return shift(values[k - 1 - (i - depth)], depth, 0);
    return bvar(i - k);
  }
  return map_children(t, [&](const Program& c, std::uint32_t extra) { return open_at(c, values, depth + extra); });
}

Program replace_free(const Program& t, const std::string& name, const Program& arg, std::uint32_t depth) {
  if (!t->has_free()) return t;
  if (t->kind() == Kind::Var) return t->name() == name ? shift(arg, depth, 0) : t;
  return map_children(t, [&](const Program& c, std::uint32_t extra) { return replace_free(c, name, arg, depth + extra); });
}

void collect_free(const Program& t, std::set<std::string>& out) {
  if (!t->has_free()) return;
  if (t->kind() == Kind::Var) {
    out.insert(t->name());
    return;
  }
  for (const auto& c : t->children()) collect_free(c, out);
  for (const auto& cl : t->clauses()) collect_free(cl.body, out);
}

}  // namespace

Program var(std::string name) { return make(Kind::Var, std::move(name), 0, Ctor::Nil, {}); }
Program bvar(std::uint32_t index) { return make(Kind::BVar, "", index, Ctor::Nil, {}); }

Program lam(const std::string& binder, const Program& body) {
  return lam_raw(binder, close_names(body, {binder}, 0));
}

Program lam_raw(std::string hint, Program scoped_body) {
  return make(Kind::Lam, std::move(hint), 0, Ctor::Nil, {std::move(scoped_body)});
}

Program app(Program f, Program a) { return make(Kind::App, "", 0, Ctor::Nil, {std::move(f), std::move(a)}); }
Program strict_app(Program f, Program a) {
  return make(Kind::StrictApp, "", 0, Ctor::Nil, {std::move(f), std::move(a)});
}
Program rec(Program body) { return make(Kind::Rec, "", 0, Ctor::Nil, {std::move(body)}); }

Program bottom() {
  static const Program b = make(Kind::Bottom, "", 0, Ctor::Nil, {});
  return b;
}

Program con(Ctor c, std::vector<Program> children) {
  if (static_cast<int>(children.size()) != arity(c)) {
    throw std::invalid_argument("constructor " + std::string(ctor_name(c)) + " expects " +
                                std::to_string(arity(c)) + " arguments");
  }
  return make(Kind::Con, "", 0, c, std::move(children));
}

Program nil() {
  static const Program n = make(Kind::Con, "", 0, Ctor::Nil, {});
  return n;
}
Program left(Program p) { return con(Ctor::Left, {std::move(p)}); }
Program right(Program p) { return con(Ctor::Right, {std::move(p)}); }
Program pair(Program a, Program b) { return con(Ctor::Pair, {std::move(a), std::move(b)}); }
Program amb(Program a, Program b) { return con(Ctor::Amb, {std::move(a), std::move(b)}); }

namespace {
void validate_clauses(const std::vector<Clause>& clauses) {
  std::set<Ctor> seen;
  for (const auto& cl : clauses) {
    if (static_cast<int>(cl.binders.size()) != arity(cl.ctor)) {
      throw std::invalid_argument("clause for " + std::string(ctor_name(cl.ctor)) + " must bind " +
                                  std::to_string(arity(cl.ctor)) + " variables");
    }
    if (!seen.insert(cl.ctor).second) {
      throw std::invalid_argument("duplicate clause for " + std::string(ctor_name(cl.ctor)));
    }
  }
}
}  // namespace

Program case_of(Program scrutinee, std::vector<Clause> clauses) {
  validate_clauses(clauses);
  for (auto& cl : clauses) cl.body = close_names(cl.body, cl.binders, 0);
  return case_raw(std::move(scrutinee), std::move(clauses));
}

Program case_raw(Program scrutinee, std::vector<Clause> scoped_clauses) {
  validate_clauses(scoped_clauses);
  return make(Kind::Case, "", 0, Ctor::Nil, {std::move(scrutinee)}, std::move(scoped_clauses));
}

Program numeral(unsigned n) {
  Program p = left(nil());
  for (unsigned i = 0; i < n; ++i) p = right(p);
  return p;
}

Program instantiate(const Program& scoped_body, const std::vector<Program>& values) {
  return open_at(scoped_body, values, 0);
}

Program instantiate1(const Program& scoped_body, const Program& value) {
  return open_at(scoped_body, {value}, 0);
}

Program subst(const Program& body, const std::string& var, const Program& arg) {
  return replace_free(body, var, arg, 0);
}

std::set<std::string> free_vars(const Program& p) {
  std::set<std::string> out;
  collect_free(p, out);
  return out;
}

bool occurs_free(const Program& p, const std::string& name) { return free_vars(p).count(name) > 0; }

}  // namespace amb
