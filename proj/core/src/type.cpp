#include <algorithm>
#include <functional>
#include <utility>

#include "amb/ast.hpp"
#include "hashing.hpp"

namespace amb {

TypeNode::TypeNode(TKind kind, std::string name, std::uint32_t index, std::vector<Type> children)
    : kind_(kind), name_(std::move(name)), index_(index), children_(std::move(children)) {
  std::size_t h = detail::mix(static_cast<std::size_t>(kind_) + 101);
  switch (kind_) {
    case TKind::Var:
      h = detail::combine(h, std::hash<std::string>{}(name_));
      break;
    case TKind::BVar:
      loose_ = index_ + 1;
      h = detail::combine(h, index_);
      break;
    case TKind::Meta:
      has_meta_ = true;
      h = detail::combine(h, index_);
      break;
    default:
      break;
  }
  for (const auto& c : children_) {
    h = detail::combine(h, c->hash());
    loose_ = std::max(loose_, c->loose());
    has_meta_ = has_meta_ || c->has_meta();
  }
  if (kind_ == TKind::Fix && loose_ > 0) --loose_;
  hash_ = h;
}

bool operator==(const TypeNode& a, const TypeNode& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TKind::Var:
      if (a.name() != b.name()) return false;
      break;
    case TKind::BVar:
    case TKind::Meta:
      if (a.index() != b.index()) return false;
      break;
    default:
      break;
  }
  if (a.children().size() != b.children().size()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    if (!(*a.children()[i] == *b.children()[i])) return false;
  }
  return true;
}

bool alpha_equal(const Type& a, const Type& b) { return *a == *b; }

namespace {

Type make(TKind kind, std::string name, std::uint32_t index, std::vector<Type> children) {
  return std::make_shared<const TypeNode>(kind, std::move(name), index, std::move(children));
}

template <typename F>
Type map_children(const Type& t, F&& f) {
  bool changed = false;
  std::vector<Type> kids;
  kids.reserve(t->children().size());
  std::uint32_t extra = t->kind() == TKind::Fix ? 1 : 0;
  for (const auto& c : t->children()) {
    kids.push_back(f(c, extra));
    changed = changed || kids.back() != c;
  }
  if (!changed) return t;
  return make(t->kind(), t->name(), t->index(), std::move(kids));
}

Type shift(const Type& t, std::uint32_t by, std::uint32_t depth) {
  if (by == 0 || t->loose() <= depth) return t;
  if (t->kind() == TKind::BVar) return tbvar(t->index() + by);
  return map_children(t, [&](const Type& c, std::uint32_t extra) { return shift(c, by, depth + extra); });
}

bool has_name(const Type& t, const std::string& name) {
  if (t->kind() == TKind::Var) return t->name() == name;
  return std::any_of(t->children().begin(), t->children().end(),
                     [&](const Type& c) { return has_name(c, name); });
}

Type close_name(const Type& t, const std::string& name, std::uint32_t depth) {
  if (t->kind() == TKind::Var) return t->name() == name ? tbvar(depth) : t;
  if (t->kind() == TKind::BVar) return t->index() >= depth ? tbvar(t->index() + 1) : t;
  return map_children(t, [&](const Type& c, std::uint32_t extra) { return close_name(c, name, depth + extra); });
}

Type open_at(const Type& t, const Type& value, std::uint32_t depth) {
  if (t->loose() <= depth) return t;
  if (t->kind() == TKind::BVar) {
    if (t->index() == depth) return shift(value, depth, 0);
    return t->index() > depth ? tbvar(t->index() - 1) : t;
  }
  return map_children(t, [&](const Type& c, std::uint32_t extra) { return open_at(c, value, depth + extra); });
}

Type replace_name(const Type& t, const std::string& name, const Type& value, std::uint32_t depth) {
  if (t->kind() == TKind::Var) return t->name() == name ? shift(value, depth, 0) : t;
  return map_children(t, [&](const Type& c, std::uint32_t extra) { return replace_name(c, name, value, depth + extra); });
}

void collect(const Type& t, std::set<std::string>& out) {
  if (t->kind() == TKind::Var) out.insert(t->name());
  for (const auto& c : t->children()) collect(c, out);
}

// Occurrences of bound index `target` (relative to the current depth).
bool mentions(const Type& t, std::uint32_t target) {
  if (t->loose() <= target) return false;
  if (t->kind() == TKind::BVar) return t->index() == target;
  std::uint32_t extra = t->kind() == TKind::Fix ? 1 : 0;
  return std::any_of(t->children().begin(), t->children().end(),
                     [&](const Type& c) { return mentions(c, target + extra); });
}

// No occurrence of `target` to the left of an arrow.
bool positive_in(const Type& t, std::uint32_t target) {
  if (t->loose() <= target) return true;
  switch (t->kind()) {
    case TKind::Arrow:
      return !mentions(t->left(), target) && positive_in(t->right(), target);
    case TKind::Fix:
      return positive_in(t->body(), target + 1);
    default:
      return std::all_of(t->children().begin(), t->children().end(),
                         [&](const Type& c) { return positive_in(c, target); });
  }
}

}  // namespace

Type tvar(std::string name) { return make(TKind::Var, std::move(name), 0, {}); }
Type tbvar(std::uint32_t index) { return make(TKind::BVar, "", index, {}); }
Type tmeta(std::uint32_t id) { return make(TKind::Meta, "", id, {}); }

Type unit_t() {
  static const Type u = make(TKind::Unit, "", 0, {});
  return u;
}
Type sum_t(Type l, Type r) { return make(TKind::Sum, "", 0, {std::move(l), std::move(r)}); }
Type prod_t(Type l, Type r) { return make(TKind::Prod, "", 0, {std::move(l), std::move(r)}); }
Type arrow_t(Type d, Type c) { return make(TKind::Arrow, "", 0, {std::move(d), std::move(c)}); }
Type fix_t(const std::string& binder, const Type& body) { return fix_raw(binder, close_name(body, binder, 0)); }
Type fix_raw(std::string hint, Type scoped_body) { return make(TKind::Fix, std::move(hint), 0, {std::move(scoped_body)}); }
Type amb_t(Type body) { return make(TKind::AmbT, "", 0, {std::move(body)}); }

Type nat_t() {
  static const Type n = fix_t("a", sum_t(unit_t(), tvar("a")));
  return n;
}
Type two_t() {
  static const Type t = sum_t(unit_t(), unit_t());
  return t;
}
Type three_t() {
  static const Type t = sum_t(two_t(), unit_t());
  return t;
}
Type stream_t(const Type& elem) {
  // The binder must not capture a free variable of `elem`.
  std::string a = "a";
  while (has_name(elem, a)) a += "'";
  return fix_t(a, prod_t(elem, tvar(a)));
}

Type unfold(const Type& fix) {
  if (fix->kind() != TKind::Fix) return fix;
  return open_at(fix->body(), fix, 0);
}

Type instantiate(const Type& scoped_body, const Type& value) { return open_at(scoped_body, value, 0); }

Type subst(const Type& t, const std::string& var, const Type& value) { return replace_name(t, var, value, 0); }

std::set<std::string> free_vars(const Type& t) {
  std::set<std::string> out;
  collect(t, out);
  return out;
}

bool is_determined(const Type& t, const std::set<std::string>& determined_vars) {
  const TypeNode* cur = t.get();
  while (cur->kind() == TKind::Fix) cur = cur->body().get();
  switch (cur->kind()) {
    case TKind::Unit:
    case TKind::Sum:
    case TKind::Prod:
    case TKind::Arrow:
      return true;
    case TKind::Var:
      return determined_vars.count(cur->name()) > 0;
    default:
      return false;
  }
}

bool is_regular(const Type& t, const std::set<std::string>& determined_vars) {
  switch (t->kind()) {
    case TKind::AmbT:
      if (!is_determined(t->body(), determined_vars)) return false;
      break;
    case TKind::Fix: {
      const Type& b = t->body();
      if (!mentions(b, 0)) return false;
      if (b->kind() == TKind::BVar) return false;
      if (!positive_in(b, 0)) return false;
      break;
    }
    default:
      break;
  }
  return std::all_of(t->children().begin(), t->children().end(),
                     [&](const Type& c) { return is_regular(c, determined_vars); });
}

}  // namespace amb
