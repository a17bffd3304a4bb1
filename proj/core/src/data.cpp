#include "amb/data.hpp"

#include "amb/error.hpp"
#include "hashing.hpp"

namespace amb {

DataNode::DataNode(DKind kind, std::vector<FiniteData> children, Program fun)
    : kind_(kind), children_(std::move(children)), fun_(std::move(fun)) {
  hash_ = detail::mix(static_cast<std::size_t>(kind_) + 0x51);
  has_bot_ = kind_ == DKind::Bot;
  has_amb_ = kind_ == DKind::AmbD;
  for (const auto& c : children_) {
    hash_ = detail::combine(hash_, c->hash());
    has_bot_ = has_bot_ || c->has_bot();
    has_amb_ = has_amb_ || c->has_amb();
  }
  if (fun_) hash_ = detail::combine(hash_, fun_->hash());
}

namespace {

int expected_arity(DKind k) {
  switch (k) {
    case DKind::Le:
    case DKind::Ri:
      return 1;
    case DKind::Pair:
    case DKind::AmbD:
      return 2;
    default:
      return 0;
  }
}

FiniteData make(DKind k, std::vector<FiniteData> kids, Program fun = nullptr) {
  return std::make_shared<const DataNode>(k, std::move(kids), std::move(fun));
}

}  // namespace

FiniteData d_bot() {
  static const FiniteData b = make(DKind::Bot, {});
  return b;
}

FiniteData d_nil() {
  static const FiniteData n = make(DKind::Nil, {});
  return n;
}

FiniteData d_le(FiniteData a) { return make(DKind::Le, {std::move(a)}); }
FiniteData d_ri(FiniteData a) { return make(DKind::Ri, {std::move(a)}); }
FiniteData d_pair(FiniteData a, FiniteData b) { return make(DKind::Pair, {std::move(a), std::move(b)}); }
FiniteData d_amb(FiniteData a, FiniteData b) { return make(DKind::AmbD, {std::move(a), std::move(b)}); }

FiniteData d_fun(Program lambda) {
  if (!lambda || lambda->kind() != Kind::Lam) throw Error("function tag needs a lambda");
  return make(DKind::Fun, {}, std::move(lambda));
}

FiniteData d_numeral(unsigned n) {
  FiniteData r = d_le(d_nil());
  for (unsigned i = 0; i < n; ++i) r = d_ri(r);
  return r;
}

FiniteData d_node(DKind kind, std::vector<FiniteData> children) {
  if (kind == DKind::Fun) throw Error("use d_fun for function tags");
  if (static_cast<int>(children.size()) != expected_arity(kind)) throw Error("arity mismatch in data node");
  if (kind == DKind::Bot) return d_bot();
  if (kind == DKind::Nil) return d_nil();
  return make(kind, std::move(children));
}

bool data_equal(const FiniteData& a, const FiniteData& b) {
  if (a == b) return true;
  if (a->hash() != b->hash() || a->kind() != b->kind()) return false;
  if (a->kind() == DKind::Fun) return alpha_equal(a->fun(), b->fun());
  for (std::size_t i = 0; i < a->children().size(); ++i) {
    if (!data_equal(a->child(i), b->child(i))) return false;
  }
  return true;
}

int data_compare(const FiniteData& a, const FiniteData& b) {
  if (a == b) return 0;
  if (a->kind() != b->kind()) return a->kind() < b->kind() ? -1 : 1;
  if (a->kind() == DKind::Fun) {
    if (alpha_equal(a->fun(), b->fun())) return 0;
    int c = print(a->fun()).compare(print(b->fun()));
    if (c != 0) return c < 0 ? -1 : 1;
    return a->hash() < b->hash() ? -1 : (a->hash() > b->hash() ? 1 : 0);
  }
  for (std::size_t i = 0; i < a->children().size(); ++i) {
    int c = data_compare(a->child(i), b->child(i));
    if (c != 0) return c;
  }
  return 0;
}

namespace {

std::optional<unsigned> as_numeral(const FiniteData& d) {
  unsigned n = 0;
  const DataNode* cur = d.get();
  while (cur->kind() == DKind::Ri) {
    ++n;
    cur = cur->child(0).get();
  }
  if (cur->kind() == DKind::Le && cur->child(0)->kind() == DKind::Nil) return n;
  return std::nullopt;
}

void print_to(const FiniteData& d, std::string& out) {
  if (auto n = as_numeral(d)) {
    out += std::to_string(*n);
    return;
  }
  switch (d->kind()) {
    case DKind::Bot:
      out += "bot";
      return;
    case DKind::Nil:
      out += "Nil";
      return;
    case DKind::Fun:
      out += "(" + print(d->fun()) + ")";
      return;
    case DKind::Le:
    case DKind::Ri:
      out += d->kind() == DKind::Le ? "Left" : "Right";
      if (d->child(0)->kind() == DKind::Nil) return;
      out += "(";
      print_to(d->child(0), out);
      out += ")";
      return;
    case DKind::Pair:
    case DKind::AmbD:
      out += d->kind() == DKind::Pair ? "Pair(" : "Amb(";
      print_to(d->child(0), out);
      out += ", ";
      print_to(d->child(1), out);
      out += ")";
      return;
  }
}

}  // namespace

std::string print(const FiniteData& d) {
  std::string out;
  print_to(d, out);
  return out;
}

FiniteData data_of_literal(const Program& p) {
  switch (p->kind()) {
    case Kind::Bottom:
      return d_bot();
    case Kind::Lam:
      return d_fun(p);
    case Kind::Con: {
      std::vector<FiniteData> kids;
      for (const auto& c : p->children()) kids.push_back(data_of_literal(c));
      switch (p->ctor()) {
        case Ctor::Nil:
          return d_nil();
        case Ctor::Left:
          return d_le(kids[0]);
        case Ctor::Right:
          return d_ri(kids[0]);
        case Ctor::Pair:
          return d_pair(kids[0], kids[1]);
        case Ctor::Amb:
          return d_amb(kids[0], kids[1]);
      }
      break;
    }
    default:
      break;
  }
  throw Error("not a data literal: " + print_capped(p, 60));
}

FiniteData parse_data(std::string_view text) { return data_of_literal(parse_program(text)); }

}  // namespace amb
