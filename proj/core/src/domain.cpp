#include "amb/domain.hpp"

#include <algorithm>

#include "amb/error.hpp"
#include "amb/opsem.hpp"

namespace amb::domain {

bool leq(const FiniteData& a, const FiniteData& b) {
  if (a->kind() == DKind::Bot || a == b) return true;
  if (a->kind() != b->kind()) return false;
  if (a->kind() == DKind::Fun) return alpha_equal(a->fun(), b->fun());
  for (std::size_t i = 0; i < a->children().size(); ++i) {
    if (!leq(a->child(i), b->child(i))) return false;
  }
  return true;
}

std::optional<FiniteData> lub(const FiniteData& a, const FiniteData& b) {
  if (a->kind() == DKind::Bot) return b;
  if (b->kind() == DKind::Bot) return a;
  if (a->kind() != b->kind()) return std::nullopt;
  if (a->kind() == DKind::Fun) {
    if (alpha_equal(a->fun(), b->fun())) return a;
    return std::nullopt;
  }
  std::vector<FiniteData> kids;
  for (std::size_t i = 0; i < a->children().size(); ++i) {
    auto c = lub(a->child(i), b->child(i));
    if (!c) return std::nullopt;
    kids.push_back(*c);
  }
  return d_node(a->kind(), std::move(kids));
}

std::size_t rank(const FiniteData& a) {
  if (a->kind() == DKind::Bot || a->kind() == DKind::Fun) return 0;
  std::size_t m = 0;
  for (const auto& c : a->children()) m = std::max(m, rank(c));
  return 1 + m;
}

namespace {

FiniteData denote(const Program& m, std::size_t fuel, std::size_t depth, std::size_t ambs) {
  if (depth == 0) return d_bot();
  auto w = opsem::head_normalize(m, fuel);
  if (!w) return d_bot();
  const Program& v = *w;
  if (v->kind() == Kind::Lam) return d_fun(v);
  const auto& kids = v->children();
  switch (v->ctor()) {
    case Ctor::Nil:
      return d_nil();
    case Ctor::Left:
      return d_le(denote(kids[0], fuel, depth - 1, 0));
    case Ctor::Right:
      return d_ri(denote(kids[0], fuel, depth - 1, 0));
    case Ctor::Pair:
      return d_pair(denote(kids[0], fuel, depth - 1, 0), denote(kids[1], fuel, depth - 1, 0));
    case Ctor::Amb:
      if (ambs >= depth) return d_bot();
      return d_amb(denote(kids[0], fuel, depth, ambs + 1), denote(kids[1], fuel, depth, ambs + 1));
  }
  return d_bot();
}

struct SetBuilder {
  std::size_t depth;
  std::size_t limit;

  void guard(const DataSet& s) const {
    if (s.size() > limit) throw Budget("data set exceeds " + std::to_string(limit) + " elements");
  }

  DataSet run(const FiniteData& a, std::size_t d) const {
    if (d == 0) return {d_bot()};
    switch (a->kind()) {
      case DKind::Bot:
      case DKind::Nil:
      case DKind::Fun:
        return {a};
      case DKind::AmbD: {
        const auto& l = a->child(0);
        const auto& r = a->child(1);
        if (l->kind() == DKind::Bot && r->kind() == DKind::Bot) return {d_bot()};
        DataSet out;
        if (l->kind() != DKind::Bot) out = run(l, d);
        if (r->kind() != DKind::Bot) {
          DataSet more = run(r, d);
          out.insert(more.begin(), more.end());
        }
        guard(out);
        return out;
      }
      case DKind::Le:
      case DKind::Ri: {
        DataSet out;
        for (const auto& x : run(a->child(0), d - 1)) out.insert(d_node(a->kind(), {x}));
        return out;
      }
      case DKind::Pair: {
        DataSet ls = run(a->child(0), d - 1);
        DataSet rs = run(a->child(1), d - 1);
        if (ls.size() * rs.size() > limit) throw Budget("data set exceeds " + std::to_string(limit) + " elements");
        DataSet out;
        for (const auto& x : ls) {
          for (const auto& y : rs) out.insert(d_pair(x, y));
        }
        return out;
      }
    }
    return {};
  }
};

}  // namespace

FiniteData denote_fuel(const Program& m, std::size_t fuel, std::size_t depth) {
  if (!m->closed()) throw OpenTerm("term is not closed: " + print_capped(m, 60));
  return denote(m, fuel, depth, 0);
}

DataSet data_set(const FiniteData& a, std::size_t depth, std::size_t limit) {
  return SetBuilder{depth, limit}.run(a, depth);
}

bool dominated_by_data(const FiniteData& m, const FiniteData& a) {
  if (m->kind() == DKind::Bot) return true;
  switch (a->kind()) {
    case DKind::Bot:
      return false;
    case DKind::AmbD: {
      const auto& l = a->child(0);
      const auto& r = a->child(1);
      return (l->kind() != DKind::Bot && dominated_by_data(m, l)) ||
             (r->kind() != DKind::Bot && dominated_by_data(m, r));
    }
    case DKind::Fun:
      return m->kind() == DKind::Fun && alpha_equal(m->fun(), a->fun());
    default:
      if (m->kind() != a->kind()) return false;
      for (std::size_t i = 0; i < a->children().size(); ++i) {
        if (!dominated_by_data(m->child(i), a->child(i))) return false;
      }
      return true;
  }
}

bool is_data_elem(const FiniteData& a) { return !a->has_amb(); }

bool is_reg_elem(const FiniteData& a) {
  if (a->kind() == DKind::AmbD) {
    for (const auto& c : a->children()) {
      if (c->kind() == DKind::AmbD || !is_reg_elem(c)) return false;
    }
    return true;
  }
  return std::all_of(a->children().begin(), a->children().end(), [](const FiniteData& c) { return is_reg_elem(c); });
}

namespace {

// Components of a chain below a constructor node, with ⊥ where an element is still ⊥.
std::vector<FiniteData> component(const std::vector<FiniteData>& chain, std::size_t i) {
  std::vector<FiniteData> out;
  out.reserve(chain.size());
  for (const auto& a : chain) out.push_back(a->kind() == DKind::Bot ? d_bot() : a->child(i));
  return out;
}

FiniteData cd(const std::vector<FiniteData>& chain) {
  const FiniteData& last = chain.back();
  switch (last->kind()) {
    case DKind::Bot:
    case DKind::Nil:
    case DKind::Fun:
      return last;
    case DKind::AmbD: {
      auto bs = component(chain, 0);
      auto cs = component(chain, 1);
      bool bn = bs.back()->kind() != DKind::Bot;
      bool cn = cs.back()->kind() != DKind::Bot;
      if (!bn && !cn) return d_bot();
      bool left_first = bn;
      for (std::size_t i = 0; left_first && i + 1 < chain.size(); ++i) {
        if (bs[i]->kind() == DKind::Bot && cs[i]->kind() != DKind::Bot) left_first = false;
      }
      return left_first ? cd(bs) : cd(cs);
    }
    default: {
      std::vector<FiniteData> kids;
      for (std::size_t i = 0; i < last->children().size(); ++i) kids.push_back(cd(component(chain, i)));
      return d_node(last->kind(), std::move(kids));
    }
  }
}

}  // namespace

FiniteData select_data(const std::vector<FiniteData>& chain) {
  if (chain.empty()) throw Error("select_data needs a non-empty chain");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!leq(chain[i], chain[i + 1])) throw Error("select_data needs an increasing chain");
  }
  return cd(chain);
}

}  // namespace amb::domain
