#include "domain_oracle.hpp"

#include "amb/ast.hpp"

namespace amb::testing {

namespace {

void labels(const FiniteData& a, const std::string& at, Labels& out) {
  if (a->kind() == DKind::Bot) return;
  out[at] = a->kind() == DKind::Fun ? "fun " + print(a->fun()) : std::to_string(static_cast<int>(a->kind()));
  for (std::size_t i = 0; i < a->children().size(); ++i) labels(a->child(i), at + char('0' + i), out);
}

}  // namespace

Labels labels(const FiniteData& a) {
  Labels out;
  labels(a, "", out);
  return out;
}

bool oracle_leq(const FiniteData& a, const FiniteData& b) {
  Labels la = labels(a), lb = labels(b);
  for (const auto& [at, l] : la) {
    auto it = lb.find(at);
    if (it == lb.end() || it->second != l) return false;
  }
  return true;
}

bool consistent(const FiniteData& a, const FiniteData& b) {
  Labels la = labels(a), lb = labels(b);
  for (const auto& [at, l] : la) {
    auto it = lb.find(at);
    if (it != lb.end() && it->second != l) return false;
  }
  return true;
}

bool is_bot(const FiniteData& a) { return a->kind() == DKind::Bot; }
bool is_amb_bot_bot(const FiniteData& a) {
  return a->kind() == DKind::AmbD && is_bot(a->child(0)) && is_bot(a->child(1));
}

bool in_data(const FiniteData& d, const FiniteData& a) {
  switch (a->kind()) {
    case DKind::Bot:
      return is_bot(d);
    case DKind::AmbD: {
      const auto& l = a->child(0);
      const auto& r = a->child(1);
      if (is_bot(l) && is_bot(r)) return is_bot(d);
      return (!is_bot(l) && in_data(d, l)) || (!is_bot(r) && in_data(d, r));
    }
    case DKind::Fun:
      return d->kind() == DKind::Fun && alpha_equal(d->fun(), a->fun());
    default:
      if (d->kind() != a->kind()) return false;
      for (std::size_t i = 0; i < a->children().size(); ++i) {
        if (!in_data(d->child(i), a->child(i))) return false;
      }
      return true;
  }
}

std::vector<FiniteData> oracle_data(const FiniteData& a) {
  switch (a->kind()) {
    case DKind::Bot:
    case DKind::Nil:
    case DKind::Fun:
      return {a};
    case DKind::AmbD: {
      if (is_amb_bot_bot(a)) return {d_bot()};
      std::vector<FiniteData> out;
      for (const auto& side : a->children()) {
        if (is_bot(side)) continue;
        for (const auto& d : oracle_data(side)) out.push_back(d);
      }
      return out;
    }
    default: {
      std::vector<std::vector<FiniteData>> combos{{}};
      for (const auto& c : a->children()) {
        std::vector<std::vector<FiniteData>> next;
        for (const auto& prefix : combos) {
          for (const auto& d : oracle_data(c)) {
            next.push_back(prefix);
            next.back().push_back(d);
          }
        }
        combos = std::move(next);
      }
      std::vector<FiniteData> out;
      for (auto& kids : combos) out.push_back(d_node(a->kind(), std::move(kids)));
      return out;
    }
  }
}

}  // namespace amb::testing
