#include <algorithm>
#include <map>

#include "amb/logic.hpp"
#include "logic_internal.hpp"

namespace amb::logic {

namespace detail {

using Names = std::set<std::string>;

bool harrop(const Predicate& p, const Names& consts) {
  switch (p->kind) {
    case PKind::Var:
      return consts.count(p->name) > 0;
    case PKind::Const:
      return true;
    case PKind::Named:
      return harrop(p->inner, consts);
    case PKind::Compr:
      return harrop(p->body, consts);
    case PKind::Mu:
    case PKind::Nu: {
      Names inner = consts;
      inner.insert(p->name);
      return harrop(p->inner, inner);
    }
  }
  return false;
}

bool harrop(const Formula& a, const Names& consts) {
  switch (a->kind) {
    case FKind::PredApp:
      return harrop(a->pred, consts);
    case FKind::Atom:
      return true;
    case FKind::And:
      return harrop(a->kids[0], consts) && harrop(a->kids[1], consts);
    case FKind::Implies:
      return harrop(a->kids[1], consts);
    case FKind::Forall:
    case FKind::Exists:
      return harrop(a->kids[0], consts);
    case FKind::Or:
    case FKind::Restrict:
    case FKind::Conc:
      return false;
  }
  return false;
}

}  // namespace detail

namespace {

using detail::harrop;
using Names = std::set<std::string>;

bool strict_pred(const Predicate& p) {
  switch (p->kind) {
    case PKind::Var:
      return false;
    case PKind::Const:
      return true;
    case PKind::Named:
    case PKind::Mu:
    case PKind::Nu:
      return strict_pred(p->inner);
    case PKind::Compr:
      return is_strict(p->body);
  }
  return false;
}

}  // namespace

bool is_harrop(const Formula& a) { return harrop(a, {}); }
bool is_harrop(const Predicate& p) { return harrop(p, {}); }

bool is_strict(const Formula& a) {
  if (is_harrop(a)) return true;
  switch (a->kind) {
    case FKind::Or:
      return true;
    case FKind::And: {
      bool h0 = is_harrop(a->kids[0]);
      bool h1 = is_harrop(a->kids[1]);
      if (!h0 && !h1) return true;
      return h0 ? is_strict(a->kids[1]) : is_strict(a->kids[0]);
    }
    case FKind::Implies:
      return !is_harrop(a->kids[0]);
    case FKind::Forall:
    case FKind::Exists:
      return is_strict(a->kids[0]);
    case FKind::PredApp:
      return strict_pred(a->pred);
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Admissibility

namespace {

struct Admissible {
  bool ok = true;

  struct Info {
    Names fv;
    bool conc = false;     // contains concurrency or restriction
    bool pending = false;  // has a functional implication not yet inside a clean quasi-closed subexpression
  };

  static void merge(Info& into, const Info& from) {
    into.fv.insert(from.fv.begin(), from.fv.end());
    into.conc |= from.conc;
    into.pending |= from.pending;
  }

  static Info close(Info i) {
    if (i.fv.empty() && !i.conc) i.pending = false;
    return i;
  }

  Info formula(const Formula& a, bool sp) {
    Info i;
    switch (a->kind) {
      case FKind::PredApp:
        return pred(a->pred, sp);
      case FKind::Atom:
        return i;
      case FKind::Implies: {
        merge(i, formula(a->kids[0], false));
        merge(i, formula(a->kids[1], sp));
        if (!is_harrop(a->kids[0]) && !is_harrop(a->kids[1])) i.pending = true;
        return close(i);
      }
      case FKind::Restrict:
        if (!sp || !is_harrop(a->kids[0])) ok = false;
        merge(i, formula(a->kids[0], false));
        merge(i, formula(a->kids[1], sp));
        i.conc = true;
        return close(i);
      case FKind::Conc:
        if (!sp) ok = false;
        merge(i, formula(a->kids[0], sp));
        i.conc = true;
        return close(i);
      default:
        for (const auto& k : a->kids) merge(i, formula(k, sp));
        return close(i);
    }
  }

  Info pred(const Predicate& p, bool sp) {
    Info i;
    switch (p->kind) {
      case PKind::Var:
        i.fv.insert(p->name);
        return i;
      case PKind::Const:
        return i;
      case PKind::Named:
        return pred(p->inner, sp);
      case PKind::Compr:
        return close(formula(p->body, sp));
      case PKind::Mu:
      case PKind::Nu:
        i = pred(p->inner, sp);
        i.fv.erase(p->name);
        return close(i);
    }
    return i;
  }
};

}  // namespace

bool is_admissible(const Formula& a) {
  Admissible adm;
  auto info = adm.formula(a, true);
  return adm.ok && info.fv.empty() && !info.pending;
}

bool is_admissible(const Predicate& p) {
  Admissible adm;
  auto info = adm.pred(p, true);
  return adm.ok && info.fv.empty() && !info.pending;
}

// ---------------------------------------------------------------------------
// Types of expressions

std::string type_var_for(const std::string& pred_var) { return "a" + pred_var; }

namespace {

Type tau_f(const Formula& a);

Type tau_p(const Predicate& p) {
  switch (p->kind) {
    case PKind::Var:
      return tvar(type_var_for(p->name));
    case PKind::Const:
      return unit_t();
    case PKind::Named:
      return tau_p(p->inner);
    case PKind::Compr:
      return tau_f(p->body);
    case PKind::Mu:
    case PKind::Nu:
      if (is_harrop(p)) return unit_t();
      return fix_t(type_var_for(p->name), tau_p(p->inner));
  }
  return unit_t();
}

Type tau_f(const Formula& a) {
  switch (a->kind) {
    case FKind::PredApp:
      return tau_p(a->pred);
    case FKind::Atom:
      return unit_t();
    case FKind::Or:
      return sum_t(tau_f(a->kids[0]), tau_f(a->kids[1]));
    case FKind::And: {
      bool h0 = is_harrop(a->kids[0]);
      bool h1 = is_harrop(a->kids[1]);
      if (h0 && h1) return unit_t();
      if (h1) return tau_f(a->kids[0]);
      if (h0) return tau_f(a->kids[1]);
      return prod_t(tau_f(a->kids[0]), tau_f(a->kids[1]));
    }
    case FKind::Implies:
      if (!is_harrop(a->kids[0]) && !is_harrop(a->kids[1])) return arrow_t(tau_f(a->kids[0]), tau_f(a->kids[1]));
      return tau_f(a->kids[1]);
    case FKind::Forall:
    case FKind::Exists:
      return tau_f(a->kids[0]);
    case FKind::Restrict:
      return tau_f(a->kids[1]);
    case FKind::Conc:
      return amb_t(tau_f(a->kids[0]));
  }
  return unit_t();
}

bool concurrent(const Formula& a);

bool concurrent(const Predicate& p) {
  switch (p->kind) {
    case PKind::Var:
    case PKind::Const:
      return false;
    case PKind::Named:
    case PKind::Mu:
    case PKind::Nu:
      return concurrent(p->inner);
    case PKind::Compr:
      return concurrent(p->body);
  }
  return false;
}

bool concurrent(const Formula& a) {
  if (a->kind == FKind::Restrict || a->kind == FKind::Conc) return true;
  if (a->kind == FKind::PredApp) return concurrent(a->pred);
  return std::any_of(a->kids.begin(), a->kids.end(), [](const Formula& k) { return concurrent(k); });
}

Formula erase_f(const Formula& a);

Predicate erase_p(const Predicate& p) {
  if (!concurrent(p)) return p;
  switch (p->kind) {
    case PKind::Named:
      return erase_p(p->inner);
    case PKind::Compr:
      return p_compr(p->vars, erase_f(p->body));
    case PKind::Mu:
      return p_mu(p->name, erase_p(p->inner));
    case PKind::Nu:
      return p_nu(p->name, erase_p(p->inner));
    default:
      return p;
  }
}

Formula erase_f(const Formula& a) {
  if (!concurrent(a)) return a;
  switch (a->kind) {
    case FKind::PredApp:
      return f_app(erase_p(a->pred), a->terms);
    case FKind::And:
      return f_and(erase_f(a->kids[0]), erase_f(a->kids[1]));
    case FKind::Or:
      return f_or(erase_f(a->kids[0]), erase_f(a->kids[1]));
    case FKind::Implies:
      return f_implies(erase_f(a->kids[0]), erase_f(a->kids[1]));
    case FKind::Forall:
      return f_forall(a->var, erase_f(a->kids[0]));
    case FKind::Exists:
      return f_exists(a->var, erase_f(a->kids[0]));
    case FKind::Restrict: {
      Formula premise = erase_f(a->kids[0]);
      if (!is_harrop(a->kids[0])) premise = f_not(f_not(premise));
      return f_implies(premise, erase_f(a->kids[1]));
    }
    case FKind::Conc:
      return erase_f(a->kids[0]);
    case FKind::Atom:
      return a;
  }
  return a;
}

}  // namespace

Type tau(const Formula& a) { return tau_f(a); }
Type tau(const Predicate& p) { return tau_p(p); }

Formula erase_minus(const Formula& a) { return erase_f(a); }
Predicate erase_minus(const Predicate& p) { return erase_p(p); }

}  // namespace amb::logic
