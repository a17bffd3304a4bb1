#include <algorithm>
#include <sstream>

#include "amb/error.hpp"
#include "amb/logic.hpp"

namespace amb::logic {

FOTerm t_var(std::string name) { return std::make_shared<FOTermNode>(FOTermNode{TermKind::Var, std::move(name), 0, {}}); }
FOTerm t_num(std::int64_t n) { return std::make_shared<FOTermNode>(FOTermNode{TermKind::Num, {}, n, {}}); }
FOTerm t_op(TermKind k, std::vector<FOTerm> args) {
  return std::make_shared<FOTermNode>(FOTermNode{k, {}, 0, std::move(args)});
}
FOTerm t_fun(std::string name, std::vector<FOTerm> args) {
  return std::make_shared<FOTermNode>(FOTermNode{TermKind::Fun, std::move(name), 0, std::move(args)});
}

namespace {

Formula mk(FKind k, std::vector<Formula> kids) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->kids = std::move(kids);
  return n;
}

Formula quant(FKind k, std::string x, Formula body) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->var = std::move(x);
  n->kids = {std::move(body)};
  return n;
}

}  // namespace

Formula f_app(Predicate p, std::vector<FOTerm> args) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::PredApp;
  n->pred = std::move(p);
  n->terms = std::move(args);
  return n;
}

Formula f_atom(Rel r, FOTerm a, FOTerm b) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::Atom;
  n->rel = r;
  n->terms = {std::move(a), std::move(b)};
  return n;
}

Formula f_and(Formula a, Formula b) { return mk(FKind::And, {std::move(a), std::move(b)}); }
Formula f_or(Formula a, Formula b) { return mk(FKind::Or, {std::move(a), std::move(b)}); }
Formula f_implies(Formula a, Formula b) { return mk(FKind::Implies, {std::move(a), std::move(b)}); }
Formula f_forall(std::string x, Formula body) { return quant(FKind::Forall, std::move(x), std::move(body)); }
Formula f_exists(std::string x, Formula body) { return quant(FKind::Exists, std::move(x), std::move(body)); }
Formula f_restrict(Formula premise, Formula body) { return mk(FKind::Restrict, {std::move(premise), std::move(body)}); }
Formula f_conc(Formula body) { return mk(FKind::Conc, {std::move(body)}); }

Formula f_false() {
  static const Predicate p = p_named("False", p_mu("X", p_var("X", 0)));
  return f_app(p, {});
}

Formula f_not(Formula a) { return f_implies(std::move(a), f_false()); }

Predicate p_var(std::string name, std::size_t arity) {
  auto n = std::make_shared<PredicateNode>();
  n->kind = PKind::Var;
  n->name = std::move(name);
  n->arity = arity;
  return n;
}

Predicate p_const(std::string name, std::size_t arity) {
  auto n = std::make_shared<PredicateNode>();
  n->kind = PKind::Const;
  n->name = std::move(name);
  n->arity = arity;
  return n;
}

Predicate p_named(std::string name, Predicate def) {
  auto n = std::make_shared<PredicateNode>();
  n->kind = PKind::Named;
  n->name = std::move(name);
  n->inner = std::move(def);
  return n;
}

Predicate p_compr(std::vector<std::string> vars, Formula body) {
  auto n = std::make_shared<PredicateNode>();
  n->kind = PKind::Compr;
  n->vars = std::move(vars);
  n->body = std::move(body);
  return n;
}

Predicate p_mu(std::string x, Predicate body) {
  auto n = std::make_shared<PredicateNode>();
  n->kind = PKind::Mu;
  n->name = std::move(x);
  n->inner = std::move(body);
  return n;
}

Predicate p_nu(std::string x, Predicate body) {
  auto n = std::make_shared<PredicateNode>();
  n->kind = PKind::Nu;
  n->name = std::move(x);
  n->inner = std::move(body);
  return n;
}

std::size_t arity(const Predicate& p) {
  switch (p->kind) {
    case PKind::Var:
    case PKind::Const:
      return p->arity;
    case PKind::Compr:
      return p->vars.size();
    case PKind::Named:
    case PKind::Mu:
    case PKind::Nu:
      return arity(p->inner);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

using Binders = std::vector<std::pair<std::string, std::string>>;

// Index from the innermost binder, or -1 when free.
long lookup(const Binders& env, const std::string& name, bool left) {
  for (std::size_t i = env.size(); i-- > 0;) {
    if ((left ? env[i].first : env[i].second) == name) return static_cast<long>(env.size() - i);
  }
  return -1;
}

bool same_var(const Binders& env, const std::string& a, const std::string& b) {
  long ia = lookup(env, a, true);
  long ib = lookup(env, b, false);
  if (ia < 0 && ib < 0) return a == b;
  return ia == ib;
}

struct Eq {
  Binders objs;
  Binders preds;

  bool term(const FOTerm& a, const FOTerm& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case TermKind::Var:
        return same_var(objs, a->name, b->name);
      case TermKind::Num:
        return a->num == b->num;
      case TermKind::Fun:
        if (a->name != b->name) return false;
        break;
      default:
        break;
    }
    if (a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i) {
      if (!term(a->args[i], b->args[i])) return false;
    }
    return true;
  }

  bool formula(const Formula& a, const Formula& b) {
    if (a == b && objs.empty() && preds.empty()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case FKind::PredApp:
        if (!pred(a->pred, b->pred)) return false;
        [[fallthrough]];
      case FKind::Atom:
        if (a->kind == FKind::Atom && a->rel != b->rel) return false;
        if (a->terms.size() != b->terms.size()) return false;
        for (std::size_t i = 0; i < a->terms.size(); ++i) {
          if (!term(a->terms[i], b->terms[i])) return false;
        }
        return true;
      case FKind::Forall:
      case FKind::Exists: {
        objs.emplace_back(a->var, b->var);
        bool r = formula(a->kids[0], b->kids[0]);
        objs.pop_back();
        return r;
      }
      default:
        for (std::size_t i = 0; i < a->kids.size(); ++i) {
          if (!formula(a->kids[i], b->kids[i])) return false;
        }
        return true;
    }
  }

  bool pred(const Predicate& a, const Predicate& b) {
    if (a->kind == PKind::Named && b->kind == PKind::Named && a->name == b->name && a->inner == b->inner) return true;
    if (a->kind == PKind::Named) return pred(a->inner, b);
    if (b->kind == PKind::Named) return pred(a, b->inner);
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case PKind::Var:
        return a->arity == b->arity && same_var(preds, a->name, b->name);
      case PKind::Const:
        return a->arity == b->arity && a->name == b->name;
      case PKind::Compr: {
        if (a->vars.size() != b->vars.size()) return false;
        for (std::size_t i = 0; i < a->vars.size(); ++i) objs.emplace_back(a->vars[i], b->vars[i]);
        bool r = formula(a->body, b->body);
        objs.resize(objs.size() - a->vars.size());
        return r;
      }
      case PKind::Mu:
      case PKind::Nu: {
        preds.emplace_back(a->name, b->name);
        bool r = pred(a->inner, b->inner);
        preds.pop_back();
        return r;
      }
      case PKind::Named:
        break;
    }
    return false;
  }
};

}  // namespace

bool equal(const Formula& a, const Formula& b) { return Eq{}.formula(a, b); }
bool equal(const Predicate& a, const Predicate& b) { return Eq{}.pred(a, b); }

// ---------------------------------------------------------------------------
// Free predicate variables

namespace {

void fpv(const Predicate& p, std::vector<std::string>& bound, std::set<std::string>& out);

void fpv(const Formula& a, std::vector<std::string>& bound, std::set<std::string>& out) {
  if (a->kind == FKind::PredApp) {
    fpv(a->pred, bound, out);
    return;
  }
  for (const auto& k : a->kids) fpv(k, bound, out);
}

void fpv(const Predicate& p, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (p->kind) {
    case PKind::Var:
      if (std::find(bound.begin(), bound.end(), p->name) == bound.end()) out.insert(p->name);
      return;
    case PKind::Const:
      return;
    case PKind::Named:
      fpv(p->inner, bound, out);
      return;
    case PKind::Compr:
      fpv(p->body, bound, out);
      return;
    case PKind::Mu:
    case PKind::Nu:
      bound.push_back(p->name);
      fpv(p->inner, bound, out);
      bound.pop_back();
      return;
  }
}

}  // namespace

std::set<std::string> free_pred_vars(const Formula& a) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  fpv(a, bound, out);
  return out;
}

std::set<std::string> free_pred_vars(const Predicate& p) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  fpv(p, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

// False if X occurs at a position that is not strictly positive.
bool positive_in(const std::string& x, const Predicate& p, bool sp);

bool positive_in(const std::string& x, const Formula& a, bool sp) {
  switch (a->kind) {
    case FKind::PredApp:
      return positive_in(x, a->pred, sp);
    case FKind::Atom:
      return true;
    case FKind::Implies:
    case FKind::Restrict:
      return positive_in(x, a->kids[0], false) && positive_in(x, a->kids[1], sp);
    default:
      return std::all_of(a->kids.begin(), a->kids.end(), [&](const Formula& k) { return positive_in(x, k, sp); });
  }
}

bool positive_in(const std::string& x, const Predicate& p, bool sp) {
  switch (p->kind) {
    case PKind::Var:
      return sp || p->name != x;
    case PKind::Const:
      return true;
    case PKind::Named:
      return positive_in(x, p->inner, sp);
    case PKind::Compr:
      return positive_in(x, p->body, sp);
    case PKind::Mu:
    case PKind::Nu:
      return p->name == x || positive_in(x, p->inner, sp);
  }
  return true;
}

struct WellFormed {
  std::vector<std::pair<std::string, std::size_t>> bound;

  void formula(const Formula& a) {
    switch (a->kind) {
      case FKind::PredApp:
        pred(a->pred);
        if (arity(a->pred) != a->terms.size()) {
          throw Error("predicate " + print(a->pred) + " of arity " + std::to_string(arity(a->pred)) + " applied to " +
                      std::to_string(a->terms.size()) + " arguments");
        }
        return;
      case FKind::Atom:
        return;
      case FKind::Restrict:
      case FKind::Conc:
        for (const auto& k : a->kids) formula(k);
        if (!is_strict(a->kids.back())) throw Error("body is not strict in " + print(a));
        return;
      default:
        for (const auto& k : a->kids) formula(k);
    }
  }

  void pred(const Predicate& p) {
    switch (p->kind) {
      case PKind::Var:
        for (std::size_t i = bound.size(); i-- > 0;) {
          if (bound[i].first == p->name) {
            if (bound[i].second != p->arity) {
              throw Error("predicate variable " + p->name + " used with arity " + std::to_string(p->arity) +
                          ", bound with arity " + std::to_string(bound[i].second));
            }
            break;
          }
        }
        return;
      case PKind::Const:
        return;
      case PKind::Named: {
        auto saved = std::move(bound);
        bound.clear();
        pred(p->inner);
        bound = std::move(saved);
        return;
      }
      case PKind::Compr:
        formula(p->body);
        return;
      case PKind::Mu:
      case PKind::Nu:
        if (!positive_in(p->name, p->inner, true)) {
          throw Error(p->name + " is not strictly positive in " + print(p));
        }
        bound.emplace_back(p->name, arity(p->inner));
        pred(p->inner);
        bound.pop_back();
        return;
    }
  }
};

}  // namespace

void check_well_formed(const Formula& a) { WellFormed{}.formula(a); }
void check_well_formed(const Predicate& p) { WellFormed{}.pred(p); }

// ---------------------------------------------------------------------------
// Printing in .cfp syntax

namespace {

std::string_view rel_text(Rel r) {
  switch (r) {
    case Rel::Eq:
      return "=";
    case Rel::Ne:
      return "!=";
    case Rel::Lt:
      return "<";
    case Rel::Le:
      return "<=";
    case Rel::Gt:
      return ">";
    case Rel::Ge:
      return ">=";
  }
  return "?";
}

int term_prec(const FOTerm& t) {
  switch (t->kind) {
    case TermKind::Add:
    case TermKind::Sub:
      return 1;
    case TermKind::Mul:
    case TermKind::Div:
      return 2;
    case TermKind::Neg:
      return 3;
    default:
      return 4;
  }
}

void print_term(std::ostream& os, const FOTerm& t, int prec) {
  bool paren = term_prec(t) < prec;
  if (paren) os << '(';
  switch (t->kind) {
    case TermKind::Var:
      os << t->name;
      break;
    case TermKind::Num:
      os << t->num;
      break;
    case TermKind::Add:
    case TermKind::Sub:
    case TermKind::Mul:
    case TermKind::Div: {
      int p = term_prec(t);
      print_term(os, t->args[0], p);
      const char* op = t->kind == TermKind::Add ? " + " : t->kind == TermKind::Sub ? " - " : t->kind == TermKind::Mul ? " * " : " / ";
      os << op;
      print_term(os, t->args[1], p + 1);
      break;
    }
    case TermKind::Neg:
      os << '-';
      print_term(os, t->args[0], 4);
      break;
    case TermKind::Abs:
      os << '|';
      print_term(os, t->args[0], 0);
      os << '|';
      break;
    case TermKind::Fun:
      os << t->name << '(';
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << ", ";
        print_term(os, t->args[i], 0);
      }
      os << ')';
      break;
  }
  if (paren) os << ')';
}

void print_pred(std::ostream& os, const Predicate& p);

// 0: implication level, 1: disjunction, 2: conjunction, 3: atom
void print_formula(std::ostream& os, const Formula& a, int prec) {
  auto wrap = [&](int mine, auto&& body) {
    bool paren = mine < prec;
    if (paren) os << '(';
    body();
    if (paren) os << ')';
  };
  switch (a->kind) {
    case FKind::PredApp: {
      const auto& p = a->pred;
      if (p->kind == PKind::Compr && p->vars.empty()) {
        print_formula(os, p->body, prec);
        return;
      }
      bool simple = p->kind == PKind::Var || p->kind == PKind::Const || p->kind == PKind::Named;
      if (!simple) os << '(';
      print_pred(os, p);
      if (!simple) os << ')';
      if (!a->terms.empty() || !simple) {
        os << '(';
        for (std::size_t i = 0; i < a->terms.size(); ++i) {
          if (i) os << ", ";
          print_term(os, a->terms[i], 0);
        }
        os << ')';
      }
      return;
    }
    case FKind::Atom:
      print_term(os, a->terms[0], 0);
      os << ' ' << rel_text(a->rel) << ' ';
      print_term(os, a->terms[1], 0);
      return;
    case FKind::And:
    case FKind::Or: {
      int mine = a->kind == FKind::Or ? 1 : 2;
      wrap(mine, [&] {
        print_formula(os, a->kids[0], mine);
        os << (a->kind == FKind::Or ? " \\/ " : " /\\ ");
        print_formula(os, a->kids[1], mine + 1);
      });
      return;
    }
    case FKind::Implies:
    case FKind::Restrict:
      wrap(0, [&] {
        print_formula(os, a->kids[0], 1);
        os << (a->kind == FKind::Implies ? " -> " : " |> ");
        print_formula(os, a->kids[1], 0);
      });
      return;
    case FKind::Forall:
    case FKind::Exists:
      wrap(0, [&] {
        os << (a->kind == FKind::Forall ? "forall " : "exists ") << a->var << ". ";
        print_formula(os, a->kids[0], 0);
      });
      return;
    case FKind::Conc:
      os << "conc(";
      print_formula(os, a->kids[0], 0);
      os << ')';
      return;
  }
}

void print_pred(std::ostream& os, const Predicate& p) {
  switch (p->kind) {
    case PKind::Var:
    case PKind::Const:
    case PKind::Named:
      os << p->name;
      return;
    case PKind::Compr:
      os << '\\';
      for (std::size_t i = 0; i < p->vars.size(); ++i) os << (i ? " " : "") << p->vars[i];
      if (p->vars.empty()) os << "()";
      os << ". ";
      print_formula(os, p->body, 0);
      return;
    case PKind::Mu:
    case PKind::Nu:
      os << (p->kind == PKind::Mu ? "mu " : "nu ") << p->name << ". ";
      print_pred(os, p->inner);
      return;
  }
}

}  // namespace

std::string print(const FOTerm& t) {
  std::ostringstream os;
  print_term(os, t, 0);
  return os.str();
}

std::string print(const Formula& a) {
  std::ostringstream os;
  print_formula(os, a, 0);
  return os.str();
}

std::string print(const Predicate& p) {
  std::ostringstream os;
  print_pred(os, p);
  return os.str();
}

const Decl* CfpFile::find(std::string_view name) const {
  for (const auto& [n, d] : decls) {
    if (n == name) return &d;
  }
  return nullptr;
}

}  // namespace amb::logic
