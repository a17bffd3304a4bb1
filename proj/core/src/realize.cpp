#include <map>
#include <sstream>

#include "amb/error.hpp"
#include "amb/logic.hpp"
#include "logic_internal.hpp"

namespace amb::logic {

namespace {

using Names = std::set<std::string>;

RExpr node(RKind k, std::vector<RExpr> kids = {}) {
  auto n = std::make_shared<RNode>();
  n->kind = k;
  n->kids = std::move(kids);
  return n;
}

RExpr dvar(const std::string& name) {
  auto n = std::make_shared<RNode>();
  n->kind = RKind::DVar;
  n->name = name;
  return n;
}

RExpr dcon(Ctor c, std::vector<RExpr> kids = {}) {
  auto n = std::make_shared<RNode>();
  n->kind = RKind::DCon;
  n->ctor = c;
  n->kids = std::move(kids);
  return n;
}

RExpr dnil() { return dcon(Ctor::Nil); }
RExpr r_and(RExpr a, RExpr b) { return node(RKind::And, {std::move(a), std::move(b)}); }
RExpr r_or(RExpr a, RExpr b) { return node(RKind::Or, {std::move(a), std::move(b)}); }
RExpr r_implies(RExpr a, RExpr b) { return node(RKind::Implies, {std::move(a), std::move(b)}); }
RExpr r_eq(RExpr a, RExpr b) { return node(RKind::DEq, {std::move(a), std::move(b)}); }
RExpr r_defined(RExpr a) { return node(RKind::Defined, {std::move(a)}); }

RExpr r_has_type(RExpr a, Type t) {
  auto n = std::make_shared<RNode>();
  n->kind = RKind::HasType;
  n->kids = {std::move(a)};
  n->type = std::move(t);
  return n;
}

RExpr r_quant(RKind k, std::vector<std::string> vars, RExpr body) {
  auto n = std::make_shared<RNode>();
  n->kind = k;
  n->vars = std::move(vars);
  n->kids = {std::move(body)};
  return n;
}

RExpr r_app(RExpr pred, std::vector<FOTerm> args, RExpr realizer) {
  auto n = std::make_shared<RNode>();
  n->kind = RKind::PredApp;
  n->terms = std::move(args);
  n->kids = {std::move(pred)};
  if (realizer) {
    n->realizer_arg = true;
    n->kids.push_back(std::move(realizer));
  }
  return n;
}

RExpr r_lam(std::vector<std::string> vars, std::optional<std::string> realizer, RExpr body) {
  auto n = std::make_shared<RNode>();
  n->kind = RKind::PLam;
  n->vars = std::move(vars);
  if (realizer) {
    n->realizer_arg = true;
    n->name = *realizer;
  }
  n->kids = {std::move(body)};
  return n;
}

RExpr r_named(RKind k, const std::string& name, std::vector<RExpr> kids = {}) {
  auto n = std::make_shared<RNode>();
  n->kind = k;
  n->name = name;
  n->kids = std::move(kids);
  return n;
}

// Every object-variable name in an expression, bound or free.
void object_names(const Formula& a, Names& out);

void object_names(const FOTerm& t, Names& out) {
  if (t->kind == TermKind::Var) out.insert(t->name);
  for (const auto& s : t->args) object_names(s, out);
}

void object_names(const Predicate& p, Names& out) {
  switch (p->kind) {
    case PKind::Compr:
      out.insert(p->vars.begin(), p->vars.end());
      object_names(p->body, out);
      return;
    case PKind::Named:
    case PKind::Mu:
    case PKind::Nu:
      object_names(p->inner, out);
      return;
    default:
      return;
  }
}

void object_names(const Formula& a, Names& out) {
  if (!a->var.empty()) out.insert(a->var);
  for (const auto& t : a->terms) object_names(t, out);
  if (a->pred) object_names(a->pred, out);
  for (const auto& k : a->kids) object_names(k, out);
}

class Translator {
 public:
  explicit Translator(Names scope) : scope_(std::move(scope)) {}

  // c r A
  RExpr realizes(const RExpr& c, const Formula& a) {
    if (harrop(a)) return r_and(r_eq(c, dnil()), H(a));
    switch (a->kind) {
      case FKind::PredApp:
        return r_app(R(a->pred), a->terms, c);
      case FKind::Or: {
        RExpr l = side(c, Ctor::Left, a->kids[0]);
        RExpr r = side(c, Ctor::Right, a->kids[1]);
        return r_or(l, r);
      }
      case FKind::And: {
        const Formula& x = a->kids[0];
        const Formula& y = a->kids[1];
        if (harrop(y)) return r_and(realizes(c, x), H(y));
        if (harrop(x)) return r_and(H(x), realizes(c, y));
        Bound u(*this, "a");
        Bound v(*this, "b");
        RExpr body = r_and(r_eq(c, dcon(Ctor::Pair, {dvar(u.name), dvar(v.name)})),
                           r_and(realizes(dvar(u.name), x), realizes(dvar(v.name), y)));
        return r_quant(RKind::Exists, {u.name, v.name}, body);
      }
      case FKind::Implies: {
        const Formula& x = a->kids[0];
        const Formula& y = a->kids[1];
        if (harrop(x)) return r_and(r_has_type(c, tau_of(y)), r_implies(H(x), realizes(c, y)));
        Bound u(*this, "a");
        RExpr body = r_implies(realizes(dvar(u.name), x), realizes(node(RKind::DApp, {c, dvar(u.name)}), y));
        return r_and(r_has_type(c, tau_of(a)), r_quant(RKind::Forall, {u.name}, body));
      }
      case FKind::Forall:
      case FKind::Exists: {
        Bound x(*this, a->var, true);
        return r_quant(a->kind == FKind::Forall ? RKind::Forall : RKind::Exists, {a->var}, realizes(c, a->kids[0]));
      }
      case FKind::Restrict: {
        const Formula& b = a->kids[1];
        return r_and(r_has_type(c, tau_of(b)),
                     r_and(r_implies(realizable(a->kids[0]), r_defined(c)), r_implies(r_defined(c), realizes(c, b))));
      }
      case FKind::Conc: {
        const Formula& b = a->kids[0];
        Bound u(*this, "a");
        Bound v(*this, "b");
        RExpr x = dvar(u.name);
        RExpr y = dvar(v.name);
        Type t = tau_of(b);
        RExpr body = r_and(r_eq(c, dcon(Ctor::Amb, {x, y})),
                           r_and(r_and(r_has_type(x, t), r_has_type(y, t)),
                                 r_and(r_or(r_defined(x), r_defined(y)),
                                       r_and(r_implies(r_defined(x), realizes(x, b)),
                                             r_implies(r_defined(y), realizes(y, b))))));
        return r_quant(RKind::Exists, {u.name, v.name}, body);
      }
      case FKind::Atom:
        break;
    }
    return r_and(r_eq(c, dnil()), H(a));
  }

  // R(P) for a non-Harrop predicate
  RExpr R(const Predicate& p) {
    switch (p->kind) {
      case PKind::Var:
        return r_named(RKind::PVar, realizer_var(p->name));
      case PKind::Named:
        return closed([&](Translator& t) { return t.R(p->inner); }, p);
      case PKind::Compr: {
        std::vector<std::unique_ptr<Bound>> xs;
        for (const auto& v : p->vars) xs.push_back(std::make_unique<Bound>(*this, v, true));
        Bound a(*this, "a");
        return r_lam(p->vars, a.name, realizes(dvar(a.name), p->body));
      }
      case PKind::Mu:
      case PKind::Nu: {
        Type fix = tau_of(p);
        auto saved = tenv_;
        tenv_[p->name] = fix;
        RExpr body = R(p->inner);
        tenv_ = std::move(saved);
        return r_named(p->kind == PKind::Mu ? RKind::PMu : RKind::PNu, realizer_var(p->name), {body});
      }
      case PKind::Const:
        break;
    }
    return H(p);
  }

  // H(A) for a Harrop formula
  RExpr H(const Formula& a) {
    switch (a->kind) {
      case FKind::PredApp:
        return r_app(H(a->pred), a->terms, nullptr);
      case FKind::Atom: {
        auto n = std::make_shared<RNode>();
        n->kind = RKind::Atom;
        n->rel = a->rel;
        n->terms = a->terms;
        return n;
      }
      case FKind::And:
        return r_and(H(a->kids[0]), H(a->kids[1]));
      case FKind::Implies:
        return r_implies(realizable(a->kids[0]), H(a->kids[1]));
      case FKind::Forall:
      case FKind::Exists: {
        Bound x(*this, a->var, true);
        return r_quant(a->kind == FKind::Forall ? RKind::Forall : RKind::Exists, {a->var}, H(a->kids[0]));
      }
      default:
        throw Error("not a Harrop formula: " + print(a));
    }
  }

  // H(P) for a Harrop predicate
  RExpr H(const Predicate& p) {
    switch (p->kind) {
      case PKind::Var:
        return r_named(RKind::PVar, p->name);
      case PKind::Const:
        return r_named(RKind::PConst, p->name);
      case PKind::Named:
        return closed([&](Translator& t) { return t.H(p->inner); }, p);
      case PKind::Compr: {
        std::vector<std::unique_ptr<Bound>> xs;
        for (const auto& v : p->vars) xs.push_back(std::make_unique<Bound>(*this, v, true));
        return r_lam(p->vars, std::nullopt, H(p->body));
      }
      case PKind::Mu:
      case PKind::Nu: {
        auto saved = consts_;
        consts_.insert(p->name);
        RExpr body = H(p->inner);
        consts_ = std::move(saved);
        return r_named(p->kind == PKind::Mu ? RKind::PMu : RKind::PNu, p->name, {body});
      }
    }
    return r_named(RKind::PConst, p->name);
  }

  // r A, that is ∃a (a r A); H(A) when A is Harrop
  RExpr realizable(const Formula& a) {
    if (harrop(a)) return H(a);
    Bound u(*this, "a");
    return r_quant(RKind::Exists, {u.name}, realizes(dvar(u.name), a));
  }

  RExpr top(const Formula& a) {
    const char* pref = "a";
    if (!harrop(a)) {
      bool h0 = !a->kids.empty() && harrop(a->kids[0]);
      switch (a->kind) {
        case FKind::Restrict:
          pref = "b";
          break;
        case FKind::Implies:
          pref = h0 ? "b" : "c";
          break;
        case FKind::Or:
        case FKind::Conc:
          pref = "c";
          break;
        case FKind::And:
          if (!h0 && !harrop(a->kids[1])) pref = "c";
          break;
        default:
          break;
      }
    }
    Bound u(*this, pref);
    return r_lam({}, u.name, realizes(dvar(u.name), a));
  }

  RExpr top(const Predicate& p) {
    if (!harrop(p)) return R(p);
    std::vector<std::string> vars;
    std::vector<FOTerm> args;
    std::vector<std::unique_ptr<Bound>> xs;
    for (std::size_t i = 0; i < arity(p); ++i) {
      xs.push_back(std::make_unique<Bound>(*this, "x"));
      vars.push_back(xs.back()->name);
      args.push_back(t_var(vars.back()));
    }
    Bound a(*this, "a");
    return r_lam(vars, a.name, r_and(r_eq(dvar(a.name), dnil()), r_app(H(p), args, nullptr)));
  }

 private:
  // Binds a fresh name (or `exact` when given) for the lifetime of the object.
  struct Bound {
    Translator& t;
    std::string name;
    bool added;
    Bound(Translator& tr, const std::string& pref, bool exact = false) : t(tr), name(exact ? pref : tr.fresh(pref)) {
      added = t.scope_.insert(name).second;
    }
    ~Bound() {
      if (added) t.scope_.erase(name);
    }
    Bound(const Bound&) = delete;
    Bound& operator=(const Bound&) = delete;
  };

  std::string fresh(const std::string& pref) const {
    if (!scope_.count(pref)) return pref;
    for (char c = 'a'; c <= 'z'; ++c) {
      std::string s(1, c);
      if (!scope_.count(s)) return s;
    }
    for (int i = 1;; ++i) {
      std::string s = pref + std::to_string(i);
      if (!scope_.count(s)) return s;
    }
  }

  static std::string realizer_var(const std::string& x) { return x + "~"; }

  bool harrop(const Formula& a) const { return detail::harrop(a, consts_); }
  bool harrop(const Predicate& p) const { return detail::harrop(p, consts_); }

  Type tau_of(const Formula& a) const { return substitute(tau(a)); }
  Type tau_of(const Predicate& p) const { return substitute(tau(p)); }

  Type substitute(Type t) const {
    for (const auto& [x, v] : tenv_) t = subst(t, type_var_for(x), v);
    return t;
  }

  template <class F>
  RExpr closed(F&& f, const Predicate& p) {
    Names names;
    object_names(p, names);
    Translator inner(std::move(names));
    inner.consts_ = consts_;
    inner.tenv_ = tenv_;
    return f(inner);
  }

  RExpr side(const RExpr& c, Ctor ctor, const Formula& a) {
    if (harrop(a)) return r_and(r_eq(c, dcon(ctor, {dnil()})), H(a));
    Bound u(*this, ctor == Ctor::Left ? "a" : "b");
    return r_quant(RKind::Exists, {u.name},
                   r_and(r_eq(c, dcon(ctor, {dvar(u.name)})), realizes(dvar(u.name), a)));
  }

  Names scope_;
  Names consts_;
  std::map<std::string, Type> tenv_;
};

// ---------------------------------------------------------------------------
// Printing

std::string_view rel_symbol(Rel r) {
  switch (r) {
    case Rel::Eq:
      return "=";
    case Rel::Ne:
      return "≠";
    case Rel::Lt:
      return "<";
    case Rel::Le:
      return "≤";
    case Rel::Gt:
      return ">";
    case Rel::Ge:
      return "≥";
  }
  return "?";
}

class RPrinter {
 public:
  std::ostringstream os;

  void domain(const RExpr& d) {
    switch (d->kind) {
      case RKind::DVar:
        os << d->name;
        return;
      case RKind::DApp:
        os << '(';
        domain(d->kids[0]);
        os << ' ';
        domain(d->kids[1]);
        os << ')';
        return;
      case RKind::DCon: {
        static const char* names[] = {"Nil", "Left", "Right", "Pair", "Amb"};
        os << names[static_cast<int>(d->ctor)];
        bool unit_arg = d->kids.size() == 1 && d->kids[0]->kind == RKind::DCon && d->kids[0]->ctor == Ctor::Nil;
        if (d->kids.empty() || unit_arg) return;
        os << '(';
        for (std::size_t i = 0; i < d->kids.size(); ++i) {
          if (i) os << ", ";
          domain(d->kids[i]);
        }
        os << ')';
        return;
      }
      default:
        formula(d, 0);
    }
  }

  static int level(RKind k) {
    switch (k) {
      case RKind::Implies:
        return 1;
      case RKind::Or:
        return 2;
      case RKind::And:
        return 3;
      default:
        return 4;
    }
  }

  void formula(const RExpr& f, int ctx) {
    switch (f->kind) {
      case RKind::And:
      case RKind::Or:
      case RKind::Implies: {
        // A binary child of another connective is always parenthesized.
        bool paren = ctx != 0 && ctx != level(f->kind);
        if (paren) os << '(';
        const char* op = f->kind == RKind::And ? " ∧ " : f->kind == RKind::Or ? " ∨ " : " → ";
        int mine = level(f->kind);
        formula(f->kids[0], f->kind == RKind::Implies ? -1 : mine);
        os << op;
        formula(f->kids[1], mine);
        if (paren) os << ')';
        return;
      }
      case RKind::Atom:
        os << print(f->terms[0]) << ' ' << rel_symbol(f->rel) << ' ' << print(f->terms[1]);
        return;
      case RKind::DEq:
        domain(f->kids[0]);
        os << " = ";
        domain(f->kids[1]);
        return;
      case RKind::HasType:
        domain(f->kids[0]);
        os << " : " << print(f->type);
        return;
      case RKind::Defined:
        domain(f->kids[0]);
        os << "↓";
        return;
      case RKind::Forall:
      case RKind::Exists:
        os << (f->kind == RKind::Forall ? "∀" : "∃");
        for (std::size_t i = 0; i < f->vars.size(); ++i) os << (i ? ", " : "") << f->vars[i];
        os << " (";
        formula(f->kids[0], 0);
        os << ')';
        return;
      case RKind::PredApp: {
        const RExpr& p = f->kids[0];
        bool simple = p->kind == RKind::PVar || p->kind == RKind::PConst || p->kind == RKind::PMu || p->kind == RKind::PNu;
        if (!simple) os << '(';
        pred(p);
        if (!simple) os << ')';
        bool any = !f->terms.empty() || f->realizer_arg;
        if (!any) return;
        os << '(';
        for (std::size_t i = 0; i < f->terms.size(); ++i) {
          if (i) os << ", ";
          os << print(f->terms[i]);
        }
        if (f->realizer_arg) {
          if (!f->terms.empty()) os << ", ";
          domain(f->kids[1]);
        }
        os << ')';
        return;
      }
      case RKind::PVar:
      case RKind::PConst:
      case RKind::PLam:
      case RKind::PMu:
      case RKind::PNu:
        pred(f);
        return;
      default:
        domain(f);
    }
  }

  void pred(const RExpr& p) {
    switch (p->kind) {
      case RKind::PVar:
      case RKind::PConst:
        os << p->name;
        return;
      case RKind::PLam: {
        std::vector<std::string> vs = p->vars;
        if (p->realizer_arg) vs.push_back(p->name);
        os << "λ";
        if (vs.size() == 1) {
          os << vs[0];
        } else {
          os << '(';
          for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? ", " : "") << vs[i];
          os << ')';
        }
        os << ". ";
        formula(p->kids[0], 0);
        return;
      }
      case RKind::PMu:
      case RKind::PNu:
        os << (p->kind == RKind::PMu ? "μ" : "ν") << "(λ" << p->name << ". ";
        pred(p->kids[0]);
        os << ')';
        return;
      default:
        formula(p, 0);
    }
  }
};

}  // namespace

RExpr realizability_translate(const Formula& a) {
  Names names;
  object_names(a, names);
  return Translator(std::move(names)).top(a);
}

RExpr realizability_translate(const Predicate& p) {
  Names names;
  object_names(p, names);
  return Translator(std::move(names)).top(p);
}

std::string print(const RExpr& r) {
  RPrinter p;
  p.formula(r, 0);
  return p.os.str();
}

}  // namespace amb::logic
