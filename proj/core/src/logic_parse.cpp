#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "amb/error.hpp"
#include "amb/logic.hpp"
#include "lexer.hpp"

namespace amb::logic {

namespace {

using detail::Tok;
using detail::TokenStream;

bool is_keyword(const std::string& s) {
  return s == "mu" || s == "nu" || s == "forall" || s == "exists" || s == "conc" || s == "pred" || s == "formula" ||
         s == "const" || s == "False";
}

class Parser {
 public:
  Parser(std::string_view text, const CfpFile* env) : ts_(text) {
    if (env) {
      for (const auto& [name, decl] : env->decls) bind_decl(name, decl);
    }
  }

  CfpFile file() {
    CfpFile out;
    while (!ts_.at_end()) {
      if (ts_.accept("const")) {
        std::string name = ts_.expect_ident();
        std::size_t n = 0;
        if (ts_.accept("/")) n = number();
        ts_.expect(";");
        consts_[name] = n;
        continue;
      }
      bool is_pred = ts_.is("pred");
      if (!ts_.accept("pred") && !ts_.accept("formula")) ts_.fail({"pred", "formula", "const"});
      const auto& tok = ts_.peek();
      std::string name = ts_.expect_ident();
      if (is_keyword(name)) throw ParseError(tok.line, tok.column, "'" + name + "' is reserved");
      if (named_.count(name) || consts_.count(name)) {
        throw ParseError(tok.line, tok.column, "'" + name + "' is already defined");
      }
      ts_.expect("=");
      Decl d;
      try {
        if (is_pred) {
          Predicate p = pred();
          check_well_formed(p);
          d = p;
        } else {
          Formula f = formula();
          check_well_formed(f);
          d = f;
        }
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(tok.line, tok.column, name + ": " + e.what());
      }
      ts_.expect(";");
      bind_decl(name, d);
      out.decls.emplace_back(name, std::move(d));
    }
    return out;
  }

  Formula single_formula() {
    Formula f = formula();
    if (!ts_.at_end()) ts_.fail({"end of input"});
    check_well_formed(f);
    return f;
  }

 private:
  void bind_decl(const std::string& name, const Decl& d) {
    if (const auto* p = std::get_if<Predicate>(&d)) {
      named_[name] = p_named(name, *p);
    } else {
      named_[name] = p_named(name, p_compr({}, std::get<Formula>(d)));
    }
  }

  std::size_t number() {
    if (ts_.peek().kind != Tok::Number) ts_.fail({"number"});
    auto t = ts_.next();
    try {
      return std::stoull(t.text);
    } catch (const std::exception&) {
      throw ParseError(t.line, t.column, "number too large");
    }
  }

  // pred := mu X. pred | nu X. pred | \x y. formula | NAME | (pred)
  Predicate pred() {
    if (ts_.is("mu") || ts_.is("nu")) {
      bool mu = ts_.next().text == "mu";
      std::string x = ts_.expect_ident();
      ts_.expect(".");
      bound_.push_back(x);
      Predicate body = pred();
      bound_.pop_back();
      return mu ? p_mu(x, body) : p_nu(x, body);
    }
    if (ts_.accept("\\")) {
      std::vector<std::string> vars;
      do {
        vars.push_back(ts_.expect_ident());
      } while (ts_.is_ident());
      ts_.expect(".");
      return p_compr(std::move(vars), formula());
    }
    if (ts_.accept("(")) {
      Predicate p = pred();
      ts_.expect(")");
      return p;
    }
    if (!ts_.is_ident()) ts_.fail({"predicate"});
    std::string name = ts_.next().text;
    // Arity of a bare variable reference is fixed by the enclosing application.
    return resolve(name, std::numeric_limits<std::size_t>::max());
  }

  Predicate resolve(const std::string& name, std::size_t nargs) {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
      if (*it == name) return p_var(name, nargs);
    }
    if (auto it = named_.find(name); it != named_.end()) return it->second;
    if (auto it = consts_.find(name); it != consts_.end()) return p_const(name, it->second);
    return p_var(name, nargs);
  }

  // formula := or (('->' | '|>') formula)?
  Formula formula() {
    Formula a = disj();
    if (ts_.accept("->")) return f_implies(a, formula());
    if (ts_.accept("|>")) return f_restrict(a, formula());
    return a;
  }

  Formula disj() {
    Formula a = conj();
    while (ts_.accept("\\/")) a = f_or(a, conj());
    return a;
  }

  Formula conj() {
    Formula a = unary();
    while (ts_.accept("/\\")) a = f_and(a, unary());
    return a;
  }

  Formula unary() {
    if (ts_.accept("~")) return f_not(unary());
    if (ts_.is("forall") || ts_.is("exists")) {
      bool all = ts_.next().text == "forall";
      std::vector<std::string> vars;
      do {
        vars.push_back(ts_.expect_ident());
      } while (ts_.is_ident());
      ts_.expect(".");
      Formula body = formula();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = all ? f_forall(*it, body) : f_exists(*it, body);
      return body;
    }
    if (ts_.accept("conc")) {
      ts_.expect("(");
      Formula b = formula();
      ts_.expect(")");
      return f_conc(b);
    }
    return primary();
  }

  std::optional<Rel> relation() {
    static const std::pair<const char*, Rel> rels[] = {{"=", Rel::Eq},  {"!=", Rel::Ne}, {"<", Rel::Lt},
                                                       {"<=", Rel::Le}, {">", Rel::Gt},  {">=", Rel::Ge}};
    for (auto [text, r] : rels) {
      if (ts_.accept(text)) return r;
    }
    return std::nullopt;
  }

  Formula primary() {
    // An atom starts with a term; fall back to formula syntax when no relation follows.
    std::size_t m = ts_.mark();
    try {
      FOTerm l = term();
      if (auto r = relation()) return f_atom(*r, l, term());
    } catch (const ParseError&) {
    }
    ts_.reset(m);
    if (ts_.accept("False")) return f_false();
    if (ts_.accept("(")) {
      if (ts_.is("mu") || ts_.is("nu") || ts_.is("\\")) {
        Predicate p = pred();
        ts_.expect(")");
        return apply(p);
      }
      Formula f = formula();
      ts_.expect(")");
      return f;
    }
    if (!ts_.is_ident() || is_keyword(ts_.peek().text)) ts_.fail({"formula"});
    std::string name = ts_.next().text;
    std::vector<FOTerm> args = arguments();
    Predicate p = resolve(name, args.size());
    return f_app(std::move(p), std::move(args));
  }

  Formula apply(const Predicate& p) { return f_app(p, arguments()); }

  std::vector<FOTerm> arguments() {
    std::vector<FOTerm> args;
    if (!ts_.accept("(")) return args;
    if (!ts_.accept(")")) {
      do {
        args.push_back(term());
      } while (ts_.accept(","));
      ts_.expect(")");
    }
    return args;
  }

  FOTerm term() {
    FOTerm a = product();
    for (;;) {
      if (ts_.accept("+")) {
        a = t_op(TermKind::Add, {a, product()});
      } else if (ts_.accept("-")) {
        a = t_op(TermKind::Sub, {a, product()});
      } else {
        return a;
      }
    }
  }

  FOTerm product() {
    FOTerm a = factor();
    for (;;) {
      if (ts_.accept("*")) {
        a = t_op(TermKind::Mul, {a, factor()});
      } else if (ts_.accept("/")) {
        a = t_op(TermKind::Div, {a, factor()});
      } else {
        return a;
      }
    }
  }

  FOTerm factor() {
    if (ts_.accept("-")) return t_op(TermKind::Neg, {factor()});
    if (ts_.peek().kind == Tok::Number) return t_num(static_cast<std::int64_t>(number()));
    if (ts_.accept("|")) {
      FOTerm t = term();
      ts_.expect("|");
      return t_op(TermKind::Abs, {t});
    }
    if (ts_.accept("(")) {
      FOTerm t = term();
      ts_.expect(")");
      return t;
    }
    if (!ts_.is_ident() || is_keyword(ts_.peek().text)) ts_.fail({"term"});
    std::string name = ts_.next().text;
    if (ts_.is("(")) {
      ts_.next();
      std::vector<FOTerm> args;
      do {
        args.push_back(term());
      } while (ts_.accept(","));
      ts_.expect(")");
      return t_fun(name, std::move(args));
    }
    return t_var(name);
  }

  TokenStream ts_;
  std::vector<std::string> bound_;
  std::map<std::string, Predicate> named_;
  std::map<std::string, std::size_t> consts_;
};

}  // namespace

CfpFile parse_cfp(std::string_view text) { return Parser(text, nullptr).file(); }

CfpFile load_cfp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_cfp(ss.str());
}

Formula parse_formula(std::string_view text, const CfpFile* env) { return Parser(text, env).single_formula(); }

}  // namespace amb::logic
