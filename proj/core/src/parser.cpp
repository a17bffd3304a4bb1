#include <fstream>
#include <sstream>

#include "amb/ast.hpp"
#include "lexer.hpp"

namespace amb {

namespace {

using detail::Tok;
using detail::TokenStream;

bool is_keyword(const std::string& s) {
  return s == "rec" || s == "bot" || s == "case" || s == "def" || s == "main" || s == "fix";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : ts_(src) {}

  TokenStream& tokens() { return ts_; }

  Program expr() {
    if (ts_.accept("\\")) return lambda();
    if (ts_.accept("rec")) return rec(expr());
    return strict();
  }

  Type type() {
    if (ts_.accept("fix")) {
      std::string a = ts_.expect_ident();
      ts_.expect(".");
      return fix_t(a, type());
    }
    Type lhs = sum();
    if (ts_.accept("->")) return arrow_t(lhs, type());
    return lhs;
  }

 private:
  struct Pattern {
    std::string name;  // set for a plain binder
    Ctor ctor = Ctor::Nil;
    std::vector<Pattern> args;
    bool is_ctor = false;
  };

  Pattern pattern() {
    Pattern p;
    if (ts_.is_ident()) {
      std::string id = ts_.peek().text;
      if (auto c = ctor_from_name(id)) {
        ts_.next();
        p.is_ctor = true;
        p.ctor = *c;
        if (arity(*c) > 0) {
          ts_.expect("(");
          for (int i = 0; i < arity(*c); ++i) {
            if (i > 0) ts_.expect(",");
            p.args.push_back(pattern());
          }
          ts_.expect(")");
        }
        return p;
      }
      if (is_keyword(id)) ts_.fail({"binder"});
      p.name = ts_.next().text;
      return p;
    }
    if (ts_.accept("(")) {
      Pattern inner = pattern();
      ts_.expect(")");
      return inner;
    }
    ts_.fail({"binder"});
  }

  // Binds `p` around `body`: plain names are bound by an enclosing lambda,
  // constructor patterns turn into single-clause cases.
  Program bind_pattern(const Pattern& p, const std::string& scrut, Program body) {
    std::vector<std::string> names;
    std::vector<std::pair<std::string, const Pattern*>> nested;
    for (const auto& a : p.args) {
      if (a.is_ctor) {
        std::string tmp = "%" + std::to_string(fresh_++);
        names.push_back(tmp);
        nested.emplace_back(tmp, &a);
      } else {
        names.push_back(a.name);
      }
    }
    for (auto it = nested.rbegin(); it != nested.rend(); ++it) body = bind_pattern(*it->second, it->first, body);
    Clause cl{p.ctor, names, body};
    Program result = case_of(var(scrut), {cl});
    // Restore readable hints for the generated binders.
    if (!nested.empty()) {
      std::vector<Clause> cls = result->clauses();
      for (auto& b : cls.front().binders) {
        if (!b.empty() && b[0] == '%') b = "p";
      }
      result = case_raw(result->scrutinee(), cls);
    }
    return result;
  }

  Program lambda() {
    std::vector<Pattern> binders;
    do {
      binders.push_back(pattern());
    } while (!ts_.is("."));
    ts_.expect(".");
    Program body = expr();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      if (it->is_ctor) {
        std::string tmp = "%" + std::to_string(fresh_++);
        Program inner = lam(tmp, bind_pattern(*it, tmp, body));
        body = lam_raw("p", inner->body());
      } else {
        body = it->name == "_" ? lam_raw("_", body) : lam(it->name, body);
      }
    }
    return body;
  }

  Program strict() {
    // `Left $ M` abbreviates (\a. Left(a)) $ M.
    if (ts_.is_ident() && ts_.is("$", 1)) {
      if (auto c = ctor_from_name(ts_.peek().text); c && arity(*c) == 1) {
        ts_.next();
        ts_.next();
        Program f = lam("a", con(*c, {var("a")}));
        return strict_app(f, strict());
      }
    }
    Program lhs = application();
    if (ts_.accept("$")) return strict_app(lhs, strict());
    return lhs;
  }

  bool starts_atom() const {
    const auto& t = ts_.peek();
    if (t.kind == Tok::Number) return true;
    if (t.kind == Tok::Ident) {
      return t.text == "bot" || t.text == "case" || !is_keyword(t.text);
    }
    return t.kind == Tok::Symbol && (t.text == "(" || t.text == "\\");
  }

  Program application() {
    Program f = atom();
    while (starts_atom()) {
      // A trailing lambda or rec extends to the right, as in Haskell.
      if (ts_.is("\\")) {
        ts_.next();
        return app(f, lambda());
      }
      f = app(f, atom());
    }
    if (ts_.is("rec")) {
      ts_.next();
      return app(f, rec(expr()));
    }
    return f;
  }

  Program atom() {
    const auto& t = ts_.peek();
    if (t.kind == Tok::Number) {
      std::string digits = ts_.next().text;
      return numeral(static_cast<unsigned>(std::stoul(digits)));
    }
    if (ts_.accept("(")) {
      Program e = expr();
      ts_.expect(")");
      return e;
    }
    if (ts_.accept("bot")) return bottom();
    if (ts_.accept("case")) return case_expr();
    if (t.kind == Tok::Ident) {
      if (auto c = ctor_from_name(t.text)) {
        ts_.next();
        return constructor(*c);
      }
      if (is_keyword(t.text)) ts_.fail({"term"});
      return var(ts_.next().text);
    }
    ts_.fail({"term"});
  }

  Program constructor(Ctor c) {
    std::vector<Program> kids;
    if (arity(c) == 0) {
      if (ts_.accept("(")) ts_.expect(")");
      return nil();
    }
    if (!ts_.is("(")) {
      if (arity(c) == 1) return con(c, {nil()});
      ts_.fail({"("});
    }
    ts_.expect("(");
    for (int i = 0; i < arity(c); ++i) {
      if (i > 0) ts_.expect(",");
      kids.push_back(expr());
    }
    ts_.expect(")");
    return con(c, std::move(kids));
  }

  Program case_expr() {
    Program scrut = expr();
    ts_.expect("{");
    std::vector<Clause> clauses;
    while (!ts_.is("}")) {
      const auto& t = ts_.peek();
      auto c = t.kind == Tok::Ident ? ctor_from_name(t.text) : std::nullopt;
      if (!c) ts_.fail({"constructor"});
      ts_.next();
      for (const auto& prev : clauses) {
        if (prev.ctor == *c) ts_.fail_msg("duplicate clause for " + std::string(ctor_name(*c)));
      }
      std::vector<std::string> binders;
      if (arity(*c) > 0) {
        ts_.expect("(");
        for (int i = 0; i < arity(*c); ++i) {
          if (i > 0) ts_.expect(",");
          std::string b = ts_.expect_ident();
          if (is_keyword(b) || ctor_from_name(b)) ts_.fail_msg("invalid binder '" + b + "'");
          binders.push_back(b);
        }
        ts_.expect(")");
      } else if (ts_.accept("(")) {
        ts_.expect(")");
      }
      ts_.expect("->");
      Program body = expr();
      clauses.push_back({*c, binders, body});
      if (!ts_.accept(";")) break;
    }
    ts_.expect("}");
    return case_of(scrut, std::move(clauses));
  }

  Type sum() {
    Type t = prod();
    while (ts_.accept("+")) t = sum_t(t, prod());
    return t;
  }

  Type prod() {
    Type t = tatom();
    while (ts_.accept("*")) t = prod_t(t, tatom());
    return t;
  }

  Type tatom() {
    const auto& t = ts_.peek();
    if (t.kind == Tok::Number) {
      auto n = std::stoul(ts_.next().text);
      if (n == 0) ts_.fail_msg("the empty type is not part of the type language");
      Type r = unit_t();
      for (unsigned long i = 1; i < n; ++i) r = sum_t(r, unit_t());
      return r;
    }
    if (ts_.accept("(")) {
      Type inner = type();
      ts_.expect(")");
      return inner;
    }
    if (t.kind == Tok::Ident) {
      std::string id = ts_.next().text;
      if (id == "nat") return nat_t();
      if (id == "A" && ts_.is("(")) {
        ts_.expect("(");
        Type inner = type();
        ts_.expect(")");
        return amb_t(inner);
      }
      if (id == "stream" && ts_.is("(")) {
        ts_.expect("(");
        Type inner = type();
        ts_.expect(")");
        return stream_t(inner);
      }
      if (id == "fix") ts_.fail_msg("parenthesize a fixpoint type used as an operand");
      return tvar(id);
    }
    ts_.fail({"type"});
  }

  TokenStream ts_;
  unsigned fresh_ = 0;
};

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(text);
  Program e = p.expr();
  if (!p.tokens().at_end()) p.tokens().fail({"end of input"});
  return e;
}

Type parse_type(std::string_view text) {
  Parser p(text);
  Type t = p.type();
  if (!p.tokens().at_end()) p.tokens().fail({"end of input"});
  return t;
}

Module parse_module(std::string_view text) {
  Parser p(text);
  auto& ts = p.tokens();
  Module m;
  while (!ts.at_end()) {
    if (ts.accept("main")) {
      if (m.main) ts.fail_msg("duplicate main");
      ts.expect("=");
      m.main = p.expr();
      ts.expect(";");
      continue;
    }
    std::size_t line = ts.peek().line;
    if (!ts.accept("def")) ts.fail({"def", "main"});
    Definition d;
    d.line = line;
    d.name = ts.expect_ident();
    if (is_keyword(d.name) || ctor_from_name(d.name)) ts.fail_msg("invalid definition name '" + d.name + "'");
    if (m.find(d.name)) ts.fail_msg("duplicate definition '" + d.name + "'");
    if (ts.accept(":")) d.type = p.type();
    ts.expect("=");
    d.body = p.expr();
    ts.expect(";");
    m.defs.push_back(std::move(d));
  }
  return m;
}

Module load_module(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_module(ss.str());
}

const Definition* Module::find(std::string_view name) const {
  for (const auto& d : defs) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

Program Module::link_term(const Program& p) const {
  Program out = p;
  for (const auto& name : free_vars(p)) {
    if (!find(name)) throw LinkError("unbound identifier '" + name + "'");
    out = subst(out, name, link(name));
  }
  return out;
}

Program Module::link(std::string_view name) const {
  if (auto it = linked_.find(name); it != linked_.end()) return it->second;
  const Definition* d = find(name);
  if (!d) throw LinkError("unknown definition '" + std::string(name) + "'");
  Program body = d->body;
  std::set<std::string> fv = free_vars(body);
  bool self = fv.count(d->name) > 0;
  // Only definitions that appear earlier may be referenced.
  for (const auto& n : fv) {
    if (n == d->name) continue;
    const Definition* dep = find(n);
    if (!dep || dep >= d) throw LinkError("unbound identifier '" + n + "' in definition '" + d->name + "'");
    body = subst(body, n, link(n));
  }
  if (self) body = rec(lam(d->name, body));
  linked_.emplace(d->name, body);
  return body;
}

Program Module::link_main() const {
  if (!main) throw LinkError("module has no main");
  return link_term(*main);
}

}  // namespace amb
