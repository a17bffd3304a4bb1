#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace amb {

// ---------------------------------------------------------------------------
// Programs
//
// Terms are locally nameless: bound variables are de Bruijn indices (BVar),
// free variables are names (Var). Binder names are kept only as printing hints,
// so structural equality is alpha-equivalence.

enum class Ctor : std::uint8_t { Nil, Left, Right, Pair, Amb };

int arity(Ctor c);
std::string_view ctor_name(Ctor c);
std::optional<Ctor> ctor_from_name(std::string_view name);
inline bool is_data_ctor(Ctor c) { return c != Ctor::Amb; }

enum class Kind : std::uint8_t { Var, BVar, Lam, App, StrictApp, Rec, Bottom, Con, Case };

class Term;
using Program = std::shared_ptr<const Term>;

struct Clause {
  Ctor ctor;
  std::vector<std::string> binders;
  Program body;
};

class Term {
 public:
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::uint32_t index() const { return index_; }
  Ctor ctor() const { return ctor_; }
  const std::vector<Program>& children() const { return children_; }
  const std::vector<Clause>& clauses() const { return clauses_; }

  const Program& body() const { return children_[0]; }
  const Program& fun() const { return children_[0]; }
  const Program& arg() const { return children_[1]; }
  const Program& scrutinee() const { return children_[0]; }

  std::size_t hash() const { return hash_; }
  // Number of enclosing binders this term needs to be well scoped.
  std::uint32_t loose() const { return loose_; }
  bool has_free() const { return has_free_; }
  bool closed() const { return loose_ == 0 && !has_free_; }
  std::size_t size() const { return size_; }

  bool is_con(Ctor c) const { return kind_ == Kind::Con && ctor_ == c; }
  const Clause* clause_for(Ctor c) const;

  // Construction is through the factory functions below.
  Term(Kind kind, std::string name, std::uint32_t index, Ctor ctor, std::vector<Program> children,
       std::vector<Clause> clauses);

 private:
  Kind kind_;
  std::string name_;
  std::uint32_t index_ = 0;
  Ctor ctor_ = Ctor::Nil;
  std::vector<Program> children_;
  std::vector<Clause> clauses_;
  std::size_t hash_ = 0;
  std::uint32_t loose_ = 0;
  bool has_free_ = false;
  std::size_t size_ = 1;
};

bool operator==(const Term& a, const Term& b);
bool alpha_equal(const Program& a, const Program& b);

struct ProgramHash {
  std::size_t operator()(const Program& p) const { return p->hash(); }
};
struct ProgramEq {
  bool operator()(const Program& a, const Program& b) const { return alpha_equal(a, b); }
};

Program var(std::string name);
Program bvar(std::uint32_t index);
// Binds every free occurrence of `binder` in `body`.
Program lam(const std::string& binder, const Program& body);
Program lam_raw(std::string hint, Program scoped_body);
Program app(Program f, Program a);
Program strict_app(Program f, Program a);
Program rec(Program body);
Program bottom();
Program con(Ctor c, std::vector<Program> children = {});
Program nil();
Program left(Program p);
Program right(Program p);
Program pair(Program a, Program b);
Program amb(Program a, Program b);
// Clause bodies mention their binders as free names; they are bound here.
Program case_of(Program scrutinee, std::vector<Clause> clauses);
Program case_raw(Program scrutinee, std::vector<Clause> scoped_clauses);
Program numeral(unsigned n);

// Replaces bound index 0..k-1 of a scope body by `values` (values[j] for binder j).
Program instantiate(const Program& scoped_body, const std::vector<Program>& values);
Program instantiate1(const Program& scoped_body, const Program& value);

Program subst(const Program& body, const std::string& var, const Program& arg);
std::set<std::string> free_vars(const Program& p);
bool occurs_free(const Program& p, const std::string& var);

// ---------------------------------------------------------------------------
// Types (same locally nameless scheme; Meta nodes exist only inside the checker)

enum class TKind : std::uint8_t { Var, BVar, Meta, Unit, Sum, Prod, Arrow, Fix, AmbT };

class TypeNode;
using Type = std::shared_ptr<const TypeNode>;

class TypeNode {
 public:
  TKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::uint32_t index() const { return index_; }
  const std::vector<Type>& children() const { return children_; }
  const Type& left() const { return children_[0]; }
  const Type& right() const { return children_[1]; }
  const Type& body() const { return children_[0]; }
  std::size_t hash() const { return hash_; }
  std::uint32_t loose() const { return loose_; }
  bool has_meta() const { return has_meta_; }

  TypeNode(TKind kind, std::string name, std::uint32_t index, std::vector<Type> children);

 private:
  TKind kind_;
  std::string name_;
  std::uint32_t index_ = 0;
  std::vector<Type> children_;
  std::size_t hash_ = 0;
  std::uint32_t loose_ = 0;
  bool has_meta_ = false;
};

bool operator==(const TypeNode& a, const TypeNode& b);
bool alpha_equal(const Type& a, const Type& b);

Type tvar(std::string name);
Type tbvar(std::uint32_t index);
Type tmeta(std::uint32_t id);
Type unit_t();
Type sum_t(Type l, Type r);
Type prod_t(Type l, Type r);
Type arrow_t(Type d, Type c);
Type fix_t(const std::string& binder, const Type& body);
Type fix_raw(std::string hint, Type scoped_body);
Type amb_t(Type body);

Type nat_t();
Type two_t();
Type three_t();
Type stream_t(const Type& elem);

Type unfold(const Type& fix);
Type instantiate(const Type& scoped_body, const Type& value);
Type subst(const Type& t, const std::string& var, const Type& value);
std::set<std::string> free_vars(const Type& t);

bool is_determined(const Type& t, const std::set<std::string>& determined_vars = {});
bool is_regular(const Type& t, const std::set<std::string>& determined_vars = {});

// ---------------------------------------------------------------------------
// Surface syntax

Program parse_program(std::string_view text);
Type parse_type(std::string_view text);

std::string print(const Program& p);
std::string print(const Type& t);
// Truncates with "..." once `width` characters are exceeded.
std::string print_capped(const Program& p, std::size_t width);

struct Definition {
  std::string name;
  std::optional<Type> type;
  Program body;  // may mention earlier definitions and itself as free names
  std::size_t line = 0;
};

class Module {
 public:
  std::vector<Definition> defs;
  std::optional<Program> main;

  const Definition* find(std::string_view name) const;
  // Closed program for a definition: references are inlined, self-reference becomes rec.
  Program link(std::string_view name) const;
  Program link_main() const;
  Program link_term(const Program& p) const;

 private:
  mutable std::map<std::string, Program, std::less<>> linked_;
};

Module parse_module(std::string_view text);
Module load_module(const std::string& path);

}  // namespace amb
