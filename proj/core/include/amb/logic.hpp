#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "amb/ast.hpp"

namespace amb::logic {

// ---------------------------------------------------------------------------
// First-order terms over the reals

enum class TermKind : std::uint8_t { Var, Num, Add, Sub, Mul, Div, Neg, Abs, Fun };

struct FOTermNode;
using FOTerm = std::shared_ptr<const FOTermNode>;

struct FOTermNode {
  TermKind kind;
  std::string name;      // Var, Fun
  std::int64_t num = 0;  // Num
  std::vector<FOTerm> args;
};

FOTerm t_var(std::string name);
FOTerm t_num(std::int64_t n);
FOTerm t_op(TermKind k, std::vector<FOTerm> args);
FOTerm t_fun(std::string name, std::vector<FOTerm> args);

// ---------------------------------------------------------------------------
// Formulas and predicates

enum class Rel : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };
enum class FKind : std::uint8_t { PredApp, Atom, And, Or, Implies, Forall, Exists, Restrict, Conc };
enum class PKind : std::uint8_t { Var, Const, Named, Compr, Mu, Nu };

struct FormulaNode;
struct PredicateNode;
using Formula = std::shared_ptr<const FormulaNode>;
using Predicate = std::shared_ptr<const PredicateNode>;

struct FormulaNode {
  FKind kind;
  Predicate pred;              // PredApp
  Rel rel = Rel::Eq;           // Atom
  std::vector<FOTerm> terms;   // PredApp arguments, Atom operands
  std::string var;             // Forall, Exists
  std::vector<Formula> kids;   // connectives; Restrict is (premise, body)
};

struct PredicateNode {
  PKind kind;
  std::string name;               // Var, Const, Named; the bound variable of Mu/Nu
  std::size_t arity = 0;          // Var, Const
  std::vector<std::string> vars;  // Compr
  Formula body;                   // Compr
  Predicate inner;                // Mu/Nu body, Named definition
};

Formula f_app(Predicate p, std::vector<FOTerm> args);
Formula f_atom(Rel r, FOTerm a, FOTerm b);
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);
Formula f_implies(Formula a, Formula b);
Formula f_forall(std::string x, Formula body);
Formula f_exists(std::string x, Formula body);
Formula f_restrict(Formula premise, Formula body);
Formula f_conc(Formula body);
// μ(λX.X) with X propositional
Formula f_false();
Formula f_not(Formula a);

Predicate p_var(std::string name, std::size_t arity);
Predicate p_const(std::string name, std::size_t arity);
Predicate p_named(std::string name, Predicate def);
Predicate p_compr(std::vector<std::string> vars, Formula body);
Predicate p_mu(std::string x, Predicate body);
Predicate p_nu(std::string x, Predicate body);

std::size_t arity(const Predicate& p);

// Alpha-equivalence; named predicates are compared through their definitions.
bool equal(const Formula& a, const Formula& b);
bool equal(const Predicate& a, const Predicate& b);

std::set<std::string> free_pred_vars(const Formula& a);
std::set<std::string> free_pred_vars(const Predicate& p);

// Throws Error unless arities agree, every fixed point is strictly positive in its variable
// and every restriction and concurrency body is strict.
void check_well_formed(const Formula& a);
void check_well_formed(const Predicate& p);

// ---------------------------------------------------------------------------
// Analyses

bool is_harrop(const Formula& a);
bool is_harrop(const Predicate& p);
bool is_strict(const Formula& a);
bool is_admissible(const Formula& a);
bool is_admissible(const Predicate& p);

// The type variable standing for predicate variable X.
std::string type_var_for(const std::string& pred_var);

Type tau(const Formula& a);
Type tau(const Predicate& p);

Formula erase_minus(const Formula& a);
Predicate erase_minus(const Predicate& p);

// ---------------------------------------------------------------------------
// Realizability formulas

enum class RKind : std::uint8_t {
  // domain terms
  DVar, DCon, DApp,
  // formulas
  Atom, DEq, HasType, Defined, And, Or, Implies, Forall, Exists, PredApp,
  // predicates
  PVar, PConst, PLam, PMu, PNu,
};

struct RNode;
using RExpr = std::shared_ptr<const RNode>;

struct RNode {
  RKind kind;
  std::string name;               // DVar, PVar, PConst, PMu/PNu binder
  Ctor ctor = Ctor::Nil;          // DCon
  Rel rel = Rel::Eq;              // Atom
  std::vector<FOTerm> terms;      // Atom operands, PredApp object arguments
  std::vector<std::string> vars;  // quantified or abstracted variables
  bool realizer_arg = false;      // PLam/PredApp: whether the last argument is a domain element
  Type type;                      // HasType
  std::vector<RExpr> kids;
};

// λa. a r A, or λ(x⃗, a). a r P(x⃗) for a predicate. Harrop parts use H.
RExpr realizability_translate(const Formula& a);
RExpr realizability_translate(const Predicate& p);

// ---------------------------------------------------------------------------
// .cfp files

std::string print(const FOTerm& t);
std::string print(const Formula& a);
std::string print(const Predicate& p);
std::string print(const RExpr& r);

using Decl = std::variant<Formula, Predicate>;

struct CfpFile {
  std::vector<std::pair<std::string, Decl>> decls;
  const Decl* find(std::string_view name) const;
};

CfpFile parse_cfp(std::string_view text);
CfpFile load_cfp(const std::filesystem::path& path);
Formula parse_formula(std::string_view text, const CfpFile* env = nullptr);

}  // namespace amb::logic
