#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amb/ast.hpp"

namespace amb::typesys {

// Ordered program-variable context; later entries may not reuse a key.
class TypeContext {
 public:
  TypeContext() = default;
  TypeContext(std::initializer_list<std::pair<std::string, Type>> entries);

  void add(const std::string& name, const Type& t);
  const Type* lookup(const std::string& name) const;
  const std::vector<std::pair<std::string, Type>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, Type>> entries_;
};

// A global definition whose free type variables are instantiated afresh at each use.
struct Scheme {
  Type type;
};
using Globals = std::map<std::string, Scheme, std::less<>>;

struct TypingReport {
  bool accepted = true;
  std::string message;
  std::string locus;     // printed subterm where checking failed
  std::string path;      // child-index path from the root, e.g. "0.1"
  std::string expected;  // printed types, empty when not applicable
  std::string actual;

  explicit operator bool() const { return accepted; }
  std::string describe() const;
};

// Equirecursive equality of closed types.
bool type_equal(const Type& s, const Type& t);

// Free type variables of `t` and of the context entries are rigid and assumed to range
// over determined types. Throws NonRegularType if a supplied type is not regular.
TypingReport check(const TypeContext& ctx, const Program& m, const Type& t, const Globals& globals = {});

struct DefReport {
  std::string name;
  std::optional<Type> type;
  TypingReport report;
};

// Checks each ascribed definition against its type, with earlier definitions in scope.
// A definition may mention itself at its own (monomorphic) type.
std::vector<DefReport> check_module(const Module& m);

}  // namespace amb::typesys
