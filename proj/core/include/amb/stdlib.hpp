#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "amb/ast.hpp"

namespace amb::stdlib {

struct NamedProgram {
  std::string name;
  Program program;  // closed, with earlier definitions inlined
  Type type;
};

// The embedded corpus source and its parsed module.
std::string_view source();
const Module& module();

// Throws LinkError for unknown names.
Program get(std::string_view name);
Type type_of(std::string_view name);

std::vector<NamedProgram> all();

}  // namespace amb::stdlib
