#include "amb/stdlib.hpp"

#include <mutex>

#include "amb/error.hpp"
#include "stdlib_source.hpp"

namespace amb::stdlib {

std::string_view source() { return detail::kStdlibSource; }

const Module& module() {
  static const Module m = parse_module(source());
  return m;
}

Program get(std::string_view name) {
  // Module::link fills a cache.
  static std::mutex mu;
  std::lock_guard lock(mu);
  return module().link(name);
}

Type type_of(std::string_view name) {
  const Definition* d = module().find(name);
  if (!d) throw LinkError("unknown definition '" + std::string(name) + "'");
  if (!d->type) throw LinkError("definition '" + std::string(name) + "' has no type");
  return *d->type;
}

std::vector<NamedProgram> all() {
  std::vector<NamedProgram> out;
  for (const auto& d : module().defs) {
    if (d.type) out.push_back({d.name, get(d.name), *d.type});
  }
  return out;
}

}  // namespace amb::stdlib
