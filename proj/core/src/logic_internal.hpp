#pragma once

#include <set>
#include <string>

#include "amb/logic.hpp"

namespace amb::logic::detail {

// Harrop test with the predicate variables in `consts` counted as constants.
bool harrop(const Formula& a, const std::set<std::string>& consts);
bool harrop(const Predicate& p, const std::set<std::string>& consts);

}  // namespace amb::logic::detail
