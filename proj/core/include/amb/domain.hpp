#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "amb/ast.hpp"
#include "amb/data.hpp"

namespace amb::domain {

using DataSet = std::set<FiniteData, DataLess>;

bool leq(const FiniteData& a, const FiniteData& b);
std::optional<FiniteData> lub(const FiniteData& a, const FiniteData& b);
std::size_t rank(const FiniteData& a);

// Finite approximation of the denotation: each head normalization gets `fuel` ↝ steps and
// the result is cut at `depth` data-constructor levels. Throws OpenTerm.
FiniteData denote_fuel(const Program& m, std::size_t fuel, std::size_t depth);

// data(a) for a finite element, each member cut at `depth`. Throws Budget above `limit` members.
DataSet data_set(const FiniteData& a, std::size_t depth = SIZE_MAX, std::size_t limit = 1000000);

// Whether some d ∈ data(a) has m ⊑ d, without enumerating data(a).
bool dominated_by_data(const FiniteData& m, const FiniteData& a);

bool is_data_elem(const FiniteData& a);
bool is_reg_elem(const FiniteData& a);

// The selection cd⟨a_0, ..., a_n⟩ for an increasing chain of compact elements; its value is
// always a member of data(a_n). Throws Error if the chain is empty or not increasing.
FiniteData select_data(const std::vector<FiniteData>& chain);

}  // namespace amb::domain
