#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amb/ast.hpp"

namespace amb {

// Compact elements of D: finite trees over the data constructors, Amb, function tags and ⊥.
enum class DKind : std::uint8_t { Bot, Nil, Le, Ri, Pair, AmbD, Fun };

class DataNode;
using FiniteData = std::shared_ptr<const DataNode>;

class DataNode {
 public:
  DKind kind() const { return kind_; }
  const std::vector<FiniteData>& children() const { return children_; }
  const FiniteData& child(std::size_t i) const { return children_[i]; }
  // The lambda a function tag stands for; tags are identified up to alpha-equivalence.
  const Program& fun() const { return fun_; }
  std::size_t hash() const { return hash_; }
  bool has_bot() const { return has_bot_; }
  bool has_amb() const { return has_amb_; }

  DataNode(DKind kind, std::vector<FiniteData> children, Program fun);

 private:
  DKind kind_;
  std::vector<FiniteData> children_;
  Program fun_;
  std::size_t hash_ = 0;
  bool has_bot_ = false;
  bool has_amb_ = false;
};

FiniteData d_bot();
FiniteData d_nil();
FiniteData d_le(FiniteData a);
FiniteData d_ri(FiniteData a);
FiniteData d_pair(FiniteData a, FiniteData b);
FiniteData d_amb(FiniteData a, FiniteData b);
FiniteData d_fun(Program lambda);
FiniteData d_numeral(unsigned n);
FiniteData d_node(DKind kind, std::vector<FiniteData> children);

bool data_equal(const FiniteData& a, const FiniteData& b);
// Total order used for canonical sorting of printed output.
int data_compare(const FiniteData& a, const FiniteData& b);

struct DataHash {
  std::size_t operator()(const FiniteData& d) const { return d->hash(); }
};
struct DataEq {
  bool operator()(const FiniteData& a, const FiniteData& b) const { return data_equal(a, b); }
};
struct DataLess {
  bool operator()(const FiniteData& a, const FiniteData& b) const { return data_compare(a, b) < 0; }
};

// Numerals print as digits, x(Nil) as the bare constructor name, ⊥ as `bot`.
std::string print(const FiniteData& d);
// Reads the printed form back. Lambdas become function tags, `bot` is ⊥, Amb is AmbD.
FiniteData parse_data(std::string_view text);
// Literal reading of a program as an element: Bottom is ⊥, Amb is AmbD, lambdas are tags.
// Throws Error on any other node kind.
FiniteData data_of_literal(const Program& p);

}  // namespace amb
