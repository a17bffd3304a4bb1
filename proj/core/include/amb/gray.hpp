#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amb/ast.hpp"
#include "amb/data.hpp"
#include "amb/opsem.hpp"

namespace amb::gray {

using Rational = boost::multiprecision::cpp_rational;

// Accepts "P/Q", "P" or a decimal such as "-0.25". Throws Error on malformed text.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& x);

// Digit i is the sign of t^i(x) with t(x) = 1 - 2|x|; empty where t^i(x) = 0.
// Throws OutOfRange if |x| > 1.
std::vector<std::optional<int>> gray_oracle(const Rational& x, std::size_t n);

struct DelayedDigit {
  std::optional<int> digit;  // -1, 1, or empty for ⊥
  std::size_t delay = 1;     // 0 also means ⊥
};

// Pair-chain of Gray digits. Delay 1 is the bare constructor; delay k >= 2 is a term that
// takes exactly k head steps to reach it. The list is continued by repeating the last
// defined digit forever.
Program gray_program(const std::vector<DelayedDigit>& digits);
Program delayed_digit(const DelayedDigit& d);

Rational sd_value(const std::vector<int>& prefix);
bool sd_valid_prefix(const Rational& x, const std::vector<int>& prefix);

// Signed digit from its encoding: Left(Left) is -1, Left(Right) is 1, Right is 0.
// Empty for a digit that is still ⊥; throws MalformedOutput on any other shape.
std::optional<int> decode_sd_digit(const FiniteData& d);
// Digits of a Pair-chain up to the first ⊥ or `limit` digits.
std::vector<int> decode_sd_stream(const FiniteData& d, std::size_t limit);

// Appendix-style rendering: " 1", "-1", " 0", " bot".
std::string dtosd(const std::optional<int>& digit);

// How an undefined Gray digit (t^i(x) = 0) is presented to the program.
enum class ZeroDigit { Bot, Plus, Minus };

struct GtosOptions {
  opsem::Schedule schedule = opsem::Schedule::round_robin();
  std::size_t digits = 16;
  std::size_t fuel = 100000;
  std::vector<std::size_t> delays;       // per input digit; missing entries are 1
  std::optional<std::size_t> bot_at;     // force input digit i to ⊥
  ZeroDigit zero = ZeroDigit::Bot;
  std::string program = "gtos";          // stdlib converter to run
};

struct GtosResult {
  std::vector<int> digits;
  bool complete = false;  // false if fuel ran out first
  std::size_t steps = 0;
  std::vector<DelayedDigit> input;
  FiniteData output;
};

GtosResult gtos_run(const Rational& x, const GtosOptions& opts);

}  // namespace amb::gray
