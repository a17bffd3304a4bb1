#include "amb/gray.hpp"

#include <cctype>

#include "amb/error.hpp"
#include "amb/stdlib.hpp"

namespace amb::gray {

using boost::multiprecision::cpp_int;

namespace {

cpp_int parse_int(std::string_view s, std::string_view whole) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  if (i == s.size()) throw Error("malformed number '" + std::string(whole) + "'");
  cpp_int v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw Error("malformed number '" + std::string(whole) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? cpp_int(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    cpp_int den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash), text), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    std::string_view ip = text.substr(0, dot);
    bool neg = !ip.empty() && ip[0] == '-';
    if (ip.empty() || ip == "-" || ip == "+") ip = "0";
    cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    cpp_int whole = parse_int(ip, text);
    cpp_int part = frac.empty() ? cpp_int(0) : parse_int(frac, text);
    if (!frac.empty() && (frac[0] == '-' || frac[0] == '+')) throw Error("malformed number '" + std::string(text) + "'");
    cpp_int num = (whole < 0 ? cpp_int(-whole) : whole) * scale + part;
    return Rational(neg ? cpp_int(-num) : num, scale);
  }
  return Rational(parse_int(text, text));
}

std::string to_string(const Rational& x) { return x.str(); }

std::vector<std::optional<int>> gray_oracle(const Rational& x, std::size_t n) {
  if (abs(x) > 1) throw OutOfRange("|x| > 1 for x = " + to_string(x));
  std::vector<std::optional<int>> out;
  out.reserve(n);
  Rational y = x;
  for (std::size_t i = 0; i < n; ++i) {
    if (y == 0) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(y > 0 ? 1 : -1);
    }
    y = 1 - 2 * abs(y);
  }
  return out;
}

Program delayed_digit(const DelayedDigit& d) {
  if (!d.digit || d.delay == 0) return bottom();
  if (*d.digit != 1 && *d.digit != -1) throw Error("Gray digits are -1 and 1");
  Program t = *d.digit == 1 ? right(nil()) : left(nil());
  if (d.delay == 1) return t;
  for (std::size_t k = 0; k < d.delay; ++k) t = app(lam_raw("_", t), nil());
  return t;
}

Program gray_program(const std::vector<DelayedDigit>& digits) {
  int last = 1;
  for (const auto& d : digits) {
    if (d.digit && d.delay > 0) last = *d.digit;
  }
  Program acc = rec(lam("s", pair(last == 1 ? right(nil()) : left(nil()), var("s"))));
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) acc = pair(delayed_digit(*it), acc);
  return acc;
}

Rational sd_value(const std::vector<int>& prefix) {
  Rational v = 0;
  Rational w(1, 2);
  for (int d : prefix) {
    if (d < -1 || d > 1) throw Error("signed digits are -1, 0 and 1");
    v += w * d;
    w /= 2;
  }
  return v;
}

bool sd_valid_prefix(const Rational& x, const std::vector<int>& prefix) {
  Rational bound(1);
  for (std::size_t i = 0; i < prefix.size(); ++i) bound /= 2;
  return abs(x - sd_value(prefix)) <= bound;
}

std::optional<int> decode_sd_digit(const FiniteData& d) {
  auto malformed = [&]() -> std::optional<int> { throw MalformedOutput("not a signed digit: " + print(d)); };
  switch (d->kind()) {
    case DKind::Bot:
      return std::nullopt;
    case DKind::Ri: {
      DKind k = d->child(0)->kind();
      if (k == DKind::Nil) return 0;
      if (k == DKind::Bot) return std::nullopt;
      return malformed();
    }
    case DKind::Le: {
      const FiniteData& c = d->child(0);
      if (c->kind() == DKind::Bot) return std::nullopt;
      if (c->kind() != DKind::Le && c->kind() != DKind::Ri) return malformed();
      DKind k = c->child(0)->kind();
      if (k == DKind::Bot) return std::nullopt;
      if (k != DKind::Nil) return malformed();
      return c->kind() == DKind::Le ? -1 : 1;
    }
    default:
      return malformed();
  }
}

std::vector<int> decode_sd_stream(const FiniteData& d, std::size_t limit) {
  std::vector<int> out;
  const DataNode* cur = d.get();
  while (out.size() < limit) {
    if (cur->kind() == DKind::Bot) break;
    if (cur->kind() != DKind::Pair) throw MalformedOutput("not a digit stream: " + print(d));
    auto digit = decode_sd_digit(cur->child(0));
    if (!digit) break;
    out.push_back(*digit);
    cur = cur->child(1).get();
  }
  return out;
}

std::string dtosd(const std::optional<int>& digit) {
  if (!digit) return " bot";
  switch (*digit) {
    case 1:
      return " 1";
    case -1:
      return "-1";
    case 0:
      return " 0";
    default:
      return " bot";
  }
}

GtosResult gtos_run(const Rational& x, const GtosOptions& opts) {
  if (opts.digits == 0) throw Error("at least one digit must be requested");
  auto oracle = gray_oracle(x, opts.digits + 8);
  GtosResult res;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    DelayedDigit d;
    d.digit = oracle[i];
    if (!d.digit && opts.zero != ZeroDigit::Bot) d.digit = opts.zero == ZeroDigit::Plus ? 1 : -1;
    if (opts.bot_at && *opts.bot_at == i) d.digit.reset();
    d.delay = i < opts.delays.size() ? opts.delays[i] : 1;
    res.input.push_back(d);
  }
  Program m = app(stdlib::get(opts.program), gray_program(res.input));
  opsem::RunOptions ro;
  ro.fuel = opts.fuel;
  ro.depth = opts.digits + 3;
  std::size_t want = opts.digits;
  ro.done = [want](const FiniteData& snap) { return decode_sd_stream(snap, want).size() >= want; };
  auto run = opsem::run_extract(m, opts.schedule, ro);
  res.output = run.value;
  res.steps = run.steps;
  res.digits = decode_sd_stream(run.value, want);
  res.complete = res.digits.size() >= want;
  return res;
}

}  // namespace amb::gray
