#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "amb/error.hpp"

namespace amb::detail {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::vector<Token> tokenize(std::string_view src);

class TokenStream {
 public:
  explicit TokenStream(std::string_view src) : toks_(tokenize(src)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(std::string_view text, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind != Tok::End && t.kind != Tok::Number && t.text == text;
  }
  bool is_ident(std::size_t ahead = 0) const { return peek(ahead).kind == Tok::Ident; }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    ++pos_;
    return true;
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  void expect(std::string_view text) {
    if (!accept(text)) fail({std::string(text)});
  }
  std::string expect_ident() {
    if (!is_ident()) fail({"identifier"});
    return next().text;
  }
  [[noreturn]] void fail(std::initializer_list<std::string> expected) const;
  [[noreturn]] void fail_msg(const std::string& msg) const;

  std::size_t mark() const { return pos_; }
  void reset(std::size_t m) { pos_ = m; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace amb::detail
