#include "lexer.hpp"

#include <cctype>

namespace amb::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

// Longest match first.
constexpr std::string_view kSymbols[] = {"->", "|>", "/\\", "\\/", "<=", ">=", "!=", "\\", ".", "(", ")", "{",
                                         "}",  ",",  ";",   ":",   "=",  "+",  "*",  "-", "$", "|", "<", ">",
                                         "~",  "/"};

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      bool matched = false;
      for (auto sym : kSymbols) {
        if (src.substr(i, sym.size()) == sym) {
          t.kind = Tok::Symbol;
          t.text = std::string(sym);
          advance(sym.size());
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

void TokenStream::fail(std::initializer_list<std::string> expected) const {
  std::string msg = "expected ";
  bool first = true;
  for (const auto& e : expected) {
    if (!first) msg += " or ";
    msg += e;
    first = false;
  }
  const Token& t = peek();
  msg += t.kind == Tok::End ? ", found end of input" : ", found '" + t.text + "'";
  throw ParseError(t.line, t.column, msg);
}

void TokenStream::fail_msg(const std::string& msg) const {
  const Token& t = peek();
  throw ParseError(t.line, t.column, msg);
}

}  // namespace amb::detail
