#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class OpenTerm : public Error {
 public:
  using Error::Error;
};

class NonRegularType : public Error {
 public:
  using Error::Error;
};

class Budget : public Error {
 public:
  using Error::Error;
};

class InvalidPick : public Error {
 public:
  using Error::Error;
};

class UnfairSchedule : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class MalformedOutput : public Error {
 public:
  using Error::Error;
};

class LinkError : public Error {
 public:
  using Error::Error;
};

class FuelExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace amb
