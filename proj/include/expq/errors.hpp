#pragma once

#include <stdexcept>
#include <string>

namespace expq {

// A precondition of an operation was violated by its caller.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A configured resource limit (disjuncts, coefficient size, wall time) was hit.
class ResourceExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace expq
