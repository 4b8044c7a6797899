#pragma once

#include <stdexcept>
#include <string>

namespace bsq {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class ModelError : public Error {
public:
  using Error::Error;
};

// Bayes update received an observation with zero likelihood under (b, a).
// This always indicates an inconsistent model or trace, never a recoverable
// condition, so it is its own type.
class ImpossibleObservation : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(int line, int col, const std::string& what)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_;
  int col_;
};

class BudgetExceeded : public Error {
public:
  using Error::Error;
};

class NoSolution : public Error {
public:
  using Error::Error;
};

}  // namespace bsq
