#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wernerprep {

enum class ErrorKind {
  shape,
  domain,
  weights,
  unitarity,
  dimension,
  solver,
  parse,
  infeasible,
  not_diagonalizable,
  capacity,
  io,
};

inline std::string_view category(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::shape: return "shape";
    case ErrorKind::domain: return "domain";
    case ErrorKind::weights: return "weights";
    case ErrorKind::unitarity: return "unitarity";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::solver: return "solver";
    case ErrorKind::parse: return "parse";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::not_diagonalizable: return "not-diagonalizable";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
    : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
private:
  ErrorKind kind_;
};

// column is 1-based
class ParseError : public Error {
public:
  ParseError(std::size_t column, const std::string& msg)
    : Error(ErrorKind::parse, msg + " at column " + std::to_string(column)),
      column_(column) {}
  std::size_t column() const noexcept { return column_; }
private:
  std::size_t column_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

} // namespace wernerprep
