#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace contcalc {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An identifier (object, morphism, index, shape) that does not exist.
class UnknownId : public Error {
public:
  using Error::Error;
};

/// Input or intermediate result exceeds a configured size cap.
class SizeError : public Error {
public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int column)
      : Error(msg + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

struct Limits {
  int max_objects = 12;
  int max_morphisms = 48;
  /// Largest functor-groupoid source (in objects) used inside substitution
  /// and extension when the source is not discrete.
  int max_functor_source = 3;
  /// Upper bound on enumerated cells (functors, trees, morphisms).
  std::uint64_t max_cells = 1'000'000;
};

/// Limits with max_cells overridden by CONTCALC_MAX_CELLS when set.
inline Limits default_limits() {
  Limits l;
  if (const char* env = std::getenv("CONTCALC_MAX_CELLS")) {
    char* end = nullptr;
    auto v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) l.max_cells = v;
  }
  return l;
}

} // namespace contcalc
