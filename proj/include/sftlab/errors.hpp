#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sftlab {

// Base class for all recoverable workbench errors. The CLI maps these to
// structured error records and nonzero exit codes.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class AlphabetMismatch : public Error {
public:
  explicit AlphabetMismatch(const std::string& what) : Error(what) {}
};

class SupportNotContained : public Error {
public:
  explicit SupportNotContained(const std::string& what) : Error(what) {}
};

// A node-limited search ran out of budget before completing.
class BudgetExhausted : public Error {
public:
  explicit BudgetExhausted(const std::string& what) : Error(what) {}
};

class EmptyOutputSupport : public Error {
public:
  explicit EmptyOutputSupport(const std::string& what) : Error(what) {}
};

// Cantor-alphabet materialization would exceed the configured bit cap.
class SupportCapExceeded : public Error {
public:
  explicit SupportCapExceeded(const std::string& what) : Error(what) {}
};

// An oracle query left the declared domain of the map.
class DomainViolation : public Error {
public:
  explicit DomainViolation(const std::string& what) : Error(what) {}
};

// Malformed input file.
class FormatError : public Error {
public:
  explicit FormatError(const std::string& what) : Error(what) {}
};

// Deterministic search budget, counted in search-tree nodes (never wall
// time). A default-constructed budget is effectively unlimited.
struct Budget {
  std::uint64_t node_limit = UINT64_MAX;
  std::uint64_t nodes = 0;

  // Returns false once the limit is hit; callers decide whether that is an
  // error or an Unknown-style verdict.
  bool tick(std::uint64_t n = 1) {
    nodes += n;
    return nodes <= node_limit;
  }
  bool exhausted() const { return nodes > node_limit; }
};

}  // namespace sftlab
