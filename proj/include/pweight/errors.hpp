#pragma once

#include <stdexcept>
#include <string>

namespace pweight {

// Argument outside the mathematical domain of an operation (bad scale, q not
// in (0,1), unsorted grid, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input that is well-formed but carries no usable information: all-zero
// estimates, empty bin sets, zero counts in range.
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input (datasets, CSV files, config documents).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested computation exceeds a documented work budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace pweight
