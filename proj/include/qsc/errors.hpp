#pragma once

#include <stdexcept>
#include <string>

namespace qsc {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Problem too large for the dense/brute-force routes.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a structural contract (mismatched dimensions, malformed walk).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Parameter regime the library deliberately does not handle (coupon k < m).
class UnsupportedRegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad command line, unknown lemma id, malformed grid file.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_domain(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace qsc
