#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coverlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An enumeration hit its configured size limit before finishing.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t partial_count)
      : Error(what + " (budget exceeded after " + std::to_string(partial_count) + " items)"),
        partial_count_(partial_count) {}

  std::size_t partial_count() const noexcept { return partial_count_; }

 private:
  std::size_t partial_count_;
};

/// An audited inequality or invariant did not hold. This always indicates a bug.
class AuditFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario input; `field` locates the offending entry.
class InputError : public Error {
 public:
  InputError(const std::string& field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace coverlab
