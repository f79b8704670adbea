#pragma once

#include <stdexcept>
#include <string>

namespace ucantor {

/// Failure categories. The CLI maps each one onto a distinct exit status.
enum class ErrorKind {
  Parse,        // malformed input text or JSON
  Validation,   // well-formed input violating a construction invariant
  Inapplicable, // a criterion's hypothesis does not hold
  Budget,       // enumeration would exceed the configured budget
  Internal      // an invariant the library itself guarantees was breached
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorKind::Parse, w) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& w) : Error(ErrorKind::Validation, w) {}
};

struct InapplicableError : Error {
  explicit InapplicableError(const std::string& w) : Error(ErrorKind::Inapplicable, w) {}
};

struct BudgetError : Error {
  BudgetError(const std::string& w, long long largest_feasible = -1)
      : Error(ErrorKind::Budget, w), largest_feasible_(largest_feasible) {}
  /// Largest depth/horizon that would have fit, or -1 when unknown.
  long long largest_feasible() const noexcept { return largest_feasible_; }

 private:
  long long largest_feasible_;
};

struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorKind::Internal, w) {}
};

#define UCANTOR_ENSURE(cond, msg)                                   \
  do {                                                              \
    if (!(cond)) throw ::ucantor::InternalError(std::string(msg));  \
  } while (0)

}  // namespace ucantor
