#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace icw {

/// Operands from two different group models were combined.
struct ModelMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A ball or dense window would exceed the configured element budget.
struct BudgetExceeded : std::runtime_error {
  BudgetExceeded(std::size_t predicted_count, std::size_t budget_limit)
      : std::runtime_error("element budget exceeded: predicted " + std::to_string(predicted_count) +
                           " > budget " + std::to_string(budget_limit)),
        predicted(predicted_count),
        budget(budget_limit) {}
  std::size_t predicted;
  std::size_t budget;
};

/// A generator assignment does not respect a defining relation of the source.
struct InvalidHomomorphism : std::invalid_argument {
  InvalidHomomorphism(const std::string& failed_relator)
      : std::invalid_argument("relator " + failed_relator + " does not map to the identity"),
        relator(failed_relator) {}
  std::string relator;
};

/// A tail certificate disagrees with an evaluated value.
struct CertificateViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Unsupported : std::logic_error {
  using std::logic_error::logic_error;
};

/// Malformed user input (element names, function specs, JSON documents).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A kernel that was required to be positive semidefinite is not.
struct NotPositiveDefinite : std::runtime_error {
  NotPositiveDefinite(const std::string& what, double min_eig) : std::runtime_error(what), min_eigenvalue(min_eig) {}
  double min_eigenvalue;
};

/// A postcondition that can only fail through a convention bug.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace icw
