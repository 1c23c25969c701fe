#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spfit {

/// Invalid parameters or an unknown identifier supplied by the caller.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A non-finite value showed up where a finite one is required.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " (index " + std::to_string(index) + ")"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Zero or non-finite pivot during tridiagonal elimination.
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(std::size_t row)
      : std::runtime_error("singular tridiagonal system: bad pivot in row " +
                           std::to_string(row)),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Newton iteration hit its iteration cap. Carries the last iterate so the
/// caller can inspect how far it got.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(std::vector<double> last_iterate,
                      std::vector<double> residual_history)
      : std::runtime_error("Newton iteration did not converge after " +
                           std::to_string(residual_history.size()) +
                           " iterations"),
        last_iterate_(std::move(last_iterate)),
        residual_history_(std::move(residual_history)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  const std::vector<double>& residual_history() const noexcept { return residual_history_; }

 private:
  std::vector<double> last_iterate_;
  std::vector<double> residual_history_;
};

}  // namespace spfit
