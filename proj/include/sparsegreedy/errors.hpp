#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sparsegreedy {

/// Inputs whose sizes disagree with the owning space or dictionary.
class DimensionMismatch : public std::invalid_argument {
public:
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// A combinatorial sweep would visit more subsets than the configured budget.
class BudgetExceeded : public std::runtime_error {
public:
  BudgetExceeded(const std::string& what, double required, double budget)
      : std::runtime_error(what + " (needs " + std::to_string(required) + " > budget " +
                           std::to_string(budget) + ")"),
        required_(required), budget_(budget) {}

  double required() const noexcept { return required_; }
  double budget() const noexcept { return budget_; }

private:
  double required_;
  double budget_;
};

/// Linearly dependent atoms or a singular interpolation system.
class DegenerateSystem : public std::runtime_error {
public:
  explicit DegenerateSystem(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative inner solver hit its step limit before meeting its certificate.
class SolverStagnation : public std::runtime_error {
public:
  explicit SolverStagnation(const std::string& what) : std::runtime_error(what) {}
};

inline void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(want) +
                            ", got " + std::to_string(got));
  }
}

}  // namespace sparsegreedy
