#pragma once

#include <stdexcept>

namespace alohamon {

/// Base class for domain errors raised by the analysis, optimizer and
/// simulator modules. Plain argument violations on value types throw
/// std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested transition budget cannot be met with probabilities in (0,1).
class BudgetInfeasible : public Error {
 public:
  using Error::Error;
};

/// Requested channel load cannot be reached by any policy.
class LoadInfeasible : public Error {
 public:
  using Error::Error;
};

/// Policy under which no update can ever be delivered to the sink.
class DegeneratePolicy : public Error {
 public:
  using Error::Error;
};

/// Queried (age, estimate) pair has zero probability mass.
class UnreachableCondition : public Error {
 public:
  using Error::Error;
};

/// (I - A) is numerically singular; the chain is effectively degenerate.
class SingularFundamentalMatrix : public Error {
 public:
  using Error::Error;
};

/// Empirical estimate requested from an empty cell or an empty run.
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

/// Every candidate policy in a search space is degenerate.
class NoFeasiblePolicy : public Error {
 public:
  using Error::Error;
};

/// Malformed or incomplete experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace alohamon
