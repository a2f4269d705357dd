#pragma once

#include <stdexcept>
#include <string>

namespace jcsq {

/// Invalid run configuration or unusable input file. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Couplings outside the domain of a closed-form construction
/// (e.g. a sub-critical state requested at g2 >= g1/2).
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical guard tripped: truncation tail, leakage, convergence.
/// Maps to CLI exit code 3.
class NumericalGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jcsq
