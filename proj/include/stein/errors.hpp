#pragma once

#include <stdexcept>
#include <string>

namespace stein {

/// Invalid numerical input: non-finite coordinates, indices out of range,
/// non-positive times where a positive one is required.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configuration that cannot be executed (quadrature too large for k,
/// malformed family spec, bad CLI value).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A theorem hypothesis does not hold for the supplied inputs
/// (alpha <= 1/2 in the smoothing inequality, beta3 >= 1, ...).
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Loss of positive definiteness where the construction requires it.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stein
