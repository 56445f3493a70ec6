#pragma once

#include <stdexcept>
#include <string>

namespace rfi {

// Bad user input: malformed config, out-of-range parameters, file schema
// violations. The CLI maps this to exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-finite value produced during iteration or evaluation. Exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Step size outside the certifiable interval; carries the valid window.
struct CertificationError : std::domain_error {
  double t_min;
  double t_max;
  CertificationError(const std::string& msg, double lo, double hi)
      : std::domain_error(msg), t_min(lo), t_max(hi) {}
};

}  // namespace rfi
