#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace qext {

// Raised when data violates a type invariant (normalization, PSD, trace, ...).
// The message names the invariant and the size of the violation.
class ValidationError : public std::invalid_argument {
public:
  ValidationError(const std::string& invariant, double magnitude)
      : std::invalid_argument(describe(invariant, magnitude)),
        invariant_(invariant), magnitude_(magnitude) {}

  explicit ValidationError(const std::string& message)
      : std::invalid_argument(message), invariant_(message), magnitude_(0.0) {}

  const std::string& invariant() const noexcept { return invariant_; }
  double magnitude() const noexcept { return magnitude_; }

private:
  static std::string describe(const std::string& invariant, double magnitude) {
    std::ostringstream os;
    os << invariant << " violated (magnitude " << magnitude << ")";
    return os.str();
  }

  std::string invariant_;
  double magnitude_;
};

// Raised for arguments outside an operation's domain (bad dimensions, ranges, ids).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace qext
