#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qext/roof.hpp"

namespace qext::cli {

enum Exit : int { kOk = 0, kInvariantFailure = 1, kInputError = 2 };

/// Runs one command line (without the program name); returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qext::cli

namespace qext::verify {

struct Check {
  std::string module;
  std::string name;
  bool hard;          // failures of hard checks make `verify` exit nonzero
  bool informational; // reported outcome only, never fails
  bool passed;
  double measured;    // worst observed value of the checked quantity
  std::string bound;  // the requirement on `measured`, e.g. ">= -5e-2"
  std::string note;
};

struct Options {
  bool quick = false;
  std::uint64_t seed = 7;
  OptimizerConfig optimizer{4, 0, 400, 1e-8, 1};
};

std::vector<Check> run_all(const Options& opt);

} // namespace qext::verify
