#pragma once

#include <stdexcept>
#include <string>

namespace repsep {

/// Raised for every recoverable failure in the toolkit: bad input files,
/// violated preconditions, solver breakdowns. The message names the
/// offending entity (file, model id, entry index) whenever one exists.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace repsep
