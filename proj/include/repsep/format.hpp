#pragma once

#include <string>

namespace repsep {

/// Shortest decimal string that parses back to exactly `value`.
/// Infinities print as "inf"/"-inf".
std::string format_number(double value);

}  // namespace repsep
