#pragma once

#include <string_view>

namespace repsep::log {

enum class Level { error = 0, info = 1, debug = 2 };

/// Read once from REPSEP_LOG (error, info, debug); defaults to info.
Level threshold();

void error(std::string_view message);
void info(std::string_view message);
void debug(std::string_view message);

}  // namespace repsep::log
