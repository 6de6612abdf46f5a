#include "repsep/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace repsep::log {
namespace {

Level parse_level() {
  const char* env = std::getenv("REPSEP_LOG");
  if (!env) return Level::info;
  const std::string value(env);
  if (value == "error") return Level::error;
  if (value == "debug") return Level::debug;
  return Level::info;
}

void emit(Level level, const char* tag, std::string_view message) {
  if (level > threshold()) return;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  std::clog << "[repsep " << tag << "] " << message << '\n';
}

}  // namespace

Level threshold() {
  static const Level level = parse_level();
  return level;
}

void error(std::string_view message) { emit(Level::error, "error", message); }
void info(std::string_view message) { emit(Level::info, "info", message); }
void debug(std::string_view message) { emit(Level::debug, "debug", message); }

}  // namespace repsep::log
