#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

// Minimal stderr logger. Level comes from the HB_LOG environment variable:
// error, warn, info (default), debug.
namespace hb::log {

enum class Level : int { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

inline Level threshold() {
  static Level lvl = [] {
    const char* e = std::getenv("HB_LOG");
    if (!e) return Level::kInfo;
    if (!std::strcmp(e, "error")) return Level::kError;
    if (!std::strcmp(e, "warn")) return Level::kWarn;
    if (!std::strcmp(e, "debug")) return Level::kDebug;
    return Level::kInfo;
  }();
  return lvl;
}

inline void emit(Level lvl, const char* tag, const std::string& msg) {
  if (static_cast<int>(lvl) > static_cast<int>(threshold())) return;
  std::fprintf(stderr, "[hb %s] %s\n", tag, msg.c_str());
}

inline void error(const std::string& m) { emit(Level::kError, "error", m); }
inline void warn(const std::string& m) { emit(Level::kWarn, "warn", m); }
inline void info(const std::string& m) { emit(Level::kInfo, "info", m); }
inline void debug(const std::string& m) { emit(Level::kDebug, "debug", m); }

}  // namespace hb::log
