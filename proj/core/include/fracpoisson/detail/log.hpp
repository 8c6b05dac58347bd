#ifndef FRACPOISSON_DETAIL_LOG_HPP
#define FRACPOISSON_DETAIL_LOG_HPP

#include <cstdio>
#include <cstdlib>
#include <cstring>

// Diagnostic logging to stderr, gated by the FRACPOISSON_LOG environment
// variable: unset/"off" = silent, "warn", "info", "debug".

namespace fracpoisson::detail {

enum class LogLevel { off = 0, warn = 1, info = 2, debug = 3 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("FRACPOISSON_LOG");
    if (env == nullptr || std::strcmp(env, "off") == 0) return LogLevel::off;
    if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    return LogLevel::info;
  }();
  return level;
}

template <typename... Args>
void log(LogLevel level, const char* fmt, Args... args) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::fprintf(stderr, "[fracpoisson] ");
  std::fprintf(stderr, fmt, args...);
  std::fprintf(stderr, "\n");
}

}  // namespace fracpoisson::detail

#endif  // FRACPOISSON_DETAIL_LOG_HPP
