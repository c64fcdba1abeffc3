#include "nuggetbench/core/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace nb {

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("NUGGETBENCH_LOG");
    if (env) {
      if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
      if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    }
    return LogLevel::Warn;
  }();
  return level;
}

void log(LogLevel level, const std::string& message) {
  if (level < log_level()) return;
  const char* tag = level == LogLevel::Debug ? "debug" : level == LogLevel::Info ? "info" : "warn";
  std::fprintf(stderr, "[%s] %s\n", tag, message.c_str());
}

}  // namespace nb
