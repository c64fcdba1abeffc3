#pragma once

#include <string>

namespace nb {

// NUGGETBENCH_LOG=debug|info|warn (default warn). Messages go to stderr.
enum class LogLevel { Debug = 0, Info = 1, Warn = 2 };

LogLevel log_level();
void log(LogLevel level, const std::string& message);

inline void log_debug(const std::string& m) { log(LogLevel::Debug, m); }
inline void log_info(const std::string& m) { log(LogLevel::Info, m); }
inline void log_warn(const std::string& m) { log(LogLevel::Warn, m); }

}  // namespace nb
