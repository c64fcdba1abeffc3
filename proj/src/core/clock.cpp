#include "nuggetbench/core/clock.hpp"

#include <cstdlib>
#include <ctime>

namespace nb {

bool time_pinned() { return std::getenv("NUGGETBENCH_TIMESTAMP") != nullptr; }

std::string run_timestamp() {
  if (const char* pinned = std::getenv("NUGGETBENCH_TIMESTAMP")) {
    return pinned;
  }
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

double Stopwatch::seconds() const {
  if (time_pinned()) return 0.0;
  auto elapsed = std::chrono::steady_clock::now() - start_;
  return std::chrono::duration<double>(elapsed).count();
}

}  // namespace nb
