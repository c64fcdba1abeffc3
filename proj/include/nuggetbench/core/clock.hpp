#pragma once

#include <chrono>
#include <string>

namespace nb {

// NUGGETBENCH_TIMESTAMP pins the reported run timestamp and zeroes elapsed
// wall-clock fields, making report bytes reproducible across reruns.
bool time_pinned();

// The pinned value verbatim, otherwise UTC now as ISO-8601.
std::string run_timestamp();

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  // 0 when the clock is pinned.
  double seconds() const;

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace nb
