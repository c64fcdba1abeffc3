#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "nuggetbench/core/error.hpp"

namespace nb {

enum class Speaker { Customer, Helpdesk };

// Canonical nugget order; all serialized 7-vectors follow it.
enum class Nugget : std::size_t {
  CNug0 = 0,
  CNugStar = 1,
  CNug = 2,
  CNan = 3,
  HNugStar = 4,
  HNug = 5,
  HNan = 6,
};

inline constexpr std::size_t kNuggetCount = 7;
inline constexpr std::array<std::string_view, kNuggetCount> kNuggetNames = {
    "CNUG0", "CNUG*", "CNUG", "CNaN", "HNUG*", "HNUG", "HNaN"};

// Customer nuggets occupy indices [0,4); helpdesk nuggets [4,7).
inline constexpr std::size_t kCustomerNuggetBegin = 0;
inline constexpr std::size_t kCustomerNuggetEnd = 4;
inline constexpr std::size_t kHelpdeskNuggetBegin = 4;
inline constexpr std::size_t kHelpdeskNuggetEnd = 7;

inline bool nugget_valid_for(std::size_t nugget_index, Speaker speaker) {
  if (speaker == Speaker::Customer) {
    return nugget_index < kCustomerNuggetEnd;
  }
  return nugget_index >= kHelpdeskNuggetBegin && nugget_index < kHelpdeskNuggetEnd;
}

inline std::size_t valid_nugget_count(Speaker speaker) {
  return speaker == Speaker::Customer ? 4 : 3;
}

enum class Measure : std::size_t { A = 0, E = 1, S = 2 };

inline constexpr std::size_t kMeasureCount = 3;
inline constexpr std::array<std::string_view, kMeasureCount> kMeasureNames = {"A", "E", "S"};

// Ordered score bins -2..2.
inline constexpr std::size_t kScoreBinCount = 5;
inline constexpr std::array<std::string_view, kScoreBinCount> kScoreBinNames = {
    "-2", "-1", "0", "1", "2"};

inline std::string speaker_name(Speaker s) {
  return s == Speaker::Customer ? "customer" : "helpdesk";
}

inline Speaker parse_speaker(std::string_view s) {
  if (s == "customer") return Speaker::Customer;
  if (s == "helpdesk") return Speaker::Helpdesk;
  throw ParseError("unknown speaker tag: '" + std::string(s) + "'");
}

inline std::size_t nugget_index(std::string_view name) {
  for (std::size_t i = 0; i < kNuggetCount; ++i) {
    if (kNuggetNames[i] == name) return i;
  }
  throw ParseError("unknown nugget label: '" + std::string(name) + "'");
}

inline std::size_t score_bin_index(std::string_view name) {
  for (std::size_t i = 0; i < kScoreBinCount; ++i) {
    if (kScoreBinNames[i] == name) return i;
  }
  throw ParseError("unknown score bin: '" + std::string(name) + "'");
}

inline Measure parse_measure(std::string_view name) {
  for (std::size_t i = 0; i < kMeasureCount; ++i) {
    if (kMeasureNames[i] == name) return static_cast<Measure>(i);
  }
  throw ParseError("unknown quality measure: '" + std::string(name) + "'");
}

}  // namespace nb
