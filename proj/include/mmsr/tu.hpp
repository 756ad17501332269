#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mmsr {

// All time quantities (processing times, station lengths, cycle, overloads)
// are stored in tenths of a time unit, so arithmetic is exact at the 0.1 TU
// granularity the instances use.
using tu_t = std::int32_t;
using tu_sum_t = std::int64_t;

constexpr tu_t kTuScale = 10;

// Largest representable load per position; guards the int32 lane arithmetic.
constexpr tu_t kTuMax = 100000000;  // 1e7 TU

tu_t tu_from_double(double v);
double tu_to_double(tu_t v);

// "97.0" style, always one decimal digit.
std::string tu_to_string(tu_t v);
std::optional<tu_t> tu_parse(const std::string& text);

}  // namespace mmsr
