#include "mmsr/tu.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace mmsr {

tu_t tu_from_double(double v) {
  return static_cast<tu_t>(std::llround(v * kTuScale));
}

double tu_to_double(tu_t v) { return static_cast<double>(v) / kTuScale; }

std::string tu_to_string(tu_t v) {
  char buf[32];
  tu_t whole = v / kTuScale;
  tu_t frac = v % kTuScale;
  if (v < 0) {
    whole = -(-v / kTuScale);
    frac = -v % kTuScale;
    if (whole == 0) {
      std::snprintf(buf, sizeof(buf), "-0.%d", frac);
      return buf;
    }
  }
  std::snprintf(buf, sizeof(buf), "%d.%d", whole, frac < 0 ? -frac : frac);
  return buf;
}

std::optional<tu_t> tu_parse(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* p = text.c_str();
  char* end = nullptr;
  bool neg = *p == '-';
  if (neg) ++p;
  if (*p < '0' || *p > '9') return std::nullopt;
  long long whole = std::strtoll(p, &end, 10);
  long long frac = 0;
  if (*end == '.') {
    const char* f = end + 1;
    if (*f < '0' || *f > '9') return std::nullopt;
    frac = *f - '0';
    ++f;
    // extra fractional digits are not representable at this precision
    if (*f != '\0') return std::nullopt;
    end = const_cast<char*>(f);
  }
  if (*end != '\0') return std::nullopt;
  long long v = whole * kTuScale + frac;
  if (neg) v = -v;
  if (v > kTuMax || v < -kTuMax) return std::nullopt;
  return static_cast<tu_t>(v);
}

}  // namespace mmsr
