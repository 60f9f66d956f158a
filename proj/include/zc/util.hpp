#pragma once
// Small shared helpers: compensated summation and deterministic float text.

#include <charconv>
#include <cstdio>
#include <string>

namespace zc::util {

// Kahan compensated accumulator.
struct KahanAcc {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

// Shortest round-trip decimal text for a double; byte-stable across runs.
inline std::string fmt_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace zc::util
