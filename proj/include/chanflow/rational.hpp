// Exact rational arithmetic used throughout the dual engine. Tightness checks
// compare for equality, so everything numeric is a Rat; doubles appear only in
// reports.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace chanflow {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat make_rat(long long num, long long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rat(BigInt(num), BigInt(den));
}

// "3/4", "-3/4" or "5"
inline std::string rat_str(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double rat_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(BigInt(s));
  BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
  return Rat(num, den);
}

inline long long bit_length(const BigInt& v) {
  if (v == 0) return 1;
  return static_cast<long long>(boost::multiprecision::msb(abs(v))) + 1;
}

// largest t >= 0 with 2^t <= r; requires r >= 1
inline int floor_log2_ratio(const Rat& r) {
  if (r < 1) throw std::invalid_argument("floor_log2_ratio needs r >= 1");
  int t = 0;
  Rat pow = 2;
  while (pow <= r) {
    pow *= 2;
    ++t;
  }
  return t;
}

// smallest t >= 0 with 2^t >= r; requires r >= 1
inline int ceil_log2_ratio(const Rat& r) {
  if (r < 1) throw std::invalid_argument("ceil_log2_ratio needs r >= 1");
  int t = 0;
  Rat pow = 1;
  while (pow < r) {
    pow *= 2;
    ++t;
  }
  return t;
}

}  // namespace chanflow
