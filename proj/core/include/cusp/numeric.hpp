// Exact arithmetic foundation: arbitrary-precision integers and rationals.
//
// Every quantity in this library is exact. Monodromy matrix entries grow
// exponentially in the boundary length and fixed-point coordinates are
// rationals whose denominators carry geometric meaning (they decide the
// refinement level), so fixed-width integers and floating point are both
// ruled out for the public types.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cusp {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline bool is_integral(const Rat& q) { return den(q) == 1; }

// Floor division with sign handled mathematically (C++ '/' truncates).
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline Int rat_floor(const Rat& q) { return floor_div(num(q), den(q)); }

// Nearest integer, ties toward +infinity: floor(q + 1/2).
inline Int rat_round(const Rat& q) { return rat_floor(q + Rat(1, 2)); }

// Checked narrowing for the triangulation hot path; throws instead of wrapping.
inline std::int64_t to_i64(const Int& v) {
  if (v < std::numeric_limits<std::int64_t>::min() ||
      v > std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error("integer too large for 64-bit fast path");
  return static_cast<std::int64_t>(v);
}

inline Int int_gcd(const Int& a, const Int& b) {
  return boost::multiprecision::gcd(a, b);
}
inline Int int_lcm(const Int& a, const Int& b) {
  return boost::multiprecision::lcm(a, b);
}

// Extended gcd: returns g = gcd(a,b) and x,y with a*x + b*y = g.
struct ExtGcd {
  Int g, x, y;
};
inline ExtGcd ext_gcd(Int a, Int b) {
  Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    Int q = a / b;  // truncated is fine: invariants hold over Z
    Int r = a - q * b;
    a = b;
    b = r;
    Int nx = x0 - q * x1, ny = y0 - q * y1;
    x0 = x1;
    y0 = y1;
    x1 = nx;
    y1 = ny;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  return {a, x0, y0};
}

// Integer square root (floor). Used only to seed exact surd comparisons.
inline Int isqrt(const Int& n) {
  if (n < 0) throw std::domain_error("isqrt of negative");
  return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const Int& n) {
  if (n < 0) return false;
  Int r = isqrt(n);
  return r * r == n;
}

}  // namespace cusp
