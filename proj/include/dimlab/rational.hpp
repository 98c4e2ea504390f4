#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace dimlab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// Exact conversion: every finite double is a dyadic rational.
Rat rat_from_double(double x);

/// Parses "p/q", "p", or (sign-prefixed) digit strings. Throws std::invalid_argument.
Rat parse_rat(const std::string& s);

/// Canonical form: "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& r);

/// r^e for integer e (negative allowed, r != 0 then).
Rat pow_rat(const Rat& r, long e);

Int floor_rat(const Rat& r);
Int ceil_rat(const Rat& r);

/// Largest n >= 0 with n^k <= r. Requires r >= 0, k >= 1.
Int kth_root_floor(const Rat& r, unsigned k);

/// A value of the form coeff * base^(en/ed) with coeff >= 0, base > 0, ed >= 1.
/// The fractional power keeps certificate quantities exactly comparable:
/// two such values compare by raising both sides to lcm(ed_l, ed_r), which
/// turns the comparison into one between plain rationals.
struct Power {
  Rat coeff;
  Rat base;
  long en = 1;
  unsigned long ed = 1;

  static Power plain(const Rat& value) { return Power{value, Rat(1), 1, 1}; }

  double approx() const;
};

/// -1, 0, +1 as lhs <, ==, > rhs. Exact.
int compare_powers(const Power& lhs, const Power& rhs);

inline bool power_lt(const Power& lhs, const Power& rhs) { return compare_powers(lhs, rhs) < 0; }
inline bool power_le(const Power& lhs, const Power& rhs) { return compare_powers(lhs, rhs) <= 0; }

}  // namespace dimlab
