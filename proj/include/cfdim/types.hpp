#ifndef CFDIM_TYPES_HPP
#define CFDIM_TYPES_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfdim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
// 100 decimal digits; used where exact floor/ceil of exp/pow is needed.
using BigFloat = boost::multiprecision::cpp_bin_float_100;

// Partial quotient a_n; always >= 1.
using Digit = BigInt;

// Finite sequence of partial quotients (a_1, ..., a_n).
using Word = std::vector<Digit>;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// p_n/q_n with gcd(p, q) = 1, q >= 1.
struct Convergent {
  BigInt p;
  BigInt q;
  bool operator==(const Convergent&) const = default;
};

// Cylinder interval with exact rational endpoints, 0 <= lo < hi <= 1.
struct Interval {
  Rational lo;
  Rational hi;
  Rational length() const { return hi - lo; }
};

inline void validate_word(const Word& w) {
  for (const Digit& d : w)
    if (d < 1) throw InputError("word digit < 1");
}

inline bool is_nondecreasing(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] < w[i - 1]) return false;
  return true;
}

// Natural log of a positive BigInt, usable far beyond long double range.
long double log_big(const BigInt& v);

std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

// Fixed-format decimal rendering of a long double ("%.15Lg"), used for
// byte-stable JSON output.
std::string real_to_string(long double v);

}  // namespace cfdim

#endif
