#include "cfdim/types.hpp"

#include <cmath>
#include <cstdio>

namespace cfdim {

long double log_big(const BigInt& v) {
  if (v <= 0) throw DomainError("log_big: argument must be positive");
  const unsigned bits = boost::multiprecision::msb(v) + 1;
  if (bits <= 64) {
    return std::log(static_cast<long double>(v.convert_to<std::uint64_t>()));
  }
  // log(v) = log(top 64 bits) + (bits - 64) * log 2
  const BigInt top = v >> (bits - 64);
  return std::log(static_cast<long double>(top.convert_to<std::uint64_t>())) +
         static_cast<long double>(bits - 64) * 0.6931471805599453094172321214581766L;
}

std::string rational_to_string(const Rational& r) {
  std::string s = numerator(r).str();
  s += '/';
  s += denominator(r).str();
  return s;
}

Rational rational_from_string(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    const BigInt num(s.substr(0, slash));
    const BigInt den(s.substr(slash + 1));
    if (den == 0) throw InputError("rational with zero denominator: " + s);
    return Rational(num, den);
  } catch (const std::exception&) {
    throw InputError("malformed rational: " + s);
  }
}

std::string real_to_string(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Lg", v);
  return buf;
}

}  // namespace cfdim
