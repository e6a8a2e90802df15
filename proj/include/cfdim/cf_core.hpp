#ifndef CFDIM_CF_CORE_HPP
#define CFDIM_CF_CORE_HPP

#include <vector>

#include "cfdim/types.hpp"

namespace cfdim {

// Convergents (p_1,q_1), ..., (p_n,q_n) from
//   p_k = a_k p_{k-1} + p_{k-2},  q_k = a_k q_{k-1} + q_{k-2}
// with p_{-1}=1, p_0=0, q_{-1}=0, q_0=1.
std::vector<Convergent> convergents(const Word& w);

// Exact value of the finite continued fraction [a_1, ..., a_n].
Rational evaluate(const Word& w);

// Canonical expansion of a rational in (0,1) by the exact Gauss map,
// truncated to max_n digits.  Canonical form: the last digit is >= 2
// whenever the length is >= 2 (x = 1/k expands to [k]).
Word expand(const Rational& x, std::size_t max_n = SIZE_MAX);

// Cylinder I_n(a_1,...,a_n): endpoints p_n/q_n and
// (p_n+p_{n-1})/(q_n+q_{n-1}), length exactly 1/(q_n(q_n+q_{n-1})).
Interval cylinder(const Word& w);

struct BoundsReport {
  bool golden_lower;    // q_n >= phi^n / (2 sqrt 5)
  bool length_phi;      // |I_n| <= 1/q_n^2 <= 20 phi^{-2n}
  bool length_product;  // (2^n prod a_k)^{-2} <= |I_n| <= (prod a_k)^{-2}
  bool all() const { return golden_lower && length_phi && length_product; }
};

// Exact verification of the cylinder-length inequalities.  phi-power
// comparisons go through Lucas/Fibonacci integers, never floats:
//   phi^n = (L_n + F_n sqrt 5)/2.
BoundsReport verify_bounds(const Word& w);

// F_0 = 0, F_1 = 1; L_0 = 2, L_1 = 1.
BigInt fibonacci(unsigned n);
BigInt lucas(unsigned n);

}  // namespace cfdim

#endif
