#include "cfdim/cf_core.hpp"

#include <utility>

namespace cfdim {

std::vector<Convergent> convergents(const Word& w) {
  if (w.empty()) throw InputError("convergents: empty word");
  validate_word(w);
  std::vector<Convergent> out;
  out.reserve(w.size());
  BigInt p_prev = 1, p = 0;  // p_{-1}, p_0
  BigInt q_prev = 0, q = 1;  // q_{-1}, q_0
  for (const Digit& a : w) {
    BigInt pn = a * p + p_prev;
    BigInt qn = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(pn);
    q = std::move(qn);
    out.push_back({p, q});
  }
  return out;
}

Rational evaluate(const Word& w) {
  const auto cs = convergents(w);
  return Rational(cs.back().p, cs.back().q);
}

Word expand(const Rational& x, std::size_t max_n) {
  if (x <= 0 || x >= 1) throw InputError("expand: x must lie in (0,1)");
  // Gauss map on p/q is Euclid's algorithm on (q, p); the quotient
  // sequence it produces is already canonical (final digit >= 2 for
  // length >= 2).
  BigInt num = numerator(x), den = denominator(x);
  Word w;
  while (num != 0 && w.size() < max_n) {
    BigInt a = den / num;
    BigInt r = den % num;
    den = std::move(num);
    num = std::move(r);
    w.push_back(std::move(a));
  }
  return w;
}

Interval cylinder(const Word& w) {
  const auto cs = convergents(w);
  const BigInt& pn = cs.back().p;
  const BigInt& qn = cs.back().q;
  BigInt pm = 0, qm = 1;  // p_{n-1}, q_{n-1}
  if (cs.size() >= 2) {
    pm = cs[cs.size() - 2].p;
    qm = cs[cs.size() - 2].q;
  }
  Rational a(pn, qn);
  Rational b(pn + pm, qn + qm);
  if (a < b) return {std::move(a), std::move(b)};
  return {std::move(b), std::move(a)};
}

BigInt fibonacci(unsigned n) {
  BigInt a = 0, b = 1;
  for (unsigned i = 0; i < n; ++i) {
    BigInt c = a + b;
    a = std::move(b);
    b = std::move(c);
  }
  return a;
}

BigInt lucas(unsigned n) {
  BigInt a = 2, b = 1;
  for (unsigned i = 0; i < n; ++i) {
    BigInt c = a + b;
    a = std::move(b);
    b = std::move(c);
  }
  return a;
}

BoundsReport verify_bounds(const Word& w) {
  const auto cs = convergents(w);
  const unsigned n = static_cast<unsigned>(w.size());
  const BigInt& qn = cs.back().q;

  BoundsReport rep{};
  const Rational len = cylinder(w).length();

  // (a) q_n >= phi^n / (2 sqrt 5), i.e. sqrt5 * (4 q_n - F_n) >= L_n.
  // 4 q_n > F_n always (q_n >= F_{n+1} > F_n / 4), so squaring is valid.
  {
    const BigInt lhs = 4 * qn - fibonacci(n);
    rep.golden_lower = lhs > 0 && 5 * lhs * lhs >= lucas(n) * lucas(n);
  }

  // (b) |I_n| <= 1/q_n^2 <= 20 phi^{-2n}.
  // Second part: phi^{2n} <= 20 q_n^2, with phi^{2n} = (L_2n + F_2n sqrt5)/2,
  // i.e. sqrt5 * F_2n <= 40 q_n^2 - L_2n.
  {
    const bool first = len <= Rational(1, qn * qn);
    const BigInt rhs = 40 * qn * qn - lucas(2 * n);
    const BigInt f2n = fibonacci(2 * n);
    const bool second = rhs >= 0 && 5 * f2n * f2n <= rhs * rhs;
    rep.length_phi = first && second;
  }

  // (c) (2^n prod a_k)^{-2} <= |I_n| <= (prod a_k)^{-2}.
  {
    BigInt prod = 1;
    for (const Digit& a : w) prod *= a;
    const BigInt two_n_prod = (BigInt(1) << n) * prod;
    rep.length_product = Rational(1, two_n_prod * two_n_prod) <= len &&
                         len <= Rational(1, prod * prod);
  }
  return rep;
}

}  // namespace cfdim
