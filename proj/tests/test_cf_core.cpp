#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cfdim/cf_core.hpp"

using namespace cfdim;

namespace {

// Independent oracle: evaluate [a_1,...,a_n] by folding from the back,
// x <- 1/(a_k + x).  No convergent recursion involved.
Rational fold_back(const Word& w) {
  Rational x = 0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) x = Rational(1, Rational(*it) + x);
  return x;
}

Word random_word(std::mt19937_64& rng, std::size_t max_n, std::uint64_t max_digit) {
  std::uniform_int_distribution<std::size_t> len(1, max_n);
  std::uniform_int_distribution<std::uint64_t> dig(1, max_digit);
  Word w(len(rng));
  for (Digit& d : w) d = dig(rng);
  return w;
}

}  // namespace

TEST_CASE("convergent recursion on a known word") {
  const Word w = {1, 2, 3};
  const auto cs = convergents(w);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0] == Convergent{1, 1});
  CHECK(cs[1] == Convergent{2, 3});
  CHECK(cs[2] == Convergent{7, 10});
  CHECK(evaluate(w) == Rational(7, 10));
}

TEST_CASE("evaluate agrees with the back-fold oracle") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const Word w = random_word(rng, 20, 1000);
    CHECK(evaluate(w) == fold_back(w));
  }
}

TEST_CASE("convergents are reduced and satisfy the determinant identity") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Word w = random_word(rng, 25, 100000);
    const auto cs = convergents(w);
    BigInt pm1 = 1, qm1 = 0;  // (p_0, q_0) = (0, 1) handled below
    BigInt p0 = 0, q0 = 1;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      CHECK(boost::multiprecision::gcd(cs[k].p, cs[k].q) == 1);
      // q_k p_{k-1} - p_k q_{k-1} = (-1)^k
      const BigInt det = cs[k].q * p0 - cs[k].p * q0;
      CHECK(det == ((k + 1) % 2 == 0 ? 1 : -1));
      p0 = cs[k].p;
      q0 = cs[k].q;
    }
    (void)pm1;
    (void)qm1;
  }
}

TEST_CASE("expand produces the canonical expansion") {
  CHECK(expand(Rational(7, 10)) == Word{1, 2, 3});
  // [2,3,1] evaluates to the same rational as [2,4]; expand is canonical.
  CHECK(expand(evaluate(Word{2, 3, 1})) == Word{2, 4});
  CHECK(expand(Rational(1, 5)) == Word{5});
  CHECK_THROWS_AS(expand(Rational(3, 2)), InputError);
  CHECK_THROWS_AS(expand(Rational(0)), InputError);
}

TEST_CASE("expand round-trips evaluate when the last digit is >= 2") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    Word w = random_word(rng, 15, 50);
    if (w.back() == 1) w.back() = 2;
    CHECK(expand(evaluate(w)) == w);
  }
}

TEST_CASE("truncated expansion is a prefix") {
  const Word w = {3, 1, 4, 1, 5, 9};
  const Rational x = evaluate(w);
  const Word full = expand(x);
  const Word cut = expand(x, 3);
  REQUIRE(cut.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(cut[i] == full[i]);
}

TEST_CASE("cylinder endpoints and exact length") {
  const Interval i1 = cylinder(Word{1});
  CHECK(i1.lo == Rational(1, 2));
  CHECK(i1.hi == Rational(1));
  CHECK(i1.length() == Rational(1, 2));

  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const Word w = random_word(rng, 12, 1000);
    const auto cs = convergents(w);
    const BigInt qn = cs.back().q;
    const BigInt qn1 = cs.size() >= 2 ? cs[cs.size() - 2].q : BigInt(1);
    const Interval iv = cylinder(w);
    CHECK(iv.length() == Rational(1, qn * (qn + qn1)));
    CHECK(iv.lo < iv.hi);
    CHECK(iv.lo >= 0);
    CHECK(iv.hi <= 1);
    // The word's value lies inside its own cylinder.
    const Rational x = evaluate(w);
    CHECK(x >= iv.lo);
    CHECK(x <= iv.hi);
  }
}

TEST_CASE("fibonacci and lucas") {
  CHECK(fibonacci(0) == 0);
  CHECK(fibonacci(1) == 1);
  CHECK(fibonacci(10) == 55);
  CHECK(lucas(0) == 2);
  CHECK(lucas(1) == 1);
  CHECK(lucas(10) == 123);
  // L_n^2 - 5 F_n^2 = 4 (-1)^n
  for (unsigned n = 0; n <= 60; ++n) {
    const BigInt l = lucas(n), f = fibonacci(n);
    CHECK(l * l - 5 * f * f == (n % 2 == 0 ? 4 : -4));
  }
}

TEST_CASE("exact phi-power bounds hold on random words") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 200; ++i) {
    const Word w = random_word(rng, 20, 1000);
    CHECK(verify_bounds(w).all());
  }
}

TEST_CASE("exact phi-power bounds hold on all-ones words") {
  // The all-ones word is the extreme case: q_n = F_{n+1} is as small as
  // a denominator gets, so the golden lower bound is tight here.
  Word w;
  for (int n = 1; n <= 50; ++n) {
    w.push_back(1);
    CHECK(verify_bounds(w).all());
    CHECK(convergents(w).back().q == fibonacci(static_cast<unsigned>(n) + 1));
  }
}
