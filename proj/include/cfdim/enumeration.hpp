#ifndef CFDIM_ENUMERATION_HPP
#define CFDIM_ENUMERATION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cfdim/types.hpp"

namespace cfdim {

// Word families appearing in the covering arguments.
//
//   D(l,n)        non-decreasing, 1 <= a_1 <= ... <= a_n <= l
//   A_k(a1,a2,e)  non-decreasing, a_j >= j^{a1-e} for all j,
//                 a_k <= floor(k^{a2+e})
//   C_k(a,e)      non-decreasing, a_k <= floor(k^{a+e})
//   bounded(D)    digits drawn from a finite set D, no monotonicity
//                 (length supplied separately)
struct FamilySpec {
  enum class Kind { D, A, C, Bounded };
  Kind kind = Kind::D;
  std::uint64_t ell = 0;              // D
  std::optional<std::uint64_t> n;     // D length, or bounded length if given
  std::uint64_t k = 0;                // A, C
  long double alpha1 = 0, alpha2 = 0; // A
  long double alpha = 0;              // C
  long double eps = 0;
  std::vector<std::uint64_t> digits;  // bounded

  // Length of the words the family contains; nullopt when unspecified.
  std::optional<std::uint64_t> word_length() const;

  // Compact CLI form, e.g. "D:l=5,n=5", "A:k=6,alpha1=2,alpha2=2,eps=0.05",
  // "C:k=4,alpha=1,eps=0.2", "bounded:digits=1,2[,n=12]".
  static FamilySpec parse(const std::string& text);
  std::string to_string() const;

  // Membership predicate for a word of the family's length.
  bool contains(const Word& w) const;

  // Inclusive digit bounds at position j (1-based) for a family of
  // length len; monotonicity is handled by the enumerator.
  std::uint64_t digit_floor(std::uint64_t j) const;
  std::uint64_t digit_ceiling(std::uint64_t len) const;
};

// floor(base^e) and the least integer >= base^e, with a small nudge so
// that exact integer powers resolve to themselves (ties round down, as
// floor notation requires).
std::uint64_t ipow_floor(std::uint64_t base, long double e);
std::uint64_t ipow_ceil(std::uint64_t base, long double e);

// #D(l,n) = (n+l-1)! / (n!(l-1)!), exactly.
BigInt count_D(std::uint64_t ell, std::uint64_t n);

// Exact cardinality of any finite family (DP over ending digit).
BigInt count_family(const FamilySpec& f, std::optional<std::uint64_t> len = {});

// Streams every member exactly once in lexicographic order.  Visitor
// returns false to stop early.  Throws BudgetError once more than
// budget_words words have been produced.
void enumerate(const FamilySpec& f, const std::function<bool(const Word&)>& visit,
               std::uint64_t budget_words = 10'000'000,
               std::optional<std::uint64_t> len = {});

// Upper bound 2^k exp((a2+e)k) (k!)^{a2+e-1} on #A_k, as log.
long double log_bound_A_k(std::uint64_t k, long double alpha2, long double eps);

// Upper bound exp(k^{a+e}(log k + 1)) on #C_k, as log.
long double log_bound_C_k(std::uint64_t k, long double alpha, long double eps);

// (sqrt(2 pi) k^{k+1/2} e^{-k}, e k^{k+1/2} e^{-k}) bracketing k!, as logs.
std::pair<long double, long double> log_stirling_bounds(std::uint64_t k);

}  // namespace cfdim

#endif
