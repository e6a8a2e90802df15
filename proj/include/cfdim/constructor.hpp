#ifndef CFDIM_CONSTRUCTOR_HPP
#define CFDIM_CONSTRUCTOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cfdim/psi.hpp"
#include "cfdim/types.hpp"

namespace cfdim {

// Default cap on the total size of materialized digits.
inline constexpr std::uint64_t kDefaultBitBudget = 1'000'000;

struct ThetaResult {
  long double value;
  // True when psi was non-decreasing on [n, N], so the horizon min
  // equals the true tail infimum; otherwise the value is an upper
  // bound flagged horizon-truncated.
  bool exact;
};

// theta(n) = min_{n <= k <= N} psi(k).
ThetaResult theta(const PsiSpec& spec, std::uint64_t n, std::uint64_t N);

// d_1 = exp(theta(1)), d_n = min{exp(theta(n)), prod_{k<n} d_k^{A-1+eps}},
// kept in log domain.
struct DSequence {
  long double A = 1;
  long double epsilon = 0;
  std::vector<long double> theta_vals;  // theta(1..N)
  std::vector<long double> log_d;       // log d_1 .. log d_N
  std::vector<bool> product_branch;     // which side of the min was taken

  bool monotone_from_2 = true;          // d_{n+1} >= d_n for n >= 2
  long double wan3_tail_max = 0;        // max tail log d_{n+2} / sum log d
  Trend dnlogn_trend;                   // log d_n / log n
  Trend cn_trend;                       // log d_n / psi(n)
};

DSequence d_sequence(const PsiSpec& spec, long double A, long double epsilon,
                     std::uint64_t N);

// Sequences {t_n} feeding the nt_n <= a_n < (n+1)t_n construction.
struct TSequence {
  enum class Rule { PowerAlpha, FromD, FromPsi, Explicit };
  Rule rule;
  std::string describe;
  std::vector<long double> log_t;  // log t_1 .. log t_N, always present
  std::vector<BigInt> t;           // exact values; empty past the bit budget
  bool exact() const { return t.size() == log_t.size(); }

  // t_n = 2 floor(n^{alpha-1})
  static TSequence power_alpha(long double alpha, std::uint64_t N,
                               std::uint64_t bit_budget = kDefaultBitBudget);
  // t_n = 2 d_{n+1} (rounded up to an integer)
  static TSequence from_d(const PsiSpec& spec, long double A, long double eps,
                          std::uint64_t N, std::uint64_t bit_budget = kDefaultBitBudget);
  // t_n = floor(exp(psi(n) + 1))
  static TSequence from_psi(const PsiSpec& spec, std::uint64_t N,
                            std::uint64_t bit_budget = kDefaultBitBudget);
  static TSequence explicit_table(std::vector<BigInt> values);
};

enum class PointRule { Low, Mid, HighAvoid };

// Word with n t_n <= a_n < (n+1) t_n for every n; requires exact t.
Word build_point(const TSequence& t, std::uint64_t N, PointRule rule,
                 std::uint64_t bit_budget = kDefaultBitBudget);

struct XtildeResult {
  Word word;                          // a_n = floor(exp(envelope(n)))
  std::vector<long double> ratios;    // log a_n / psi(n)
};

// Point construction from the running-maximum envelope of psi; rejects
// psi that the diagnostic marks not-equivalent (the target set is
// empty in that case).
XtildeResult build_xtilde(const PsiSpec& spec, std::uint64_t N,
                          std::uint64_t bit_budget = kDefaultBitBudget);

// Non-decreasing word with a_n = ceil(a^{b^n}), the minimal admissible
// digits for the doubly exponential family.
Word build_F_point(long double a, long double b, std::uint64_t N,
                   std::uint64_t bit_budget = kDefaultBitBudget);

struct MembershipStats {
  bool nondecreasing = false;
  std::vector<long double> ratios;  // r_n = log a_n / psi(n)
  long double tail_min = 0, tail_max = 0;  // over [N/2, N]
};

MembershipStats membership_stats(const Word& w, const PsiSpec& spec);

}  // namespace cfdim

#endif
