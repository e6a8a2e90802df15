#ifndef CFDIM_ESTIMATOR_HPP
#define CFDIM_ESTIMATOR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfdim/enumeration.hpp"
#include "cfdim/types.hpp"

namespace cfdim {

enum class CoverMode { ExactEnumeration, BoundProduct };

struct CoverSumResult {
  FamilySpec family;
  std::uint64_t depth = 0;
  long double exponent = 0;
  long double log_sum = 0;  // log of sum over the family of |I_k|^s
  CoverMode mode = CoverMode::ExactEnumeration;
  std::uint64_t words = 0;  // words visited (exact mode)
  // Exact rational total length, filled in exact mode at s = 1 only.
  std::optional<Rational> exact_total_length;
};

// Serial reference: streams the family depth-first, computing each
// cylinder length exactly and accumulating sum |I_k|^s in log domain
// with compensated summation.
CoverSumResult cover_sum_serial(const FamilySpec& family, std::uint64_t k,
                                long double s,
                                CoverMode mode = CoverMode::ExactEnumeration,
                                std::uint64_t budget_words = 10'000'000);

// OpenMP kernel: partitions the family by first digit; partial sums are
// combined in ascending digit order, so results are run-to-run
// deterministic for any thread count.
CoverSumResult cover_sum(const FamilySpec& family, std::uint64_t k, long double s,
                         CoverMode mode = CoverMode::ExactEnumeration,
                         std::uint64_t budget_words = 10'000'000);

struct CriticalExponent {
  FamilySpec family;
  std::uint64_t depth = 0;
  long double s_star = 0;
  long double s_lo = 0, s_hi = 0;
  unsigned iterations = 0;
  bool bracket_failed = false;
  std::string note;
};

// Bisection on [tol, 1] for the s where the depth-k cover sum crosses 1.
CriticalExponent critical_exponent(const FamilySpec& family, std::uint64_t k,
                                   long double tol,
                                   CoverMode mode = CoverMode::ExactEnumeration,
                                   std::uint64_t budget_words = 10'000'000);

struct McGrowthStats {
  std::uint64_t samples = 0;
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  std::uint64_t resampled = 0;  // expansions discarded for being too short
  long double median = 0;
  long double q10 = 0, q25 = 0, q75 = 0, q90 = 0;
  std::vector<long double> per_sample;  // tail-max statistics, sample order
};

// Monte Carlo illustration of the a.e. growth law: draws exact dyadic
// rationals with denominator 2^{4N}, expands to N quotients and reports
// the tail statistic max_{N/2<=n<=N} log a_n / log n.  Parallel over
// samples with per-sample derived seeds; the statistic converges only
// slowly to its almost-sure limit 1.
McGrowthStats mc_growth_law(std::uint64_t samples, std::uint64_t N,
                            std::uint64_t seed, bool parallel = true);

// SplitMix64 step; the per-sample PRNG for mc_growth_law.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace cfdim

#endif
