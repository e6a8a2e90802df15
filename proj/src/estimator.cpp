#include "cfdim/estimator.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cfdim {

namespace {

constexpr long double kLogPhi = 0.4812118250596034474977589134243684231352L;  // log((1+sqrt5)/2)
constexpr long double kLog20 = 2.9957322735539909934352235761425407756766L;

// Streaming log-sum-exp with Kahan compensation on the linear part.
struct LogSum {
  bool empty = true;
  long double max_log = 0;
  long double sum = 0;
  long double comp = 0;

  void add_linear(long double v) {
    const long double y = v - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  void add(long double x) {
    if (empty) {
      empty = false;
      max_log = x;
      sum = 1;
      comp = 0;
      return;
    }
    if (x <= max_log) {
      add_linear(std::exp(x - max_log));
    } else {
      // Rescale to the new maximum (compensation restarts).
      sum = sum * std::exp(max_log - x) + 1;
      comp = 0;
      max_log = x;
    }
  }
  void merge(const LogSum& o) {
    if (o.empty) return;
    if (empty) {
      *this = o;
      return;
    }
    if (o.max_log <= max_log) {
      add_linear(o.sum * std::exp(o.max_log - max_log));
    } else {
      sum = sum * std::exp(max_log - o.max_log) + o.sum;
      comp = 0;
      max_log = o.max_log;
    }
  }
  long double value() const { return empty ? -HUGE_VALL : max_log + std::log(sum); }
};

struct Partial {
  LogSum acc;
  std::uint64_t words = 0;
  Rational total = 0;
  bool budget_hit = false;
};

// DFS over the family subtree rooted at first digit `first`, carrying
// the convergent denominators along the path.
void subtree_sum(const FamilySpec& f, std::uint64_t k, long double s,
                 std::uint64_t first, bool want_rational, std::uint64_t budget,
                 Partial& out) {
  std::vector<std::uint64_t> w(k);
  std::vector<BigInt> q(k + 1), q_prev(k + 1);
  q_prev[0] = 0;
  q[0] = 1;  // (q_{-1}, q_0)
  const bool bounded = f.kind == FamilySpec::Kind::Bounded;
  const std::uint64_t ceiling = bounded ? 0 : f.digit_ceiling(k);

  // next admissible digit at position j (1-based) strictly after v, or 0
  std::uint64_t depth = 0;
  auto first_digit_at = [&](std::uint64_t j, std::uint64_t prev) -> std::uint64_t {
    if (bounded) return f.digits.front();
    return std::max(prev, f.digit_floor(j));
  };
  auto advance = [&](std::uint64_t j, std::uint64_t v) -> std::uint64_t {
    if (bounded) {
      auto it = std::upper_bound(f.digits.begin(), f.digits.end(), v);
      return it == f.digits.end() ? 0 : *it;
    }
    return v < ceiling ? v + 1 : 0;
  };

  // Seed with the fixed first digit.
  w[0] = first;
  q_prev[1] = q[0];
  q[1] = BigInt(first) * q[0] + q_prev[0];
  depth = 1;

  while (depth > 0) {
    if (depth == k) {
      if (++out.words > budget) {
        out.budget_hit = true;
        return;
      }
      const BigInt& qn = q[k];
      const BigInt denom2 = qn + q_prev[k];
      out.acc.add(-s * (log_big(qn) + log_big(denom2)));
      if (want_rational) out.total += Rational(1, qn * denom2);
      // Backtrack to the deepest position that can still advance.
      while (depth > 1) {
        const std::uint64_t nxt = advance(depth, w[depth - 1]);
        if (nxt != 0 && (bounded || nxt >= first_digit_at(depth, w[depth - 2]))) {
          w[depth - 1] = nxt;
          q_prev[depth] = q[depth - 1];
          q[depth] = BigInt(nxt) * q[depth - 1] + q_prev[depth - 1];
          break;
        }
        --depth;
      }
      if (depth == 1) return;  // first digit is fixed in this subtree
      continue;
    }
    // Descend.
    const std::uint64_t j = depth + 1;
    const std::uint64_t v = first_digit_at(j, w[depth - 1]);
    if (v == 0 || (!bounded && v > ceiling)) {
      // No admissible digit below this prefix; backtrack.
      while (depth > 1) {
        const std::uint64_t nxt = advance(depth, w[depth - 1]);
        if (nxt != 0) {
          w[depth - 1] = nxt;
          q_prev[depth] = q[depth - 1];
          q[depth] = BigInt(nxt) * q[depth - 1] + q_prev[depth - 1];
          break;
        }
        --depth;
      }
      if (depth == 1) return;
      continue;
    }
    w[depth] = v;
    q_prev[j] = q[j - 1];
    q[j] = BigInt(v) * q[j - 1] + q_prev[j - 1];
    ++depth;
  }
}

std::vector<std::uint64_t> first_digits(const FamilySpec& f, std::uint64_t k) {
  if (f.kind == FamilySpec::Kind::Bounded) return f.digits;
  std::vector<std::uint64_t> out;
  const std::uint64_t ceiling = f.digit_ceiling(k);
  for (std::uint64_t v = f.digit_floor(1); v <= ceiling; ++v) out.push_back(v);
  return out;
}

std::uint64_t resolve_depth(const FamilySpec& f, std::uint64_t k) {
  const auto own = f.word_length();
  if (own && *own != k)
    throw InputError("cover depth disagrees with the family's word length");
  if (k < 1) throw InputError("cover depth must be >= 1");
  return k;
}

long double bound_product_log_sum(const FamilySpec& f, std::uint64_t k, long double s) {
  long double log_count = 0, log_maxlen = 0;
  switch (f.kind) {
    case FamilySpec::Kind::A:
      log_count = log_bound_A_k(k, f.alpha2, f.eps);
      // |I_k| <= (prod a_j)^{-2} <= (k!)^{-2(alpha1-eps)}
      log_maxlen = -2 * (f.alpha1 - f.eps) * std::lgamma(static_cast<long double>(k) + 1);
      break;
    case FamilySpec::Kind::C:
      log_count = log_bound_C_k(k, f.alpha, f.eps);
      log_maxlen = kLog20 - 2 * static_cast<long double>(k) * kLogPhi;
      break;
    case FamilySpec::Kind::D: {
      const BigInt c = count_D(f.ell, k);
      log_count = log_big(c);
      log_maxlen = kLog20 - 2 * static_cast<long double>(k) * kLogPhi;
      break;
    }
    case FamilySpec::Kind::Bounded:
      log_count = static_cast<long double>(k) *
                  std::log(static_cast<long double>(f.digits.size()));
      log_maxlen = kLog20 - 2 * static_cast<long double>(k) * kLogPhi;
      break;
  }
  return log_count + s * log_maxlen;
}

CoverSumResult run_cover_sum(const FamilySpec& family, std::uint64_t k, long double s,
                             CoverMode mode, std::uint64_t budget, bool parallel) {
  if (!(s > 0 && s <= 1)) throw InputError("cover_sum: s must lie in (0, 1]");
  resolve_depth(family, k);
  CoverSumResult res;
  res.family = family;
  res.depth = k;
  res.exponent = s;
  res.mode = mode;
  if (mode == CoverMode::BoundProduct) {
    res.log_sum = bound_product_log_sum(family, k, s);
    return res;
  }

  const bool want_rational = s == 1.0L;
  const auto firsts = first_digits(family, k);
  if (firsts.empty()) throw InputError("cover_sum: empty family");
  std::vector<Partial> partials(firsts.size());

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < firsts.size(); ++i)
      subtree_sum(family, k, s, firsts[i], want_rational, budget, partials[i]);
  } else {
    for (std::size_t i = 0; i < firsts.size(); ++i)
      subtree_sum(family, k, s, firsts[i], want_rational, budget, partials[i]);
  }

  // Deterministic combine, ascending first digit.
  LogSum acc;
  Rational total = 0;
  std::uint64_t words = 0;
  for (const Partial& p : partials) {
    if (p.budget_hit) throw BudgetError("cover_sum: word budget exceeded");
    acc.merge(p.acc);
    total += p.total;
    words += p.words;
  }
  if (words > budget) throw BudgetError("cover_sum: word budget exceeded");
  res.log_sum = acc.value();
  res.words = words;
  if (want_rational) res.exact_total_length = total;
  return res;
}

}  // namespace

CoverSumResult cover_sum_serial(const FamilySpec& family, std::uint64_t k,
                                long double s, CoverMode mode,
                                std::uint64_t budget_words) {
  return run_cover_sum(family, k, s, mode, budget_words, false);
}

CoverSumResult cover_sum(const FamilySpec& family, std::uint64_t k, long double s,
                         CoverMode mode, std::uint64_t budget_words) {
  return run_cover_sum(family, k, s, mode, budget_words, true);
}

CriticalExponent critical_exponent(const FamilySpec& family, std::uint64_t k,
                                   long double tol, CoverMode mode,
                                   std::uint64_t budget_words) {
  if (!(tol > 0 && tol < 1)) throw InputError("critical_exponent: tol in (0,1)");
  CriticalExponent ce;
  ce.family = family;
  ce.depth = k;

  auto f = [&](long double s) {
    return cover_sum(family, k, s, mode, budget_words).log_sum;
  };
  const long double f_lo = f(tol);
  const long double f_hi = f(1.0L);
  if (!(f_lo > 0)) {
    ce.bracket_failed = true;
    ce.note = "sum below 1 for all s in (0,1]: family too thin at this depth";
    return ce;
  }
  if (!(f_hi < 0)) {
    ce.bracket_failed = true;
    ce.note = "sum still above 1 at s = 1";
    return ce;
  }
  long double lo = tol, hi = 1.0L;
  unsigned it = 0;
  while (hi - lo > tol && it < 200) {
    const long double mid = (lo + hi) / 2;
    if (f(mid) > 0) lo = mid;
    else hi = mid;
    ++it;
  }
  ce.s_lo = lo;
  ce.s_hi = hi;
  ce.s_star = (lo + hi) / 2;
  ce.iterations = it;
  return ce;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Tail-max statistic for one sample; keeps drawing until an expansion
// with at least N quotients appears.
long double one_sample(std::uint64_t seed, std::uint64_t index, std::uint64_t N,
                       std::uint64_t& resampled) {
  std::uint64_t state = seed + 0xA24BAED4963EE407ULL * (index + 1);
  const std::uint64_t bits = 4 * N;
  const std::uint64_t limbs = (bits + 63) / 64;
  for (;;) {
    BigInt p = 0;
    for (std::uint64_t i = 0; i < limbs; ++i) {
      p <<= 64;
      p |= splitmix64(state);
    }
    const std::uint64_t excess = limbs * 64 - bits;
    p >>= excess;
    if (p == 0) {
      ++resampled;
      continue;
    }
    // Euclid on (2^bits, p): quotient stream = partial quotients of p/2^bits.
    BigInt den = BigInt(1) << static_cast<unsigned>(bits);
    BigInt num = p;
    std::vector<long double> log_digits;
    log_digits.reserve(N);
    while (num != 0 && log_digits.size() < N) {
      BigInt a = den / num;
      BigInt r = den % num;
      den = std::move(num);
      num = std::move(r);
      log_digits.push_back(log_big(a));
    }
    if (log_digits.size() < N) {
      ++resampled;
      continue;
    }
    long double best = -HUGE_VALL;
    for (std::uint64_t n = N / 2; n <= N; ++n)
      best = std::max(best, log_digits[n - 1] / std::log(static_cast<long double>(n)));
    return best;
  }
}

}  // namespace

McGrowthStats mc_growth_law(std::uint64_t samples, std::uint64_t N,
                            std::uint64_t seed, bool parallel) {
  if (samples < 1) throw InputError("mc_growth_law: samples >= 1");
  if (N < 100) throw InputError("mc_growth_law: N >= 100");
  McGrowthStats st;
  st.samples = samples;
  st.horizon = N;
  st.seed = seed;
  st.per_sample.resize(samples);
  std::uint64_t resampled = 0;

  if (parallel) {
#pragma omp parallel for schedule(dynamic) reduction(+ : resampled)
    for (std::uint64_t i = 0; i < samples; ++i) {
      std::uint64_t local = 0;
      st.per_sample[i] = one_sample(seed, i, N, local);
      resampled += local;
    }
  } else {
    for (std::uint64_t i = 0; i < samples; ++i)
      st.per_sample[i] = one_sample(seed, i, N, resampled);
  }
  st.resampled = resampled;

  std::vector<long double> sorted = st.per_sample;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](long double q) {
    const auto idx = static_cast<std::size_t>(q * static_cast<long double>(samples - 1) + 0.5L);
    return sorted[std::min(idx, sorted.size() - 1)];
  };
  st.q10 = quantile(0.10L);
  st.q25 = quantile(0.25L);
  st.median = quantile(0.50L);
  st.q75 = quantile(0.75L);
  st.q90 = quantile(0.90L);
  return st;
}

}  // namespace cfdim
