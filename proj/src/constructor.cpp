#include "cfdim/constructor.hpp"

#include <algorithm>
#include <cmath>

#include "cfdim/enumeration.hpp"

namespace cfdim {

namespace {

constexpr long double kLog2 = 0.6931471805599453094172321214581766L;

// Largest exponent x for which floor(exp(x)) is still exact at
// BigFloat's 100 decimal digits.
constexpr long double kExactExpLimit = 230.0L;

BigInt floor_exp_exact(long double x, std::uint64_t bit_budget) {
  if (x < 0) throw DomainError("floor_exp_exact: negative exponent");
  if (x > kExactExpLimit || x > static_cast<long double>(bit_budget) * kLog2)
    throw BudgetError("digit too large for exact materialization");
  BigFloat v = exp(BigFloat(x));
  return static_cast<BigInt>(floor(v));
}

std::uint64_t bit_size(const BigInt& v) {
  return v == 0 ? 1 : boost::multiprecision::msb(v) + 1;
}

}  // namespace

ThetaResult theta(const PsiSpec& spec, std::uint64_t n, std::uint64_t N) {
  if (n < 1 || N < n) throw InputError("theta: need 1 <= n <= N");
  long double best = HUGE_VALL;
  bool monotone = true;
  long double prev = -HUGE_VALL;
  for (std::uint64_t k = n; k <= N; ++k) {
    const long double v = eval_psi(spec, k);
    if (v < prev) monotone = false;
    prev = v;
    best = std::min(best, v);
  }
  return {best, monotone};
}

DSequence d_sequence(const PsiSpec& spec, long double A, long double epsilon,
                     std::uint64_t N) {
  if (A < 1) throw InputError("d_sequence: A >= 1");
  if (epsilon <= 0) throw InputError("d_sequence: epsilon > 0");
  if (N < 3) throw InputError("d_sequence: N >= 3");

  DSequence d;
  d.A = A;
  d.epsilon = epsilon;
  d.theta_vals.resize(N);
  // Suffix minimum in one backward pass.
  d.theta_vals[N - 1] = eval_psi(spec, N);
  for (std::uint64_t n = N - 1; n >= 1; --n)
    d.theta_vals[n - 1] = std::min(eval_psi(spec, n), d.theta_vals[n]);

  d.log_d.resize(N);
  d.product_branch.assign(N, false);
  d.log_d[0] = d.theta_vals[0];
  long double sum = d.log_d[0];
  for (std::uint64_t n = 2; n <= N; ++n) {
    const long double prod = (A - 1 + epsilon) * sum;
    if (prod < d.theta_vals[n - 1]) {
      d.log_d[n - 1] = prod;
      d.product_branch[n - 1] = true;
    } else {
      d.log_d[n - 1] = d.theta_vals[n - 1];
    }
    sum += d.log_d[n - 1];
  }

  for (std::uint64_t n = 2; n + 1 <= N; ++n)
    if (d.log_d[n] < d.log_d[n - 1]) d.monotone_from_2 = false;

  // Ratios log d_{n+2} / (log d_2 + ... + log d_{n+1}) for n >= 2.
  {
    std::vector<long double> ratio(N + 1, 0);
    long double s2 = 0;
    for (std::uint64_t m = 2; m <= N; ++m) {
      s2 += d.log_d[m - 1];
      // m = n + 1 here, so the ratio indexed by n = m - 1 uses d_{m+1}.
      const std::uint64_t n = m - 1;
      if (n >= 2 && m + 1 <= N && s2 > 0) ratio[n] = d.log_d[m] / s2;
    }
    long double tail = 0;
    for (std::uint64_t n = std::max<std::uint64_t>(2, N / 2); n + 2 <= N; ++n)
      tail = std::max(tail, ratio[n]);
    d.wan3_tail_max = tail;
  }

  auto window_min_over_logn = [&](std::uint64_t h) {
    long double best = HUGE_VALL;
    for (std::uint64_t n = std::max<std::uint64_t>(2, h / 2); n <= h; ++n)
      best = std::min(best, d.log_d[n - 1] / std::log(static_cast<long double>(n)));
    return best;
  };
  auto window_max_over_psi = [&](std::uint64_t h) {
    long double best = -HUGE_VALL;
    for (std::uint64_t n = std::max<std::uint64_t>(2, h / 2); n <= h; ++n) {
      const long double p = eval_psi(spec, n);
      if (p > 0) best = std::max(best, d.log_d[n - 1] / p);
    }
    return best;
  };
  d.dnlogn_trend = {window_min_over_logn(std::max<std::uint64_t>(4, N / 4)),
                    window_min_over_logn(std::max<std::uint64_t>(4, N / 2)),
                    window_min_over_logn(N)};
  d.cn_trend = {window_max_over_psi(std::max<std::uint64_t>(4, N / 4)),
                window_max_over_psi(std::max<std::uint64_t>(4, N / 2)),
                window_max_over_psi(N)};
  return d;
}

TSequence TSequence::power_alpha(long double alpha, std::uint64_t N,
                                 std::uint64_t bit_budget) {
  if (alpha < 1) throw InputError("power_alpha: alpha >= 1 so that t_n >= 2");
  TSequence t;
  t.rule = Rule::PowerAlpha;
  t.describe = "t_n = 2 floor(n^" + real_to_string(alpha - 1) + ")";
  t.log_t.reserve(N);
  std::uint64_t bits = 0;
  bool exact = true;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const long double e = (alpha - 1) * std::log(static_cast<long double>(n));
    if (exact && e < 62 * kLog2) {
      BigInt v = 2 * BigInt(ipow_floor(n, alpha - 1));
      bits += bit_size(v);
      if (bits > bit_budget) {
        exact = false;
      } else {
        t.log_t.push_back(log_big(v));
        t.t.push_back(std::move(v));
        continue;
      }
    } else {
      exact = false;
    }
    t.log_t.push_back(kLog2 + e);  // log of the un-floored value
  }
  return t;
}

TSequence TSequence::from_d(const PsiSpec& spec, long double A, long double eps,
                            std::uint64_t N, std::uint64_t bit_budget) {
  const DSequence d = d_sequence(spec, A, eps, N + 1);
  TSequence t;
  t.rule = Rule::FromD;
  t.describe = "t_n = 2 d_{n+1}";
  std::uint64_t bits = 0;
  bool exact = true;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const long double ld = d.log_d[n];  // log d_{n+1}
    if (exact) {
      try {
        BigInt base = floor_exp_exact(ld, bit_budget);
        if (exp(BigFloat(ld)) > BigFloat(base)) ++base;  // ceil
        BigInt v = 2 * base;
        bits += bit_size(v);
        if (bits > bit_budget) throw BudgetError("bit budget");
        t.log_t.push_back(log_big(v));
        t.t.push_back(std::move(v));
        continue;
      } catch (const BudgetError&) {
        exact = false;
      }
    }
    t.log_t.push_back(kLog2 + ld);
  }
  // The d recursion makes {d_n} non-decreasing from n = 2, so t must be
  // non-decreasing throughout.
  for (std::size_t i = 1; i < t.log_t.size(); ++i)
    if (t.log_t[i] < t.log_t[i - 1] - 1e-12L)
      throw DomainError("from_d produced a decreasing t sequence");
  return t;
}

TSequence TSequence::from_psi(const PsiSpec& spec, std::uint64_t N,
                              std::uint64_t bit_budget) {
  TSequence t;
  t.rule = Rule::FromPsi;
  t.describe = "t_n = floor(exp(psi(n)+1))";
  std::uint64_t bits = 0;
  bool exact = true;
  bool psi_monotone = true;
  long double prev = -HUGE_VALL;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const long double p = eval_psi(spec, n);
    if (p < prev) psi_monotone = false;
    prev = p;
    if (exact) {
      try {
        BigInt v = floor_exp_exact(p + 1, bit_budget);
        if (v < 2) v = 2;  // psi >= 0 gives exp(psi+1) >= e, so only paranoia
        bits += bit_size(v);
        if (bits > bit_budget) throw BudgetError("bit budget");
        t.log_t.push_back(log_big(v));
        t.t.push_back(std::move(v));
        continue;
      } catch (const BudgetError&) {
        exact = false;
      }
    }
    t.log_t.push_back(p + 1);
  }
  if (psi_monotone) {
    for (std::size_t i = 1; i < t.log_t.size(); ++i)
      if (t.log_t[i] < t.log_t[i - 1] - 1e-12L)
        throw DomainError("from_psi: non-decreasing psi must give non-decreasing t");
  }
  return t;
}

TSequence TSequence::explicit_table(std::vector<BigInt> values) {
  TSequence t;
  t.rule = Rule::Explicit;
  t.describe = "explicit table";
  for (const BigInt& v : values) {
    if (v < 2) throw InputError("explicit t sequence requires t_n >= 2");
    t.log_t.push_back(log_big(v));
  }
  t.t = std::move(values);
  return t;
}

Word build_point(const TSequence& t, std::uint64_t N, PointRule rule,
                 std::uint64_t bit_budget) {
  if (t.t.size() < N)
    throw BudgetError("build_point: t sequence not exactly materialized to N");
  Word w;
  w.reserve(N);
  std::uint64_t bits = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const BigInt& tn = t.t[n - 1];
    BigInt a;
    switch (rule) {
      case PointRule::Low: a = BigInt(n) * tn; break;
      case PointRule::Mid: a = BigInt(n) * tn + tn / 2; break;
      case PointRule::HighAvoid: a = BigInt(n + 1) * tn - 1; break;
    }
    bits += bit_size(a);
    if (bits > bit_budget) throw BudgetError("build_point: digit bit budget exceeded");
    // Constructive postcondition, checked exactly.
    if (!(BigInt(n) * tn <= a && a < BigInt(n + 1) * tn))
      throw DomainError("build_point: membership inequality violated");
    w.push_back(std::move(a));
  }
  return w;
}

XtildeResult build_xtilde(const PsiSpec& spec, std::uint64_t N,
                          std::uint64_t bit_budget) {
  if (N < 1) throw InputError("build_xtilde: N >= 1");
  const std::uint64_t diag_N =
      spec.kind == PsiSpec::Kind::Table
          ? std::min<std::uint64_t>(std::max<std::uint64_t>(1, N), spec.table.size())
          : std::max<std::uint64_t>(16, N);
  // Tables shorter than the diagnostic's minimum window give no verdict
  // either way; proceed as inconclusive.
  if (diag_N >= 16 &&
      equivalence_diagnostic(spec, diag_N) == EquivalenceVerdict::NotEquivalent)
    throw DomainError(
        "build_xtilde: psi is not equivalent to a non-decreasing function; "
        "the target set is empty");
  XtildeResult out;
  std::uint64_t bits = 0;
  long double envelope = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const long double p = eval_psi(spec, n);
    envelope = std::max(envelope, p);
    BigInt a = floor_exp_exact(envelope, bit_budget);
    if (a < 1) a = 1;
    bits += bit_size(a);
    if (bits > bit_budget) throw BudgetError("build_xtilde: digit bit budget exceeded");
    out.ratios.push_back(p > 0 ? log_big(a) / p : HUGE_VALL);
    out.word.push_back(std::move(a));
  }
  return out;
}

Word build_F_point(long double a, long double b, std::uint64_t N,
                   std::uint64_t bit_budget) {
  if (!(a > 1) || !(b > 1)) throw InputError("build_F_point: need a > 1 and b > 1");
  Word w;
  std::uint64_t bits = 0;
  const BigFloat la = log(BigFloat(a));
  for (std::uint64_t n = 1; n <= N; ++n) {
    const BigFloat bn = pow(BigFloat(b), static_cast<int>(n));
    const long double e = static_cast<long double>(bn * la);
    if (e > kExactExpLimit || e > static_cast<long double>(bit_budget) * kLog2)
      throw BudgetError("build_F_point: digit bit budget exceeded");
    const BigFloat target = exp(bn * la);  // a^{b^n}
    BigInt d = static_cast<BigInt>(ceil(target));
    if (BigFloat(d) < target) ++d;
    bits += bit_size(d);
    if (bits > bit_budget) throw BudgetError("build_F_point: digit bit budget exceeded");
    w.push_back(std::move(d));
  }
  if (!is_nondecreasing(w))
    throw DomainError("build_F_point: digits must be non-decreasing");
  return w;
}

MembershipStats membership_stats(const Word& w, const PsiSpec& spec) {
  MembershipStats s;
  s.nondecreasing = is_nondecreasing(w);
  const std::uint64_t N = w.size();
  s.tail_min = HUGE_VALL;
  s.tail_max = -HUGE_VALL;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const long double p = eval_psi(spec, n);
    const long double r = p > 0 ? log_big(w[n - 1]) / p : HUGE_VALL;
    s.ratios.push_back(r);
    if (n >= std::max<std::uint64_t>(1, N / 2)) {
      s.tail_min = std::min(s.tail_min, r);
      s.tail_max = std::max(s.tail_max, r);
    }
  }
  return s;
}

}  // namespace cfdim
