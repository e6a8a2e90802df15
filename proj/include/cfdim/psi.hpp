#ifndef CFDIM_PSI_HPP
#define CFDIM_PSI_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cfdim/types.hpp"

namespace cfdim {

// Expression AST over the variable n: +, -, *, /, ^ and log, exp,
// sqrt, floor with positive real literals.
struct ExprNode {
  enum class Kind { Literal, Var, Add, Sub, Mul, Div, Pow, Log, Exp, Sqrt, Floor };
  Kind kind;
  long double value = 0;  // Literal
  std::shared_ptr<ExprNode> lhs, rhs;  // rhs empty for unary functions
};

struct ParseError : InputError {
  std::size_t position;
  std::string expected;
  ParseError(std::size_t pos, const std::string& exp, const std::string& msg)
      : InputError(msg), position(pos), expected(exp) {}
};

// Digit-growth function psi: N -> R+.
struct PsiSpec {
  enum class Kind { AlphaLog, Power, Expo, Table, Expr };
  Kind kind = Kind::AlphaLog;
  long double param = 0;                 // alpha / beta / b
  std::vector<long double> table;        // 1-based values at index i-1
  std::shared_ptr<ExprNode> expr;
  std::string source;                    // original shorthand or expression

  // Shorthand: "alog:<a>", "pow:<b>", "exp:<b>", "table:<csv-path>",
  // "expr:<expression>"; anything else parses as a bare expression.
  static PsiSpec parse(const std::string& text);
  static PsiSpec from_table(std::vector<long double> values);
};

std::string pretty_print(const ExprNode& e);
std::shared_ptr<ExprNode> parse_expression(const std::string& text);
bool expr_equal(const ExprNode& a, const ExprNode& b);

// psi(n); throws DomainError on non-positive results or evaluation
// failures (log of 0 at n = 1 is reported, not patched).
long double eval_psi(const PsiSpec& spec, std::uint64_t n);

// Three-point trend: the same finite-horizon proxy evaluated with
// horizons N/4, N/2 and N.
struct Trend {
  long double at_quarter = 0, at_half = 0, at_full = 0;
};

struct GrowthReport {
  std::uint64_t horizon = 0;
  // Estimate of lim psi(n)/log n; HUGE_VALL when the trend diverges.
  long double alpha_est = 0;
  Trend alpha_trend;
  long double log_a_est = 0, log_b_est = 0;  // liminf/limsup of log psi(n)/n
  long double a_est = 1, b_est = 1;
  Trend a_trend, b_trend;                    // of log psi(n)/n proxies
  long double c_est = 1;                     // 1 + limsup psi(n+1)/prefix sum
  Trend c_trend;
  long double gamma_est = 1;                 // liminf proxy, as for A
  Trend gamma_trend;
  bool chain_ok = true;                      // soft check A <= B <= C
  // psi -> infinity diagnostic: tail minimum keeps growing.
  bool psi_diverges = false;
  long double tail_min = 0;
};

// Finite-horizon growth constants over the tail window [N/2, N].
GrowthReport growth_constants(const PsiSpec& spec, std::uint64_t N);

struct XiReport {
  long double xi = 0;  // HUGE_VALL when the window max keeps growing
  Trend trend;
};

// max over n in [N/2, N] of (2 log(n+1)! + log t_{n+1}) / sum log t_j,
// log-factorials by summed logs.  log_t holds log t_1 ... log t_{N+1}
// (1-based; log_t[0] = log t_1) with every t_n >= 2.
XiReport xi_estimate(const std::vector<long double>& log_t, std::uint64_t N);

enum class EquivalenceVerdict { MonotoneEquivalent, NotEquivalent, Inconclusive };

// Evidence that psi is equivalent to a non-decreasing function, from
// the running maximum M(n) = max_{k<=n} psi(k) over n <= N.
EquivalenceVerdict equivalence_diagnostic(const PsiSpec& spec, std::uint64_t N,
                                          long double tol = 0.01L);

struct DimensionPrediction {
  std::string set_id;  // E_sup, E_inf, E, E_sup_Lambda, ..., F_Lambda, Lambda
  enum class Tag { Value, Empty, RequiresS } tag = Tag::Value;
  long double value = 0;
  std::string provenance;
  bool regime_uncertain = false;
};

// Closed-form dimension values for every set the theorems cover,
// dispatched on the finite-horizon growth regime of psi.
std::vector<DimensionPrediction> predict_dimensions(const PsiSpec& spec,
                                                    std::uint64_t N,
                                                    long double tol = 1e-3L);

}  // namespace cfdim

#endif
