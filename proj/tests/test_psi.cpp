#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfdim/psi.hpp"

using namespace cfdim;

namespace {

const DimensionPrediction& find(const std::vector<DimensionPrediction>& ps,
                                const std::string& id) {
  for (const auto& p : ps)
    if (p.set_id == id) return p;
  throw std::logic_error("missing prediction " + id);
}

}  // namespace

TEST_CASE("expression parser accepts the grammar") {
  const auto e = parse_expression("2*log(n)^2 + n/3");
  CHECK(eval_psi(PsiSpec{PsiSpec::Kind::Expr, 0, {}, e, ""}, 1) ==
        doctest::Approx(1.0L / 3).epsilon(1e-15));
  // ^ binds tighter than * and is right-associative.
  CHECK(expr_equal(*parse_expression("2^3^2"), *parse_expression("2^(3^2)")));
  CHECK(!expr_equal(*parse_expression("2^3^2"), *parse_expression("(2^3)^2")));
  // pretty_print round-trips through the parser.
  for (const char* s : {"log(n)", "sqrt(n+1)*2", "floor(n^1.5)", "exp(n/7)-1"}) {
    const auto a = parse_expression(s);
    CHECK(expr_equal(*a, *parse_expression(pretty_print(*a))));
  }
}

TEST_CASE("parse errors carry position and expectation") {
  try {
    parse_expression("log(n");
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.position == 5);
    CHECK(e.expected == "')'");
  }
  CHECK_THROWS_AS(parse_expression("2 + * 3"), ParseError);
  CHECK_THROWS_AS(parse_expression("m + 1"), ParseError);
  CHECK_THROWS_AS(parse_expression("-n"), ParseError);
}

TEST_CASE("psi shorthand and evaluation") {
  const PsiSpec alog = PsiSpec::parse("alog:2");
  CHECK(eval_psi(alog, 10) == 2 * std::log(10.0L));
  CHECK(eval_psi(alog, 1) == 0.0L);  // tolerated boundary value

  const PsiSpec pw = PsiSpec::parse("pow:1.5");
  CHECK(eval_psi(pw, 4) == doctest::Approx(8.0L).epsilon(1e-17));

  const PsiSpec ex = PsiSpec::parse("exp:2");
  CHECK(eval_psi(ex, 10) == doctest::Approx(1024.0L).epsilon(1e-17));

  const PsiSpec tab = PsiSpec::from_table({1.5L, 2.5L, 10.0L});
  CHECK(eval_psi(tab, 2) == 2.5L);
  CHECK_THROWS_AS(eval_psi(tab, 4), DomainError);

  // log(0) at n = 1 is a domain error for expressions, not patched.
  CHECK_THROWS_AS(eval_psi(PsiSpec::parse("expr:log(log(n))"), 1), DomainError);
}

TEST_CASE("growth constants for exponential psi are exact") {
  for (long double b : {2.0L, 3.0L, 5.0L}) {
    const GrowthReport r = growth_constants(PsiSpec::parse("exp:" + std::to_string((int)b)), 64);
    CHECK(r.a_est == b);
    CHECK(r.b_est == b);
    CHECK(std::fabs(r.c_est - b) <= 1e-6L);
    CHECK(r.chain_ok);
    CHECK(r.psi_diverges);
  }
}

TEST_CASE("growth constants for alpha-log psi") {
  for (long double a : {0.5L, 1.0L, 2.0L, 4.0L}) {
    const GrowthReport r =
        growth_constants(PsiSpec::parse("alog:" + std::to_string(a)), 1 << 14);
    CHECK(r.alpha_est == a);
    CHECK(std::fabs(r.a_est - 1) <= 1e-3L);
    CHECK(std::fabs(r.b_est - 1) <= 1e-3L);
  }
}

TEST_CASE("xi estimate reproduces 2/(alpha-1) for t_n = 2 floor(n^{alpha-1})") {
  // alpha = 3: xi -> 2/(3-1) = 1.
  const std::uint64_t N = 20000;
  std::vector<long double> log_t(N + 1);
  for (std::uint64_t n = 1; n <= N + 1; ++n)
    log_t[n - 1] = std::log(2.0L * static_cast<long double>(n) * n);
  const XiReport r = xi_estimate(log_t, N);
  CHECK(std::fabs(r.xi - 1) <= 0.1L);
  // The three-point trend moves toward the limit.
  CHECK(std::fabs(r.trend.at_full - 1) <= std::fabs(r.trend.at_quarter - 1));
}

TEST_CASE("xi rejects sequences with t_n < 2") {
  CHECK_THROWS_AS(xi_estimate(std::vector<long double>(10, 0.0L), 8), InputError);
}

TEST_CASE("equivalence diagnostic") {
  CHECK(equivalence_diagnostic(PsiSpec::parse("expr:n"), 64) ==
        EquivalenceVerdict::MonotoneEquivalent);
  // One early spike, then flat: the running max stays strictly above psi.
  std::vector<long double> spike(64, 1.0L);
  spike[0] = 10.0L;
  CHECK(equivalence_diagnostic(PsiSpec::from_table(spike), 64) ==
        EquivalenceVerdict::NotEquivalent);
}

TEST_CASE("dimension predictions: alpha-log family") {
  const long double expect[] = {0.0L, 0.0L, 0.25L, 0.375L};
  const long double alphas[] = {0.5L, 1.0L, 2.0L, 4.0L};
  for (int i = 0; i < 4; ++i) {
    const auto ps =
        predict_dimensions(PsiSpec::parse("alog:" + std::to_string(alphas[i])), 1 << 14);
    const auto& p = find(ps, "E_sup_Lambda");
    REQUIRE(p.tag == DimensionPrediction::Tag::Value);
    CHECK(p.value == expect[i]);
    CHECK(find(ps, "E_sup").value == 1.0L);
    CHECK(find(ps, "E_inf").value == 0.5L);
    CHECK(find(ps, "Lambda").value == 0.5L);
  }
}

TEST_CASE("dimension predictions: exponential psi") {
  const auto ps = predict_dimensions(PsiSpec::parse("exp:3"), 64);
  for (const char* id : {"E_sup_Lambda", "E_inf_Lambda", "E_Lambda"}) {
    const auto& p = find(ps, id);
    REQUIRE(p.tag == DimensionPrediction::Tag::Value);
    CHECK(std::fabs(p.value - 0.25L) <= 1e-6L);
  }
  CHECK(find(ps, "Lambda").value == 0.5L);
  CHECK(std::fabs(find(ps, "E_sup").value - 0.25L) <= 1e-6L);
}

TEST_CASE("linear psi returns the requires-S marker, never a number") {
  for (const char* s : {"expr:n", "expr:2*n", "expr:0.5*n"}) {
    const auto ps = predict_dimensions(PsiSpec::parse(s), 1 << 12);
    CHECK(find(ps, "E_sup").tag == DimensionPrediction::Tag::RequiresS);
  }
}

TEST_CASE("non-equivalent psi empties E_Lambda") {
  // Oscillating with a huge early spike but still diverging: b_est finite.
  std::vector<long double> tab(256);
  for (std::size_t i = 0; i < tab.size(); ++i)
    tab[i] = static_cast<long double>(i + 1);
  tab[4] = 4000.0L;  // running max stays above psi for the whole window
  const auto ps = predict_dimensions(PsiSpec::from_table(tab), 256);
  CHECK(find(ps, "E_Lambda").tag == DimensionPrediction::Tag::Empty);
}
