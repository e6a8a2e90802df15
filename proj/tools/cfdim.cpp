// cfdim: batch CLI over the continued-fraction dimension library.
// Every subcommand prints one JSON document (or CSV rows) to stdout,
// diagnostics to stderr.  Exit 0 on success, 1 on input error, 2 on
// budget exhaustion.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "cfdim/cf_core.hpp"
#include "cfdim/constructor.hpp"
#include "cfdim/enumeration.hpp"
#include "cfdim/estimator.hpp"
#include "cfdim/psi.hpp"
#include "cfdim/types.hpp"

using json = nlohmann::ordered_json;
using namespace cfdim;

namespace {

struct Config {
  unsigned precision_bits = 64;  // controls decimal digits of real output
  std::uint64_t budget_words = 10'000'000;
  std::uint64_t budget_bits = kDefaultBitBudget;
  long double tol = 1e-4L;
  std::uint64_t seed = 1;
  std::string format = "json";  // json | csv | pretty
};

Config g_cfg;

// Significant decimal digits from the precision setting, floor 15.
int out_digits() {
  const int d = static_cast<int>(g_cfg.precision_bits * 0.30103);
  return std::max(15, std::min(d, 33));
}

std::string real_str(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lg", out_digits(), v);
  return buf;
}

json word_json(const Word& w) {
  json a = json::array();
  for (const Digit& d : w) a.push_back(d.str());
  return a;
}

Word parse_word(const std::string& text) {
  Word w;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw InputError("empty digit in word");
    w.emplace_back(BigInt(tok));
  }
  if (w.empty()) throw InputError("empty word");
  validate_word(w);
  return w;
}

void load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line without '=': " + line);
    const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    if (key == "precision") g_cfg.precision_bits = std::stoul(val);
    else if (key == "budget_words") g_cfg.budget_words = std::stoull(val);
    else if (key == "budget_bits") g_cfg.budget_bits = std::stoull(val);
    else if (key == "tol") g_cfg.tol = std::strtold(val.c_str(), nullptr);
    else if (key == "seed") g_cfg.seed = std::stoull(val);
    else if (key == "format") g_cfg.format = val;
    else throw InputError("unknown config key: " + key);
  }
}

void emit(const json& j) {
  if (g_cfg.format == "pretty") std::cout << j.dump(2) << "\n";
  else std::cout << j.dump() << "\n";
}

// Reinterpret a family shorthand at word length k (the critical-exponent
// template knob).
FamilySpec with_depth(FamilySpec f, std::uint64_t k) {
  switch (f.kind) {
    case FamilySpec::Kind::D: f.n = k; break;
    case FamilySpec::Kind::A:
    case FamilySpec::Kind::C: f.k = k; break;
    case FamilySpec::Kind::Bounded: f.n = k; break;
  }
  return f;
}

json trend_json(const Trend& t) {
  return json{{"at_quarter", real_str(t.at_quarter)},
              {"at_half", real_str(t.at_half)},
              {"at_full", real_str(t.at_full)}};
}

json growth_json(const GrowthReport& g) {
  json j;
  j["horizon"] = std::to_string(g.horizon);
  j["alpha_est"] = real_str(g.alpha_est);
  j["alpha_trend"] = trend_json(g.alpha_trend);
  j["log_A_est"] = real_str(g.log_a_est);
  j["log_B_est"] = real_str(g.log_b_est);
  j["A_est"] = real_str(g.a_est);
  j["B_est"] = real_str(g.b_est);
  j["A_trend"] = trend_json(g.a_trend);
  j["B_trend"] = trend_json(g.b_trend);
  j["C_est"] = real_str(g.c_est);
  j["C_trend"] = trend_json(g.c_trend);
  j["gamma_est"] = real_str(g.gamma_est);
  j["gamma_trend"] = trend_json(g.gamma_trend);
  j["chain_ok"] = g.chain_ok;
  j["psi_diverges"] = g.psi_diverges;
  return j;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"exact continued-fraction dimension toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--budget-words", g_cfg.budget_words, "enumeration word budget");
  app.add_option("--budget-bits", g_cfg.budget_bits, "digit bit budget");
  app.add_option("--tol", g_cfg.tol, "tolerance");
  app.add_option("--seed", g_cfg.seed, "PRNG seed");
  app.add_option("--format", g_cfg.format, "json | csv | pretty")
      ->check(CLI::IsMember({"json", "csv", "pretty"}));

  if (const char* p = std::getenv("CFDIM_PRECISION"))
    g_cfg.precision_bits = std::stoul(p);
  if (const char* s = std::getenv("CFDIM_SEED")) g_cfg.seed = std::stoull(s);

  // expand
  auto* c_expand = app.add_subcommand("expand", "canonical CF expansion of p/q");
  std::string rat_text;
  std::uint64_t max_n = SIZE_MAX;
  c_expand->add_option("rational", rat_text, "rational in (0,1), as p/q")->required();
  c_expand->add_option("--max-n", max_n, "truncate after this many digits");

  // convergents / cylinder
  auto* c_conv = app.add_subcommand("convergents", "convergents of a word");
  auto* c_cyl = app.add_subcommand("cylinder", "cylinder interval of a word");
  std::string word_text;
  c_conv->add_option("word", word_text, "comma-separated digits")->required();
  c_cyl->add_option("word", word_text, "comma-separated digits")->required();

  // count / enumerate
  auto* c_count = app.add_subcommand("count", "exact family cardinality");
  auto* c_enum = app.add_subcommand("enumerate", "list family members");
  std::string family_text;
  std::uint64_t limit = 1000, fam_len = 0;
  c_count->add_option("family", family_text)->required();
  c_count->add_option("--n", fam_len, "word length when the family leaves it free");
  c_enum->add_option("family", family_text)->required();
  c_enum->add_option("--limit", limit, "stop after this many words");
  c_enum->add_option("--n", fam_len, "word length when the family leaves it free");

  // psi
  auto* c_psi = app.add_subcommand("psi", "growth constants / dimension predictions");
  std::string psi_text;
  std::uint64_t horizon = 1 << 14;
  bool want_constants = false, want_predict = false;
  c_psi->add_option("spec", psi_text, "psi shorthand or expression")->required();
  c_psi->add_flag("--constants", want_constants, "finite-horizon growth constants");
  c_psi->add_flag("--predict", want_predict, "closed-form dimension predictions");
  c_psi->add_option("--N", horizon, "horizon");

  // construct
  auto* c_ctor = app.add_subcommand("construct", "explicit points in the fractal sets");
  auto* c_point = c_ctor->add_subcommand("point", "n t_n <= a_n < (n+1) t_n word");
  auto* c_xtilde = c_ctor->add_subcommand("xtilde", "running-max envelope point");
  auto* c_fset = c_ctor->add_subcommand("fset", "a_n = ceil(a^{b^n}) word");
  auto* c_dseq = c_ctor->add_subcommand("dseq", "the d_n recursion");
  long double t_alpha = 0, d_A = 0, d_eps = 0, f_a = 0, f_b = 0;
  std::string t_table, rule_text = "low";
  std::uint64_t ctor_N = 50;
  c_point->add_option("--alpha", t_alpha, "t_n = 2 floor(n^{alpha-1})");
  c_point->add_option("--psi", psi_text, "t_n = floor(exp(psi(n)+1))");
  c_point->add_option("--from-d-A", d_A, "with --psi: t_n = 2 d_{n+1} at this A");
  c_point->add_option("--eps", d_eps, "epsilon for the d recursion");
  c_point->add_option("--t-table", t_table, "explicit comma-separated t values");
  c_point->add_option("--rule", rule_text)->check(CLI::IsMember({"low", "mid", "high"}));
  c_point->add_option("--N", ctor_N)->required();
  c_xtilde->add_option("--psi", psi_text)->required();
  c_xtilde->add_option("--N", ctor_N)->required();
  c_fset->add_option("--a", f_a)->required();
  c_fset->add_option("--b", f_b)->required();
  c_fset->add_option("--N", ctor_N)->required();
  c_dseq->add_option("--psi", psi_text)->required();
  c_dseq->add_option("--A", d_A)->required();
  c_dseq->add_option("--eps", d_eps)->required();
  c_dseq->add_option("--N", ctor_N)->required();

  // cover-sum / critical / mc-growth
  auto* c_cover = app.add_subcommand("cover-sum", "log of sum |I_k|^s over a family");
  std::uint64_t depth = 0;
  long double s_exp = 1;
  std::string mode_text = "exact";
  bool serial = false;
  c_cover->add_option("family", family_text)->required();
  c_cover->add_option("--k", depth)->required();
  c_cover->add_option("--s", s_exp)->required();
  c_cover->add_option("--mode", mode_text)->check(CLI::IsMember({"exact", "bound"}));
  c_cover->add_flag("--serial", serial, "serial reference kernel");

  auto* c_crit = app.add_subcommand("critical", "bisect for the crossing exponent");
  std::vector<std::uint64_t> depths;
  c_crit->add_option("family", family_text)->required();
  c_crit->add_option("--k", depths, "depths (repeatable)")->required();
  c_crit->add_option("--mode", mode_text)->check(CLI::IsMember({"exact", "bound"}));

  auto* c_mc = app.add_subcommand("mc-growth", "Monte Carlo a.e. growth statistic");
  std::uint64_t samples = 100;
  c_mc->add_option("--samples", samples)->required();
  c_mc->add_option("--N", horizon)->required();

  // Global flags remain usable after the subcommand name.
  const std::function<void(CLI::App*)> allow_globals = [&](CLI::App* a) {
    for (CLI::App* sc : a->get_subcommands(static_cast<bool (*)(const CLI::App*)>(
             [](const CLI::App*) { return true; }))) {
      sc->fallthrough();
      allow_globals(sc);
    }
  };
  allow_globals(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (!config_path.empty()) load_config_file(config_path);

  if (*c_expand) {
    const Rational x = rational_from_string(rat_text);
    const Word w = expand(x, max_n);
    emit(json{{"input", rational_to_string(x)}, {"word", word_json(w)}});
    return 0;
  }
  if (*c_conv) {
    const Word w = parse_word(word_text);
    json arr = json::array();
    for (const Convergent& c : convergents(w))
      arr.push_back(json{{"p", c.p.str()}, {"q", c.q.str()}});
    emit(json{{"word", word_json(w)},
              {"convergents", arr},
              {"value", rational_to_string(evaluate(w))}});
    return 0;
  }
  if (*c_cyl) {
    const Word w = parse_word(word_text);
    const Interval iv = cylinder(w);
    const BoundsReport b = verify_bounds(w);
    emit(json{{"word", word_json(w)},
              {"lo", rational_to_string(iv.lo)},
              {"hi", rational_to_string(iv.hi)},
              {"len", rational_to_string(iv.length())},
              {"bounds", json{{"golden_lower", b.golden_lower},
                              {"length_phi", b.length_phi},
                              {"length_product", b.length_product}}}});
    return 0;
  }
  if (*c_count) {
    const FamilySpec f = FamilySpec::parse(family_text);
    std::optional<std::uint64_t> len;
    if (fam_len) len = fam_len;
    emit(json{{"family", f.to_string()}, {"count", count_family(f, len).str()}});
    return 0;
  }
  if (*c_enum) {
    const FamilySpec f = FamilySpec::parse(family_text);
    std::optional<std::uint64_t> len;
    if (fam_len) len = fam_len;
    json arr = json::array();
    std::uint64_t seen = 0;
    enumerate(f, [&](const Word& w) {
      arr.push_back(word_json(w));
      return ++seen < limit;
    }, g_cfg.budget_words, len);
    emit(json{{"family", f.to_string()}, {"words", arr},
              {"truncated", seen >= limit}});
    return 0;
  }
  if (*c_psi) {
    if (want_constants == want_predict)
      throw InputError("psi: pass exactly one of --constants, --predict");
    const PsiSpec spec = PsiSpec::parse(psi_text);
    if (want_constants) {
      json j = growth_json(growth_constants(spec, horizon));
      j["psi"] = spec.source;
      emit(j);
      return 0;
    }
    json preds = json::object();
    json meta = json::array();
    for (const DimensionPrediction& p : predict_dimensions(spec, horizon, g_cfg.tol)) {
      json e;
      e["set"] = p.set_id;
      switch (p.tag) {
        case DimensionPrediction::Tag::Value:
          preds[p.set_id] = real_str(p.value);
          e["value"] = real_str(p.value);
          break;
        case DimensionPrediction::Tag::Empty:
          preds[p.set_id] = "empty";
          e["value"] = "empty";
          break;
        case DimensionPrediction::Tag::RequiresS:
          preds[p.set_id] = "requires-S(alpha)";
          e["value"] = "requires-S(alpha)";
          break;
      }
      e["provenance"] = p.provenance;
      e["regime_uncertain"] = p.regime_uncertain;
      meta.push_back(e);
    }
    emit(json{{"psi", spec.source}, {"horizon", std::to_string(horizon)},
              {"predictions", preds}, {"detail", meta}});
    return 0;
  }
  if (*c_point) {
    TSequence t = [&] {
      if (!t_table.empty()) {
        std::vector<BigInt> vals;
        std::stringstream ss(t_table);
        std::string tok;
        while (std::getline(ss, tok, ',')) vals.emplace_back(BigInt(tok));
        return TSequence::explicit_table(std::move(vals));
      }
      if (t_alpha > 0) return TSequence::power_alpha(t_alpha, ctor_N, g_cfg.budget_bits);
      if (psi_text.empty()) throw InputError("construct point: need --alpha, --psi or --t-table");
      const PsiSpec spec = PsiSpec::parse(psi_text);
      if (d_A > 0) return TSequence::from_d(spec, d_A, d_eps, ctor_N, g_cfg.budget_bits);
      return TSequence::from_psi(spec, ctor_N, g_cfg.budget_bits);
    }();
    const PointRule rule = rule_text == "low" ? PointRule::Low
                         : rule_text == "mid" ? PointRule::Mid
                                              : PointRule::HighAvoid;
    const Word w = build_point(t, ctor_N, rule, g_cfg.budget_bits);
    emit(json{{"t", t.describe}, {"rule", rule_text}, {"word", word_json(w)}});
    return 0;
  }
  if (*c_xtilde) {
    const PsiSpec spec = PsiSpec::parse(psi_text);
    const XtildeResult r = build_xtilde(spec, ctor_N, g_cfg.budget_bits);
    json ratios = json::array();
    for (long double v : r.ratios) ratios.push_back(real_str(v));
    emit(json{{"psi", spec.source}, {"word", word_json(r.word)}, {"ratios", ratios}});
    return 0;
  }
  if (*c_fset) {
    const Word w = build_F_point(f_a, f_b, ctor_N, g_cfg.budget_bits);
    emit(json{{"a", real_str(f_a)}, {"b", real_str(f_b)}, {"word", word_json(w)}});
    return 0;
  }
  if (*c_dseq) {
    const PsiSpec spec = PsiSpec::parse(psi_text);
    const DSequence d = d_sequence(spec, d_A, d_eps, ctor_N);
    json logs = json::array();
    for (long double v : d.log_d) logs.push_back(real_str(v));
    emit(json{{"psi", spec.source}, {"A", real_str(d_A)}, {"eps", real_str(d_eps)},
              {"log_d", logs},
              {"monotone_from_2", d.monotone_from_2},
              {"wan3_tail_max", real_str(d.wan3_tail_max)},
              {"dnlogn_trend", trend_json(d.dnlogn_trend)},
              {"cn_trend", trend_json(d.cn_trend)}});
    return 0;
  }
  if (*c_cover) {
    const FamilySpec f = FamilySpec::parse(family_text);
    const CoverMode mode = mode_text == "exact" ? CoverMode::ExactEnumeration
                                                : CoverMode::BoundProduct;
    const CoverSumResult r = serial
        ? cover_sum_serial(f, depth, s_exp, mode, g_cfg.budget_words)
        : cover_sum(f, depth, s_exp, mode, g_cfg.budget_words);
    json j{{"family", f.to_string()}, {"k", std::to_string(depth)},
           {"s", real_str(s_exp)},
           {"mode", mode == CoverMode::ExactEnumeration ? "exact" : "bound"},
           {"log_sum", real_str(r.log_sum)},
           {"words", std::to_string(r.words)}};
    if (r.exact_total_length) j["total_length"] = rational_to_string(*r.exact_total_length);
    emit(j);
    return 0;
  }
  if (*c_crit) {
    const FamilySpec base = FamilySpec::parse(family_text);
    const CoverMode mode = mode_text == "exact" ? CoverMode::ExactEnumeration
                                                : CoverMode::BoundProduct;
    json arr = json::array();
    std::string csv = "k,s_star\n";
    for (std::uint64_t k : depths) {
      const CriticalExponent ce =
          critical_exponent(with_depth(base, k), k, g_cfg.tol, mode, g_cfg.budget_words);
      json e{{"k", std::to_string(k)}, {"bracket_failed", ce.bracket_failed}};
      if (ce.bracket_failed) {
        e["note"] = ce.note;
      } else {
        e["s_star"] = real_str(ce.s_star);
        e["s_lo"] = real_str(ce.s_lo);
        e["s_hi"] = real_str(ce.s_hi);
        e["iterations"] = std::to_string(ce.iterations);
        csv += std::to_string(k) + "," + real_str(ce.s_star) + "\n";
      }
      arr.push_back(e);
    }
    if (g_cfg.format == "csv") std::cout << csv;
    else emit(json{{"family", base.to_string()}, {"tol", real_str(g_cfg.tol)},
                   {"results", arr}, {"csv", csv}});
    return 0;
  }
  if (*c_mc) {
    const McGrowthStats st = mc_growth_law(samples, horizon, g_cfg.seed);
    emit(json{{"samples", std::to_string(st.samples)},
              {"N", std::to_string(st.horizon)},
              {"seed", std::to_string(st.seed)},
              {"resampled", std::to_string(st.resampled)},
              {"median", real_str(st.median)},
              {"q10", real_str(st.q10)}, {"q25", real_str(st.q25)},
              {"q75", real_str(st.q75)}, {"q90", real_str(st.q90)}});
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const BudgetError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
