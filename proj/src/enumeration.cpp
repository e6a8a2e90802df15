#include "cfdim/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cfdim {

std::uint64_t ipow_floor(std::uint64_t base, long double e) {
  if (base == 0) throw InputError("ipow_floor: base must be positive");
  const long double v = std::exp(e * std::log(static_cast<long double>(base)));
  // Nudge so that exact integer powers land on themselves; genuine ties
  // resolve downward (ties round down, as floor notation requires).
  return static_cast<std::uint64_t>(std::floor(v * (1 + 1e-15L) + 1e-9L));
}

std::uint64_t ipow_ceil(std::uint64_t base, long double e) {
  if (base == 0) throw InputError("ipow_ceil: base must be positive");
  const long double v = std::exp(e * std::log(static_cast<long double>(base)));
  return static_cast<std::uint64_t>(std::ceil(v * (1 - 1e-15L) - 1e-9L));
}

std::optional<std::uint64_t> FamilySpec::word_length() const {
  switch (kind) {
    case Kind::D: return n;
    case Kind::A:
    case Kind::C: return k;
    case Kind::Bounded: return n;
  }
  return {};
}

std::uint64_t FamilySpec::digit_floor(std::uint64_t j) const {
  if (kind == Kind::A) return std::max<std::uint64_t>(1, ipow_ceil(j, alpha1 - eps));
  return 1;
}

std::uint64_t FamilySpec::digit_ceiling(std::uint64_t len) const {
  switch (kind) {
    case Kind::D: return ell;
    case Kind::A: return ipow_floor(k, alpha2 + eps);
    case Kind::C: return ipow_floor(k, alpha + eps);
    case Kind::Bounded: return digits.empty() ? 0 : digits.back();
  }
  (void)len;
  return 0;
}

bool FamilySpec::contains(const Word& w) const {
  const auto len = word_length();
  if (len && w.size() != *len) return false;
  if (kind == Kind::Bounded) {
    for (const Digit& d : w) {
      if (d < 1 || d > digits.back()) return false;
      const std::uint64_t v = d.convert_to<std::uint64_t>();
      if (!std::binary_search(digits.begin(), digits.end(), v)) return false;
    }
    return true;
  }
  if (!is_nondecreasing(w)) return false;
  const std::uint64_t ceil_v = digit_ceiling(w.size());
  if (w.empty() || w.back() > ceil_v) return false;
  for (std::size_t j = 1; j <= w.size(); ++j) {
    if (w[j - 1] < digit_floor(j)) return false;
  }
  return true;
}

BigInt count_D(std::uint64_t ell, std::uint64_t n) {
  if (ell < 1 || n < 1) throw InputError("count_D: l and n must be >= 1");
  // binomial(n + l - 1, n)
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= n; ++i) {
    r *= ell - 1 + i;
    r /= i;
  }
  return r;
}

namespace {

std::uint64_t resolve_length(const FamilySpec& f, std::optional<std::uint64_t> len) {
  if (len) {
    const auto own = f.word_length();
    if (own && *own != *len)
      throw InputError("family length mismatch: family fixes n=" +
                       std::to_string(*own));
    return *len;
  }
  const auto own = f.word_length();
  if (!own) throw InputError("family is not finite: no word length given");
  return *own;
}

}  // namespace

BigInt count_family(const FamilySpec& f, std::optional<std::uint64_t> len) {
  const std::uint64_t L = resolve_length(f, len);
  if (L == 0) throw InputError("count_family: length must be >= 1");
  if (f.kind == FamilySpec::Kind::Bounded) {
    if (f.digits.empty()) throw InputError("bounded family with empty digit set");
    return boost::multiprecision::pow(BigInt(f.digits.size()), static_cast<unsigned>(L));
  }
  const std::uint64_t C = f.digit_ceiling(L);
  if (C > 10'000'000) throw BudgetError("count_family: digit ceiling too large for DP");
  if (C == 0) return 0;
  // end[v] = number of admissible prefixes ending exactly at digit v+1.
  std::vector<BigInt> end(C, 0);
  for (std::uint64_t v = f.digit_floor(1); v <= C; ++v) end[v - 1] = 1;
  for (std::uint64_t j = 2; j <= L; ++j) {
    BigInt prefix = 0;
    const std::uint64_t lo = f.digit_floor(j);
    std::vector<BigInt> next(C, 0);
    for (std::uint64_t v = 1; v <= C; ++v) {
      prefix += end[v - 1];
      if (v >= lo) next[v - 1] = prefix;
    }
    end = std::move(next);
  }
  BigInt total = 0;
  for (const BigInt& e : end) total += e;
  return total;
}

namespace {

void enumerate_monotone(const FamilySpec& f, std::uint64_t L, std::uint64_t ceil_v,
                        Word& w, std::uint64_t prev, std::uint64_t& produced,
                        std::uint64_t budget, bool& stop,
                        const std::function<bool(const Word&)>& visit) {
  if (stop) return;
  const std::uint64_t j = w.size() + 1;
  const std::uint64_t lo = std::max(prev, f.digit_floor(j));
  for (std::uint64_t v = lo; v <= ceil_v && !stop; ++v) {
    w.push_back(v);
    if (w.size() == L) {
      if (++produced > budget) throw BudgetError("enumerate: word budget exceeded");
      if (!visit(w)) stop = true;
    } else {
      enumerate_monotone(f, L, ceil_v, w, v, produced, budget, stop, visit);
    }
    w.pop_back();
  }
}

void enumerate_bounded(const FamilySpec& f, std::uint64_t L, Word& w,
                       std::uint64_t& produced, std::uint64_t budget, bool& stop,
                       const std::function<bool(const Word&)>& visit) {
  if (stop) return;
  for (std::uint64_t v : f.digits) {
    if (stop) break;
    w.push_back(v);
    if (w.size() == L) {
      if (++produced > budget) throw BudgetError("enumerate: word budget exceeded");
      if (!visit(w)) stop = true;
    } else {
      enumerate_bounded(f, L, w, produced, budget, stop, visit);
    }
    w.pop_back();
  }
}

}  // namespace

void enumerate(const FamilySpec& f, const std::function<bool(const Word&)>& visit,
               std::uint64_t budget_words, std::optional<std::uint64_t> len) {
  const std::uint64_t L = resolve_length(f, len);
  if (L == 0) throw InputError("enumerate: length must be >= 1");
  Word w;
  w.reserve(L);
  std::uint64_t produced = 0;
  bool stop = false;
  if (f.kind == FamilySpec::Kind::Bounded) {
    if (f.digits.empty()) throw InputError("bounded family with empty digit set");
    enumerate_bounded(f, L, w, produced, budget_words, stop, visit);
  } else {
    enumerate_monotone(f, L, f.digit_ceiling(L), w, 1, produced, budget_words,
                       stop, visit);
  }
}

long double log_bound_A_k(std::uint64_t k, long double alpha2, long double eps) {
  if (k < 1 || alpha2 < 1 || eps <= 0)
    throw InputError("log_bound_A_k: need k >= 1, alpha2 >= 1, eps > 0");
  const long double lk = static_cast<long double>(k);
  return lk * std::log(2.0L) + (alpha2 + eps) * lk +
         (alpha2 + eps - 1) * std::lgamma(lk + 1);
}

long double log_bound_C_k(std::uint64_t k, long double alpha, long double eps) {
  if (k < 2 || alpha < 0 || eps <= 0)
    throw InputError("log_bound_C_k: need k >= 2, alpha >= 0, eps > 0");
  const long double lk = static_cast<long double>(k);
  return std::exp((alpha + eps) * std::log(lk)) * (std::log(lk) + 1);
}

std::pair<long double, long double> log_stirling_bounds(std::uint64_t k) {
  if (k < 1) throw InputError("log_stirling_bounds: k >= 1");
  const long double lk = static_cast<long double>(k);
  const long double core = (lk + 0.5L) * std::log(lk) - lk;
  return {0.5L * std::log(2 * 3.14159265358979323846264338327950288L) + core,
          1.0L + core};
}

FamilySpec FamilySpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw InputError("family spec missing ':' — expected e.g. D:l=5,n=5");
  const std::string head = text.substr(0, colon);
  FamilySpec f;
  if (head == "D") f.kind = Kind::D;
  else if (head == "A") f.kind = Kind::A;
  else if (head == "C") f.kind = Kind::C;
  else if (head == "bounded") f.kind = Kind::Bounded;
  else throw InputError("unknown family kind: " + head);

  // Tokens without '=' continue the previous key's value list (so
  // "digits=1,2" parses as expected).
  std::map<std::string, std::vector<std::string>> kv;
  std::string token, current;
  std::istringstream in(text.substr(colon + 1));
  while (std::getline(in, token, ',')) {
    const auto eq = token.find('=');
    if (eq != std::string::npos) {
      current = token.substr(0, eq);
      kv[current].push_back(token.substr(eq + 1));
    } else if (!current.empty()) {
      kv[current].push_back(token);
    } else {
      throw InputError("malformed family parameter: " + token);
    }
  }
  auto get1 = [&](const std::string& key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end() || it->second.size() != 1)
      throw InputError("family spec needs parameter " + key);
    return it->second.front();
  };
  auto to_u64 = [](const std::string& s) {
    try {
      return static_cast<std::uint64_t>(std::stoull(s));
    } catch (const std::exception&) {
      throw InputError("bad integer in family spec: " + s);
    }
  };
  auto to_ld = [](const std::string& s) {
    try {
      return std::stold(s);
    } catch (const std::exception&) {
      throw InputError("bad number in family spec: " + s);
    }
  };
  switch (f.kind) {
    case Kind::D:
      f.ell = to_u64(get1("l"));
      f.n = to_u64(get1("n"));
      if (f.ell < 1 || *f.n < 1) throw InputError("D family needs l,n >= 1");
      break;
    case Kind::A:
      f.k = to_u64(get1("k"));
      f.alpha1 = to_ld(get1("alpha1"));
      f.alpha2 = to_ld(get1("alpha2"));
      f.eps = to_ld(get1("eps"));
      if (f.alpha2 < f.alpha1) throw InputError("A family needs alpha2 >= alpha1");
      if (f.alpha1 <= 0 || f.eps <= 0) throw InputError("A family needs positive parameters");
      break;
    case Kind::C:
      f.k = to_u64(get1("k"));
      f.alpha = to_ld(get1("alpha"));
      f.eps = to_ld(get1("eps"));
      if (f.alpha < 0 || f.eps <= 0) throw InputError("C family needs alpha >= 0, eps > 0");
      break;
    case Kind::Bounded: {
      auto it = kv.find("digits");
      if (it == kv.end() || it->second.empty())
        throw InputError("bounded family needs digits=...");
      for (const auto& s : it->second) {
        const std::uint64_t d = to_u64(s);
        if (d < 1) throw InputError("bounded family digit < 1");
        f.digits.push_back(d);
      }
      std::sort(f.digits.begin(), f.digits.end());
      f.digits.erase(std::unique(f.digits.begin(), f.digits.end()), f.digits.end());
      if (kv.count("n")) f.n = to_u64(get1("n"));
      break;
    }
  }
  return f;
}

std::string FamilySpec::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::D:
      out << "D:l=" << ell << ",n=" << (n ? *n : 0);
      break;
    case Kind::A:
      out << "A:k=" << k << ",alpha1=" << real_to_string(alpha1)
          << ",alpha2=" << real_to_string(alpha2) << ",eps=" << real_to_string(eps);
      break;
    case Kind::C:
      out << "C:k=" << k << ",alpha=" << real_to_string(alpha)
          << ",eps=" << real_to_string(eps);
      break;
    case Kind::Bounded:
      out << "bounded:digits=";
      for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) out << ',';
        out << digits[i];
      }
      if (n) out << ",n=" << *n;
      break;
  }
  return out.str();
}

}  // namespace cfdim
