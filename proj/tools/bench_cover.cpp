// Benchmark: serial reference vs OpenMP cover_sum on the same families.
// Prints one line per case with both timings and the speedup; asserts
// that the two kernels agree bit-for-bit on log_sum.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "cfdim/enumeration.hpp"
#include "cfdim/estimator.hpp"

using namespace cfdim;

namespace {

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  struct Case {
    std::string family;
    std::uint64_t k;
    long double s;
  };
  const std::vector<Case> cases = {
      {"bounded:digits=1,2,3,4", 11, 0.7L},
      {"bounded:digits=1,2", 20, 0.55L},
      {"D:l=20,n=8", 8, 0.6L},
      {"A:k=6,alpha1=2,alpha2=2,eps=0.05", 6, 0.9L},
  };
  std::printf("%-36s %3s %6s %10s %10s %8s\n", "family", "k", "s", "serial_s",
              "openmp_s", "speedup");
  for (const Case& c : cases) {
    const FamilySpec f = FamilySpec::parse(c.family);
    CoverSumResult rs, rp;
    double ts = 1e300, tp = 1e300;
    for (int r = 0; r < reps; ++r) {
      ts = std::min(ts, timed([&] { rs = cover_sum_serial(f, c.k, c.s); }));
      tp = std::min(tp, timed([&] { rp = cover_sum(f, c.k, c.s); }));
    }
    if (rs.log_sum != rp.log_sum || rs.words != rp.words) {
      std::fprintf(stderr, "MISMATCH on %s: serial %.21Lg vs parallel %.21Lg\n",
                   c.family.c_str(), rs.log_sum, rp.log_sum);
      return 1;
    }
    std::printf("%-36s %3llu %6.3Lf %10.4f %10.4f %7.2fx\n", c.family.c_str(),
                static_cast<unsigned long long>(c.k), c.s, ts, tp, ts / tp);
  }
  return 0;
}
