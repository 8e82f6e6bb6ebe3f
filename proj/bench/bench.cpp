// Serial vs OpenMP timings for the parallel kernels. Each pair must agree exactly.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

#include "support.hpp"
#include "tropcert/json_io.hpp"

using namespace tropcert;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool report(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, agree ? "agree" : "MISMATCH");
  return agree;
}

RatMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<long> d(-20, 20);
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rat(d(rng));
  return m;
}

bool same(const ValidationReport& a, const ValidationReport& b) {
  return canonical_dump(to_json(a)) == canonical_dump(to_json(b));
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("threads: %d, best of %d\n", omp_get_max_threads(), reps);
  std::mt19937_64 rng(1);
  bool ok = true;

  {
    const auto m = random_matrix(rng, 120, 160);
    RankProfile s, p;
    const double ts = best_of(reps, [&] { s = rank_profile_serial(m); });
    const double tp = best_of(reps, [&] { p = rank_profile(m); });
    ok &= report("rank_profile", ts, tp, s.rank == p.rank && s.pivot_rows == p.pivot_rows && s.pivot_cols == p.pivot_cols);
  }

  const auto big = fixtures::sample_planar_curve(rng, 14, true);
  std::printf("curve: %zu vertices, %zu edges, %zu rays\n", big.num_vertices(), big.edges().size(), big.rays().size());
  {
    ValidationReport s, p;
    const double ts = best_of(reps, [&] { s = validate_embedding(big, Execution::Serial); });
    const double tp = best_of(reps, [&] { p = validate_embedding(big, Execution::Parallel); });
    ok &= report("validate_embedding", ts, tp, same(s, p));
  }
  {
    const auto fan = build_fan(big);
    FanCheck s, p;
    const double ts = best_of(reps, [&] { s = verify_fan_axioms(fan, Execution::Serial); });
    const double tp = best_of(reps, [&] { p = verify_fan_axioms(fan, Execution::Parallel); });
    ok &= report("verify_fan_axioms", ts, tp, s.ok == p.ok && s.reason == p.reason && s.pair == p.pair);
  }
  {
    std::vector<TropicalCurve> batch;
    for (int i = 0; i < 24; ++i) {
      auto c = fixtures::sample_planar_curve(rng, 3 + i % 4, true);
      batch.push_back(i % 2 ? fixtures::lift_to_r3(c, rng) : c);
    }
    std::vector<Certificate> s, p;
    const double ts = best_of(reps, [&] { s = certify_batch(batch, 9, Execution::Serial); });
    const double tp = best_of(reps, [&] { p = certify_batch(batch, 9, Execution::Parallel); });
    bool agree = s.size() == p.size();
    for (std::size_t i = 0; agree && i < s.size(); ++i)
      agree = canonical_dump(to_json(s[i])) == canonical_dump(to_json(p[i]));
    ok &= report("certify_batch", ts, tp, agree);
  }
  return ok ? 0 : 1;
}
