// Times the parallel kernels against their serial references.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "CLI11.hpp"
#include "imapk/markov.hpp"
#include "imapk/stepfun.hpp"

using namespace imapk;

namespace {

template <class F>
double seconds(F&& f, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

PMMap grid_map(std::mt19937& rng, long n) {
  std::uniform_int_distribution<long> grid(0, n);
  std::vector<Scalar> part;
  for (long i = 0; i <= n; ++i) part.emplace_back(i, n);
  std::vector<AffineBranch> br;
  for (long i = 0; i < n; ++i) {
    long u = grid(rng), v = grid(rng);
    while (v == u) v = grid(rng);
    Scalar slope = Scalar(v - u, n) / (part[i + 1] - part[i]);
    br.push_back({slope, Scalar(u, n) - slope * part[i]});
  }
  return validate_map(part, br);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel kernels vs serial references"};
  long n = 400;
  int reps = 3;
  app.add_option("-n,--size", n, "branches of the random grid map and size of the boolean matrix")
      ->check(CLI::Range(2L, 100000L));
  app.add_option("-r,--reps", reps, "timed repetitions per kernel")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  std::mt19937 rng(1);
  std::printf("threads: %d\n", omp_get_max_threads());

  PMMap m = grid_map(rng, n);
  std::vector<Scalar> splits;
  std::vector<mpz_class> values{1};
  for (long i = 1; i < 3 * n; ++i) {
    splits.emplace_back(i, 3 * n);
    values.push_back(static_cast<long>(rng() % 7) - 3);
  }
  StepFn f(splits, values);
  bool same = transfer(m, f) == transfer_serial(m, f);
  double tp = seconds([&] { (void)transfer(m, f); }, reps);
  double ts = seconds([&] { (void)transfer_serial(m, f); }, reps);
  std::printf("transfer        branches=%ld pieces=%zu  parallel %.4fs  serial %.4fs  agree=%d\n", n,
              f.piece_count(), tp, ts, same);

  std::size_t k = static_cast<std::size_t>(n);
  BoolMatrix a(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a(i, j) = rng() % 50 == 0;
  bool psame = power(a, 20) == power_serial(a, 20);
  double pp = seconds([&] { (void)power(a, 20); }, reps);
  double ps = seconds([&] { (void)power_serial(a, 20); }, reps);
  std::printf("boolean power   n=%zu k=20  parallel %.4fs  serial %.4fs  agree=%d\n", k, pp, ps, psame);
  return same && psame ? 0 : 1;
}
