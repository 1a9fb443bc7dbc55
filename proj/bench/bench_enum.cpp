#include <benchmark/benchmark.h>

#include "padicharm/fiber_enum.hpp"
#include "padicharm/symplectic.hpp"

using namespace padicharm;

static FiberEnumSpec unit_spec(int k, bool clifford) {
  FiberEnumSpec s;
  s.m = 3;
  s.p = 3;
  s.k = k;
  s.Kz = k;
  s.s = std::vector<int>(6, 0);
  s.base = std::vector<long long>(6, 0);
  s.clifford = clifford;
  return s;
}

static void BM_Fibers(benchmark::State& st) {
  auto spec = unit_spec(static_cast<int>(st.range(0)), st.range(1) != 0);
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_fibers(spec, true).total);
  st.SetItemsProcessed(st.iterations() * spec.points());
}

static void BM_FibersSerial(benchmark::State& st) {
  auto spec = unit_spec(static_cast<int>(st.range(0)), st.range(1) != 0);
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_fibers(spec, false).total);
  st.SetItemsProcessed(st.iterations() * spec.points());
}

static void BM_FibersReference(benchmark::State& st) {
  auto spec = unit_spec(static_cast<int>(st.range(0)), st.range(1) != 0);
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_fibers_reference(spec).total);
  st.SetItemsProcessed(st.iterations() * spec.points());
}

BENCHMARK(BM_Fibers)->Args({2, 0})->Args({2, 1})->Args({3, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FibersSerial)->Args({2, 0})->Args({2, 1})->Args({3, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FibersReference)->Args({2, 0})->Args({2, 1})->Unit(benchmark::kMillisecond);

static void BM_SpBruteForce(benchmark::State& st) {
  int n = static_cast<int>(st.range(0)), q = static_cast<int>(st.range(1));
  bool par = st.range(2) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(sp_order_bruteforce(n, q, par));
}

BENCHMARK(BM_SpBruteForce)
    ->Args({1, 3, 1})
    ->Args({1, 3, 0})
    ->Args({1, 5, 1})
    ->Args({1, 5, 0})
    ->Args({1, 7, 1})
    ->Args({1, 7, 0})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
