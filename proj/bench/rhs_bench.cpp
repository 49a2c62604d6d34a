#include <benchmark/benchmark.h>

#include <random>

#include "jetcons/numerics.hpp"

using namespace jetcons::num;

namespace {

GridConfig config(int cells) {
  GridConfig c;
  c.cells = cells;
  c.closure.f_expr = "(beta1*ln(h) + beta2)*u_x + (beta1*u + beta3)/h*h_x";
  c.closure.g_expr = "(beta1*u + beta3)*u_x + (beta1*ln(h) + beta2)*h_x";
  c.closure.parameters = {{"beta1", 0.1}, {"beta2", 0.05}, {"beta3", 0.02}};
  return c;
}

State state(int m) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> d(-0.1, 0.1);
  State s{std::vector<double>(m), std::vector<double>(m)};
  for (int k = 0; k < m; ++k) {
    s.u[k] = d(g);
    s.h[k] = 1.0 + d(g);
  }
  return s;
}

void BM_RhsSerial(benchmark::State& st) {
  const int m = static_cast<int>(st.range(0));
  Rhs rhs(config(m));
  State s = state(m), out;
  for (auto _ : st) {
    rhs.serial(s, 0.0, out);
    benchmark::DoNotOptimize(out.u.data());
  }
  st.SetItemsProcessed(st.iterations() * m);
}

void BM_RhsParallel(benchmark::State& st) {
  const int m = static_cast<int>(st.range(0));
  Rhs rhs(config(m));
  State s = state(m), out;
  for (auto _ : st) {
    rhs.parallel(s, 0.0, out);
    benchmark::DoNotOptimize(out.u.data());
  }
  st.SetItemsProcessed(st.iterations() * m);
}

}  // namespace

BENCHMARK(BM_RhsSerial)->RangeMultiplier(8)->Range(256, 1 << 20)->UseRealTime();
BENCHMARK(BM_RhsParallel)->RangeMultiplier(8)->Range(256, 1 << 20)->UseRealTime();

BENCHMARK_MAIN();
