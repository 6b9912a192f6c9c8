// Serial vs OpenMP kernels: arc ratio search, fixed-length window max and
// the negative-cycle detector.
#include "korenblum/feasibility.hpp"
#include "korenblum/kernels.hpp"
#include "korenblum/spec_parse.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

namespace kk = korenblum::kernels;

namespace {

std::vector<double> prefix(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> G(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) G[j] = G[j - 1] + u(rng);
  return G;
}

std::vector<double> weights(std::size_t n) {
  std::vector<double> w(n + 1, 1.0);
  for (std::size_t L = 1; L <= n; ++L) {
    const double t = static_cast<double>(L) / n;
    w[L] = t * std::sqrt(2.0 + std::log(1 / t));
  }
  return w;
}

template <class F>
void ratio(benchmark::State& st, F f) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto G = prefix(n);
  const auto w = weights(n);
  for (auto _ : st) benchmark::DoNotOptimize(f(G, w));
  st.SetComplexityN(st.range(0));
}

template <class F>
void window(benchmark::State& st, F f) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto G = prefix(n);
  for (auto _ : st) {
    for (std::size_t L = 1; L <= n; L *= 2) benchmark::DoNotOptimize(f(G, L));
  }
}

template <class F>
void negcycle(benchmark::State& st, F f) {
  const auto mu = korenblum::parse_premeasure("atom:0,1");
  const auto lambda = korenblum::Majorant::log_power(0.5);
  // Large M keeps the table feasible so every row is relaxed.
  const auto b = korenblum::BTable::from_premeasure(mu, lambda, static_cast<int>(st.range(0)), 100.0, 1.0, 1e4);
  for (auto _ : st) benchmark::DoNotOptimize(f(b).feasible);
}

}  // namespace

BENCHMARK_CAPTURE(ratio, serial, kk::dyadic_ratio_max_serial)->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK_CAPTURE(ratio, parallel, kk::dyadic_ratio_max_parallel)->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK_CAPTURE(window, serial, kk::window_max_serial)->RangeMultiplier(16)->Range(1 << 12, 1 << 20);
BENCHMARK_CAPTURE(window, parallel, kk::window_max_parallel)->RangeMultiplier(16)->Range(1 << 12, 1 << 20);
BENCHMARK_CAPTURE(negcycle, serial, korenblum::feasible_negcycle_serial)->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK_CAPTURE(negcycle, parallel, korenblum::feasible_negcycle)->RangeMultiplier(4)->Range(256, 4096);

BENCHMARK_MAIN();
