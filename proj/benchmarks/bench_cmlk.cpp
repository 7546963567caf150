#include <benchmark/benchmark.h>

#include "cmlk/arith.hpp"
#include "cmlk/modforms.hpp"
#include "cmlk/quatorders.hpp"
#include "cmlk/sieve.hpp"

using namespace cmlk;

namespace {

gross_form gross11(order_type t) {
  return make_gross_form(build_order(11, 3, 1, t));
}

void BM_theta_sweep(benchmark::State& state) {
  ternary_form f{{3, 15, 15, -2, 2, 14}};
  const long long limit = state.range(0);
  for (auto _ : state) {
    theta_series t = compute_theta(f, limit);
    benchmark::DoNotOptimize(t.coeff.data());
  }
  state.SetItemsProcessed(state.iterations() * limit);
}
BENCHMARK(BM_theta_sweep)->Arg(10000)->Arg(100000)->Arg(1000000);

void BM_precompute_sections(benchmark::State& state) {
  gross_form g = gross11(order_type::I);
  const long long m = state.range(0);
  for (auto _ : state) {
    section_sets s = precompute_sections(g, m);
    benchmark::DoNotOptimize(s.even.words().data());
  }
}
BENCHMARK(BM_precompute_sections)->Arg(100000)->Arg(1000000)->Arg(10000000);

void BM_sieve_scan(benchmark::State& state) {
  gross_form g = gross11(order_type::II);
  const long long n = state.range(0);
  const long long m = std::min<long long>(n, 1000000);
  section_sets s = precompute_sections(g, m);
  for (auto _ : state) {
    exception_report r =
        compute_exceptions(g, n, m, exception_filter::all_eligible, 1, &s);
    benchmark::DoNotOptimize(r.exceptions.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_sieve_scan)->Arg(1000000)->Arg(10000000)->Unit(benchmark::kMillisecond);

void BM_is_represented(benchmark::State& state) {
  ternary_form f{{4, 11, 12, 0, 4, 0}};
  long long n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_represented(f, n));
  }
}
BENCHMARK(BM_is_represented)->Arg(9999996)->Arg(99999996);

void BM_hurwitz_table(benchmark::State& state) {
  const long long bound = state.range(0);
  for (auto _ : state) {
    hurwitz_table t(bound);
    benchmark::DoNotOptimize(t.sixths(3));
  }
}
BENCHMARK(BM_hurwitz_table)->Arg(10000)->Arg(100000);

void BM_eta_product(benchmark::State& state) {
  const long long n = state.range(0);
  for (auto _ : state) {
    newform_coefficients c = eta_product_level11(n);
    benchmark::DoNotOptimize(c.a.data());
  }
}
BENCHMARK(BM_eta_product)->Arg(4000)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
