#include <benchmark/benchmark.h>

#include "amb/domain.hpp"
#include "amb/gray.hpp"
#include "amb/opsem.hpp"
#include "amb/stdlib.hpp"
#include "amb/typesys.hpp"

namespace amb {
namespace {


// Reductions to a d.w.h.n.f. of gtos on a Gray stream, per scheduler.
void BM_StepHead(benchmark::State& state) {
  Program m = app(stdlib::get("gtos"), gray::gray_program({{1, 1}, {1, 1}, {-1, 1}}));
  opsem::Schedule s = state.range(0) ? opsem::Schedule::seeded(3) : opsem::Schedule::round_robin();
  for (auto _ : state) benchmark::DoNotOptimize(opsem::steps_to_dwhnf(m, s, 2000));
}
BENCHMARK(BM_StepHead)->Arg(0)->Arg(1);

void BM_GtosRun(benchmark::State& state) {
  gray::GtosOptions o;
  o.digits = static_cast<std::size_t>(state.range(0));
  o.schedule = opsem::Schedule::seeded(1);
  for (auto _ : state) benchmark::DoNotOptimize(gray::gtos_run(gray::Rational(1, 3), o));
}
BENCHMARK(BM_GtosRun)->Arg(4)->Arg(8)->Arg(16);

void BM_DataSet(benchmark::State& state) {
  Program m = app(app(stdlib::get("mapamb"), stdlib::get("f_example")), amb(numeral(0), numeral(1)));
  auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(domain::data_set(domain::denote_fuel(m, 100000, depth), depth));
}
BENCHMARK(BM_DataSet)->Arg(4)->Arg(16);

// Equirecursive equality between a stream type and its one-step unfolding.
void BM_TypeEqual(benchmark::State& state) {
  Type s = fix_t("a", amb_t(prod_t(three_t(), tvar("a"))));
  Type unfolded = amb_t(prod_t(three_t(), s));
  for (auto _ : state) benchmark::DoNotOptimize(typesys::type_equal(s, unfolded));
}
BENCHMARK(BM_TypeEqual);

void BM_CheckStdlib(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(typesys::check_module(stdlib::module()));
}
BENCHMARK(BM_CheckStdlib);

}  // namespace
}  // namespace amb

BENCHMARK_MAIN();
