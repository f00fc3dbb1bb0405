// Serial vs OpenMP for the embarrassingly parallel kernels.
#include <benchmark/benchmark.h>

#include "crlab/cr_dim.hpp"
#include "crlab/parallel.hpp"
#include "crlab/vector_field.hpp"

using namespace crlab;

namespace {

const HypersurfaceModel& family_model() {
  static const HypersurfaceModel m = build_family(draw_family(1));
  return m;
}

void BM_assemble_serial(benchmark::State& st) {
  const auto& m = family_model();
  const int n = static_cast<int>(st.range(0));
  const auto grid = CollocationGrid::standard(m, n);
  for (auto _ : st) benchmark::DoNotOptimize(assemble_serial(m, n, grid).matrix.data());
}

void BM_assemble_parallel(benchmark::State& st) {
  const auto& m = family_model();
  const int n = static_cast<int>(st.range(0));
  const auto grid = CollocationGrid::standard(m, n);
  st.counters["threads"] = max_threads();
  for (auto _ : st) benchmark::DoNotOptimize(assemble(m, n, grid).matrix.data());
}

void BM_identity_serial(benchmark::State& st) {
  const auto& m = family_model();
  const auto grid = default_annulus(m, static_cast<int>(st.range(0)), 32);
  for (auto _ : st) benchmark::DoNotOptimize(identity_grid_serial(*m.family(), grid, {-0.1, 0.0, 0.1}).data());
}

void BM_identity_parallel(benchmark::State& st) {
  const auto& m = family_model();
  const auto grid = default_annulus(m, static_cast<int>(st.range(0)), 32);
  st.counters["threads"] = max_threads();
  for (auto _ : st) benchmark::DoNotOptimize(identity_grid(*m.family(), grid, {-0.1, 0.0, 0.1}).data());
}

void BM_sample_serial(benchmark::State& st) {
  const auto& m = family_model();
  const auto grid = default_annulus(m, static_cast<int>(st.range(0)), 64);
  for (auto _ : st) benchmark::DoNotOptimize(sample_points_serial(m, grid, {0.0, 0.1}).data());
}

void BM_sample_parallel(benchmark::State& st) {
  const auto& m = family_model();
  const auto grid = default_annulus(m, static_cast<int>(st.range(0)), 64);
  st.counters["threads"] = max_threads();
  for (auto _ : st) benchmark::DoNotOptimize(sample_points(m, grid, {0.0, 0.1}).data());
}

}  // namespace

BENCHMARK(BM_assemble_serial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assemble_parallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_identity_serial)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_identity_parallel)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample_serial)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample_parallel)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
