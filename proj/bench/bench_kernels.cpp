// Serial reference kernels against their OpenMP versions.
// Thread count follows OMP_NUM_THREADS / BEREZIN_THREADS.
#include <benchmark/benchmark.h>

#include "berezin/berezin.hpp"
#include "berezin/fuzz.hpp"

using namespace berezin;

namespace {

const KernelModel kHardy = KernelModel::hardy(15, 0.95);

ComplexMatrix operand() { return gen_matrix({GeneratorKind::General, kHardy.dimension(), 1.0, 1}); }

template <auto Kernel>
void grid_kernel(benchmark::State& state) {
  const ComplexMatrix a = operand();
  const OmegaGrid grid = default_grid(kHardy, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(kHardy, a, grid));
  state.counters["points"] = static_cast<double>(grid.points.size());
}

void symbol_parallel(benchmark::State& s) { grid_kernel<&berezin_set_sample>(s); }
void symbol_serial(benchmark::State& s) { grid_kernel<&reference::berezin_set_sample>(s); }
void number_parallel(benchmark::State& s) { grid_kernel<&grid_berezin_number>(s); }
void number_serial(benchmark::State& s) { grid_kernel<&reference::grid_berezin_number>(s); }
void norm_parallel(benchmark::State& s) { grid_kernel<&grid_berezin_norm>(s); }
void norm_serial(benchmark::State& s) { grid_kernel<&reference::grid_berezin_norm>(s); }

SuiteRequest suite_request() {
  SuiteRequest req;
  req.trials = 5;
  req.dims = {2, 4};
  return req;
}

void suite_parallel(benchmark::State& state) {
  const SuiteRequest req = suite_request();
  for (auto _ : state) benchmark::DoNotOptimize(run_suite(req).evaluations);
}

void suite_serial(benchmark::State& state) {
  const SuiteRequest req = suite_request();
  for (auto _ : state) benchmark::DoNotOptimize(reference::run_suite(req).evaluations);
}

}  // namespace

BENCHMARK(symbol_serial)->Arg(0)->Arg(2)->Unit(benchmark::kMicrosecond);
BENCHMARK(symbol_parallel)->Arg(0)->Arg(2)->Unit(benchmark::kMicrosecond);
BENCHMARK(number_serial)->Arg(0)->Arg(2)->Unit(benchmark::kMicrosecond);
BENCHMARK(number_parallel)->Arg(0)->Arg(2)->Unit(benchmark::kMicrosecond);
BENCHMARK(norm_serial)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(norm_parallel)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(suite_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(suite_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
