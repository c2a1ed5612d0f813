#include <benchmark/benchmark.h>

#include "vvf/dimension.hpp"
#include "vvf/ifs.hpp"
#include "vvf/raster.hpp"
#include "vvf/rng.hpp"
#include "vvf/vvar.hpp"

namespace {

void BM_HutchinsonStep(benchmark::State& state) {
    const vvf::Ifs ifs = vvf::preset("sierpinski-half").ifss[0];
    const int res = static_cast<int>(state.range(0));
    const vvf::Raster square = vvf::Raster::full_square(res, res);
    for (auto _ : state) {
        vvf::Raster out = vvf::hutchinson_step(ifs, square);
        benchmark::DoNotOptimize(out.cells.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(res) * res);
}
BENCHMARK(BM_HutchinsonStep)->Arg(256)->Arg(512)->Arg(1024);

void BM_ChaosGame(benchmark::State& state) {
    const vvf::Ifs ifs = vvf::preset("sierpinski-half").ifss[0];
    const std::int64_t points = state.range(0);
    for (auto _ : state) {
        vvf::Raster out = vvf::chaos_game(ifs, points, 50, 7, 512, 512);
        benchmark::DoNotOptimize(out.cells.data());
    }
    state.SetItemsProcessed(state.iterations() * points);
}
BENCHMARK(BM_ChaosGame)->Arg(100000)->Arg(1000000);

void BM_VvarStep(benchmark::State& state) {
    const vvf::SuperIfs s = vvf::preset("up-down");
    const int res = static_cast<int>(state.range(0));
    const vvf::BufferState initial = vvf::initial_state(s, res, res, vvf::RasterKind::set);
    // A converged state is the realistic workload.
    const vvf::RunResult warm = vvf::run(s, initial, 10, 3);
    vvf::Rng rng(9);
    for (auto _ : state) {
        const vvf::TransitionRecord rec = vvf::sample_transition(s, rng);
        vvf::BufferState next = vvf::step(warm.final_state, rec, s);
        benchmark::DoNotOptimize(next.buffers.data());
    }
}
BENCHMARK(BM_VvarStep)->Arg(256)->Arg(512);

void BM_HausdorffDistance(benchmark::State& state) {
    const vvf::Ifs ifs = vvf::preset("sierpinski-half").ifss[0];
    const int res = static_cast<int>(state.range(0));
    const vvf::Raster a = vvf::backward_process(ifs, vvf::Raster::full_square(res, res), 8);
    const vvf::Raster b = vvf::backward_process(ifs, vvf::Raster::full_square(res, res), 9);
    for (auto _ : state) benchmark::DoNotOptimize(vvf::hausdorff_distance(a, b));
}
BENCHMARK(BM_HausdorffDistance)->Arg(512)->Arg(1024);

void BM_PressureChain(benchmark::State& state) {
    vvf::SuperIfs s = vvf::preset("sierpinski-pair");
    s.variability = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const auto est = vvf::pressure_estimate(s, 1.24, 2000, 1, 21);
        benchmark::DoNotOptimize(est.gamma_hat);
    }
    state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_PressureChain)->Arg(1)->Arg(2)->Arg(5);

void BM_SolveDimension(benchmark::State& state) {
    vvf::SuperIfs s = vvf::preset("sierpinski-pair");
    s.variability = 2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vvf::solve_dimension(s, 1e-3, 1000, 8, 5));
    }
}
BENCHMARK(BM_SolveDimension);

}  // namespace

BENCHMARK_MAIN();
