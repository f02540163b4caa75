#include <random>

#include <benchmark/benchmark.h>

#include "rydgan/kernels.hpp"
#include "rydgan/training.hpp"

using namespace rydgan;

namespace {

GeneratorParams bench_params() {
    TrainConfig c;
    auto p = initial_params(c, PulseShape::gaussian, PulseShape::triangle);
    p.steps_per_us = 200;
    return p;
}

RowMatrix random_images(int rows) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RowMatrix m(rows, 784);
    for (auto& v : m.reshaped()) v = u(rng);
    return m;
}

template <bool Parallel>
void BM_GenerateBatch(benchmark::State& state) {
    const auto params = bench_params();
    const auto seeds = draw_seeds(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        auto out = Parallel ? kernels::parallel::generate_batch(params, seeds, ExactMode{})
                            : kernels::serial::generate_batch(params, seeds, ExactMode{});
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Covariance(benchmark::State& state) {
    const RowMatrix data = random_images(static_cast<int>(state.range(0)));
    const Eigen::VectorXd mean = data.colwise().mean().transpose();
    for (auto _ : state) {
        auto c = Parallel ? kernels::parallel::covariance(data, mean) : kernels::serial::covariance(data, mean);
        benchmark::DoNotOptimize(c.data());
    }
}

template <bool Parallel>
void BM_Variation(benchmark::State& state) {
    const RowMatrix data = random_images(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto v = Parallel ? kernels::parallel::variation_scores(data) : kernels::serial::variation_scores(data);
        benchmark::DoNotOptimize(v.data());
    }
}

}  // namespace

BENCHMARK(BM_GenerateBatch<false>)->Name("generate_batch/serial")->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateBatch<true>)->Name("generate_batch/parallel")->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Covariance<false>)->Name("covariance/serial")->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Covariance<true>)->Name("covariance/parallel")->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Variation<false>)->Name("variation/serial")->Arg(1000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Variation<true>)->Name("variation/parallel")->Arg(1000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
