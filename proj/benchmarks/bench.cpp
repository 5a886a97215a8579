#include <benchmark/benchmark.h>

#include <random>

#include "flc/banded.hpp"
#include "flc/geometry.hpp"
#include "flc/lower_norm.hpp"
#include "flc/models.hpp"
#include "flc/pseudospectrum.hpp"

namespace {

flc::HermitianBand<double> laplacian_gram(std::size_t n, std::size_t b) {
    flc::HermitianBand<double> g(n, b);
    for (std::size_t i = 0; i < n; ++i) {
        g.at(i, 0) = 6.0;
        if (i >= 1) g.at(i, 1) = -4.0;
        if (b >= 2 && i >= 2) g.at(i, 2) = 1.0;
    }
    return g;
}

void BM_BandedCholesky(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto b = static_cast<std::size_t>(state.range(1));
    auto g = laplacian_gram(n, b);
    std::vector<double> factor;
    for (auto _ : state) benchmark::DoNotOptimize(g.cholesky(1e-3, 1e-12, factor));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BandedCholesky)->Args({1 << 10, 2})->Args({1 << 14, 2})->Args({1 << 14, 8})->Args({1 << 17, 2});

void BM_EpsilonL(benchmark::State& state) {
    const auto op = flc::make_operator(flc::builtin_model(state.range(1) ? "fibonacci" : "free1d"));
    flc::LowerNormEngine engine(op);
    const double L = static_cast<double>(state.range(0));
    engine.sections(L);
    for (auto _ : state) benchmark::DoNotOptimize(engine.epsilon(L, flc::Complex(1.3, 0.2), 1e-3));
}
BENCHMARK(BM_EpsilonL)->Args({64, 0})->Args({1024, 0})->Args({64, 1})->Args({256, 1});

void BM_CoveringGrid(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(flc::covering_grid(4.5, 1.0 / state.range(0)));
}
BENCHMARK(BM_CoveringGrid)->Arg(16)->Arg(64);

void BM_Hausdorff(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<flc::Complex> a(state.range(0)), b(state.range(0));
    for (auto& z : a) z = {u(rng), u(rng)};
    for (auto& z : b) z = {u(rng), u(rng)};
    for (auto _ : state) benchmark::DoNotOptimize(flc::euclidean_hausdorff(a, b));
}
BENCHMARK(BM_Hausdorff)->Arg(256)->Arg(4096);

void BM_ClassifyGrid(benchmark::State& state) {
    const auto op = flc::make_operator(flc::builtin_model("free1d"));
    flc::EvaluationOptions opts;
    opts.deterministic = true;
    for (auto _ : state) benchmark::DoNotOptimize(flc::classify_grid(op, 0.5, 0.125, opts));
}
BENCHMARK(BM_ClassifyGrid)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
