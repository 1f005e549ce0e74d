#include <benchmark/benchmark.h>

#include <random>

#include "rmtinit/goe.hpp"
#include "rmtinit/kmeans.hpp"
#include "rmtinit/landscape.hpp"
#include "rmtinit/network.hpp"
#include "rmtinit/painleve.hpp"
#include "rmtinit/rmt_init.hpp"

using namespace rmtinit;

namespace {

const PainleveSolution& table() {
    static const PainleveSolution sol = solve_painleve_ii(PainleveGridSpec{});
    return sol;
}

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    return m;
}

void BM_PainleveSolve(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(solve_painleve_ii(-10.0, 8.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PainleveSolve)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_HnArgmax(benchmark::State& state) {
    const auto& sol = table();
    for (auto _ : state) benchmark::DoNotOptimize(h_n_argmax_index(sol, static_cast<int>(state.range(0)), 0.8));
}
BENCHMARK(BM_HnArgmax)->Arg(16)->Arg(256);

void BM_SaturationCurve(benchmark::State& state) {
    const auto& sol = table();
    const auto grid = default_ratio_grid();
    for (auto _ : state) benchmark::DoNotOptimize(saturation_curve(sol, 256, grid));
}
BENCHMARK(BM_SaturationCurve)->Unit(benchmark::kMicrosecond);

void BM_GoeEigenvalues(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(goe_max_eigenvalue(sample_goe(static_cast<int>(state.range(0)), ++seed)));
}
BENCHMARK(BM_GoeEigenvalues)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
    const auto x = gaussian(300, 64, 7);
    for (auto _ : state) benchmark::DoNotOptimize(kmeans(x, static_cast<int>(state.range(0)), 11));
}
BENCHMARK(BM_KMeans)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_ErrorAndGradient(benchmark::State& state) {
    Network net;
    net.layers = {gaussian(64, 15, 1) * 0.1, gaussian(15, 10, 2) * 0.1};
    const auto x = gaussian(150, 64, 3);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(150, 10);
    for (int i = 0; i < 150; ++i) t(i, i % 10) = 1;
    Eigen::VectorXd g;
    for (auto _ : state) benchmark::DoNotOptimize(error_and_gradient(net, x, t, g));
}
BENCHMARK(BM_ErrorAndGradient)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
