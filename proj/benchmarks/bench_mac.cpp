#include "macgof/mac_stat.hpp"
#include "macgof/random.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

using namespace macgof;

PairedSample gaussian_sample(std::size_t n, std::size_t p, Rng& rng) {
    std::normal_distribution<double> z;
    RowMatrix xs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    std::vector<double> y(n);
    for (Eigen::Index i = 0; i < xs.size(); ++i) xs.data()[i] = z(rng);
    for (auto& v : y) v = z(rng);
    return PairedSample::scalar_response(std::move(xs), y);
}

struct Fixture {
    PairedSample a;
    PairedSample b;
    LocationSet locs;
    MacConfig cfg;
};

Fixture make_fixture(std::size_t n, std::size_t k, std::size_t p) {
    Rng rng(42);
    PairedSample a = gaussian_sample(n, p, rng);
    std::normal_distribution<double> z;
    std::vector<double> y(n);
    for (auto& v : y) v = z(rng);
    PairedSample b = a.with_response(y);
    MacConfig cfg;
    cfg.k = k;
    LocationSet locs = select_locations(a, b, cfg, rng);
    return {std::move(a), std::move(b), std::move(locs), cfg};
}

void BM_MacNaive(benchmark::State& state) {
    const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mac_reference(f.a, f.b, f.locs, f.cfg).value);
    }
}

void BM_MacIndexed(benchmark::State& state) {
    const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mac(f.a, f.b, f.locs, f.cfg).value);
    }
}

// Bootstrap path: reference counts cached, only the response changes.
void BM_MacSharedCovariates(benchmark::State& state) {
    const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
    const MacEvaluator evaluator(f.a, f.locs, f.cfg.pair_ordering);
    const std::vector<double> ys = f.b.response();
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluator.against_response(ys).value);
    }
}

}  // namespace

BENCHMARK(BM_MacNaive)->Args({100, 50})->Args({200, 100})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MacIndexed)->Args({100, 50})->Args({200, 100})->Args({800, 50})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MacSharedCovariates)->Args({100, 50})->Args({200, 100})->Args({400, 100})->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
