#include "macgof/models.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

namespace {

using namespace macgof;

RowMatrix covariates(std::size_t n, std::size_t p, Rng& rng) {
    std::normal_distribution<double> z;
    RowMatrix xs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < xs.size(); ++i) xs.data()[i] = z(rng);
    return xs;
}

void BM_FitOls(benchmark::State& state) {
    Rng rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const RowMatrix xs = covariates(n, 5, rng);
    std::normal_distribution<double> z;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = xs.row(static_cast<Eigen::Index>(i)).sum() + z(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_ols(xs, y, FeatureMap::linear()).dispersion);
    }
}

void BM_FitLogistic(benchmark::State& state) {
    Rng rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const RowMatrix xs = covariates(n, 3, rng);
    std::uniform_real_distribution<double> u;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double eta = 0.5 * xs.row(static_cast<Eigen::Index>(i)).sum();
        y[i] = u(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_glm(xs, y, Family::Logistic, FeatureMap::linear()).theta_hat[0]);
    }
}

void BM_ParametricBootstrap(benchmark::State& state) {
    Rng rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const RowMatrix xs = covariates(n, 2, rng);
    std::normal_distribution<double> z;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = xs(static_cast<Eigen::Index>(i), 0) + z(rng);
    const FittedModel fit = fit_ols(xs, y, FeatureMap::linear());
    for (auto _ : state) {
        benchmark::DoNotOptimize(bootstrap_response(fit, xs, BootstrapKind::Parametric, rng).data());
    }
}

}  // namespace

BENCHMARK(BM_FitOls)->Arg(200)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FitLogistic)->Arg(200)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ParametricBootstrap)->Arg(200)->Unit(benchmark::kMicrosecond);
