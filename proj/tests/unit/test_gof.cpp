#include "macgof/gof.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>
#include <random>
#include <stdexcept>

using namespace macgof;

namespace {

GofConfig quick_config(std::uint64_t seed) {
    GofConfig cfg;
    cfg.B = 10;
    cfg.M = 99;
    cfg.mac.k = 20;
    cfg.seed = seed;
    return cfg;
}

PairedSample linear_data(std::size_t n, std::uint64_t seed, bool curved) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif;
    std::normal_distribution<double> normal;
    RowMatrix xs(static_cast<Eigen::Index>(n), 1);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = unif(gen);
        xs(static_cast<Eigen::Index>(i), 0) = x;
        y[i] = (curved ? 10.0 * (x - 0.2) * (x - 0.2) : 4.7 * x) + normal(gen);
    }
    return PairedSample::scalar_response(xs, y);
}

PairedSample poisson_data(std::size_t n, std::uint64_t seed, std::vector<double>& means) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    RowMatrix xs(static_cast<Eigen::Index>(n), 1);
    std::vector<double> y(n);
    means.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = normal(gen);
        xs(static_cast<Eigen::Index>(i), 0) = x;
        means[i] = std::exp(1.0 + 0.5 * x);
        y[i] = static_cast<double>(std::poisson_distribution<int>(means[i])(gen));
    }
    return PairedSample::scalar_response(xs, y);
}

}  // namespace

TEST(GofTest, ReportInvariants) {
    const auto data = linear_data(60, 1, false);
    const auto report = gof_test(data, ModelSpec{}, quick_config(3));
    ASSERT_EQ(report.T_b.size(), 10u);
    EXPECT_DOUBLE_EQ(report.T_B, std::accumulate(report.T_b.begin(), report.T_b.end(), 0.0) / 10.0);
    EXPECT_GT(report.p_value, 0.0);
    EXPECT_LE(report.p_value, 1.0);
    EXPECT_EQ(report.null.size(), 99u);
    EXPECT_EQ(report.k, 20u);
    EXPECT_EQ(report.config.B_inner, 10u);
    EXPECT_EQ(report.null_summary.M, 99u);
    EXPECT_EQ(report.rejected, report.p_value <= 0.05);
    EXPECT_FALSE(report.null_from_cache);
}

TEST(GofTest, Reproducible) {
    const auto data = linear_data(50, 2, true);
    const auto a = gof_test(data, ModelSpec{}, quick_config(9));
    const auto b = gof_test(data, ModelSpec{}, quick_config(9));
    EXPECT_EQ(a.T_b, b.T_b);
    EXPECT_EQ(a.null.draws, b.null.draws);
    EXPECT_EQ(a.p_value, b.p_value);
    const auto c = gof_test(data, ModelSpec{}, quick_config(10));
    EXPECT_NE(a.T_b, c.T_b);
}

TEST(GofTest, ThreadCountDoesNotChangeReport) {
    const auto data = linear_data(50, 3, false);
    const unsigned saved = worker_threads();
    set_worker_threads(1);
    const auto one = gof_test(data, ModelSpec{}, quick_config(4));
    set_worker_threads(4);
    const auto four = gof_test(data, ModelSpec{}, quick_config(4));
    set_worker_threads(saved);
    EXPECT_EQ(one.T_b, four.T_b);
    EXPECT_EQ(one.null.draws, four.null.draws);
}

TEST(GofTest, CacheIsReused) {
    const auto dir = std::filesystem::temp_directory_path() / "macgof-gof-cache-test";
    std::filesystem::remove_all(dir);
    const NullCache cache(dir);
    const auto data = linear_data(40, 4, false);
    const auto first = gof_test(data, ModelSpec{}, quick_config(5), &cache);
    const auto second = gof_test(data, ModelSpec{}, quick_config(5), &cache);
    EXPECT_FALSE(first.null_from_cache);
    EXPECT_TRUE(second.null_from_cache);
    EXPECT_EQ(first.null.draws, second.null.draws);
    EXPECT_EQ(first.p_value, second.p_value);
    auto other = quick_config(5);
    other.mac.k = 21;
    EXPECT_FALSE(gof_test(data, ModelSpec{}, other, &cache).null_from_cache);
    std::filesystem::remove_all(dir);
}

TEST(GofTest, RejectsVectorResponseAndBadConfig) {
    std::mt19937_64 gen(5);
    const auto data = oracle::random_sample(30, 1, 2, gen);
    EXPECT_THROW((void)gof_test(data, ModelSpec{}, quick_config(1)), std::invalid_argument);
    const auto scalar = linear_data(30, 5, false);
    auto cfg = quick_config(1);
    cfg.M = 50;
    EXPECT_THROW((void)gof_test(scalar, ModelSpec{}, cfg), std::invalid_argument);
    cfg = quick_config(1);
    cfg.B = 0;
    EXPECT_THROW((void)gof_test(scalar, ModelSpec{}, cfg), std::invalid_argument);
}

TEST(GofTest, BadModelRejectedGoodModelNot) {
    auto cfg = quick_config(6);
    cfg.B = 20;
    cfg.mac.k = 50;
    const auto bad = gof_test(linear_data(200, 6, true), ModelSpec{}, cfg);
    EXPECT_LE(bad.p_value, 0.05);
    const auto good = gof_test(linear_data(200, 7, false), ModelSpec{}, cfg);
    EXPECT_GT(good.p_value, 0.05);
}

TEST(GofTest, InterceptOnlyCalibration) {
    // Data from an intercept-only Gaussian model; p-values over repeated runs should look uniform.
    ModelSpec spec;
    spec.feature_map = FeatureMap::custom({}, true);
    std::vector<double> p;
    for (std::uint64_t r = 0; r < 60; ++r) {
        std::mt19937_64 gen(1000 + r);
        std::normal_distribution<double> normal;
        RowMatrix xs(30, 1);
        std::vector<double> y(30);
        for (int i = 0; i < 30; ++i) {
            xs(i, 0) = normal(gen);
            y[static_cast<std::size_t>(i)] = 2.0 + normal(gen);
        }
        auto cfg = quick_config(r);
        cfg.mac.k = 15;
        cfg.refit_null = true;
        p.push_back(gof_test(PairedSample::scalar_response(xs, y), spec, cfg).p_value);
    }
    std::sort(p.begin(), p.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        ks = std::max({ks, (i + 1.0) / p.size() - p[i], p[i] - static_cast<double>(i) / p.size()});
    }
    // Critical KS distance for 60 draws at the 1% level is about 0.21.
    EXPECT_LT(ks, 0.21);
}

TEST(GofExternal, ZeroNoiseGivesZeroStatistics) {
    const auto data = linear_data(40, 8, false);
    const auto y = data.response();
    const auto report =
        gof_test_external(data, y, ExternalNoise{ExternalNoise::Kind::None, std::nullopt}, quick_config(2));
    for (double t : report.T_b) EXPECT_EQ(t, 0.0);
    EXPECT_EQ(report.T_B, 0.0);
    EXPECT_DOUBLE_EQ(report.p_value, 1.0);
}

TEST(GofExternal, PoissonMeansCorrectAndShifted) {
    std::vector<double> means;
    const auto data = poisson_data(200, 9, means);
    auto cfg = quick_config(7);
    cfg.B = 20;
    cfg.mac.k = 50;
    const ExternalNoise poisson{ExternalNoise::Kind::Poisson, std::nullopt};
    EXPECT_GT(gof_test_external(data, means, poisson, cfg).p_value, 0.05);
    auto shifted = means;
    for (auto& m : shifted) m += 5.0;
    EXPECT_LE(gof_test_external(data, shifted, poisson, cfg).p_value, 0.05);
}

TEST(GofExternal, Errors) {
    const auto data = linear_data(40, 10, false);
    const ExternalNoise gaussian{};
    EXPECT_THROW((void)gof_test_external(data, std::vector<double>(39, 0.0), gaussian, quick_config(1)),
                 std::invalid_argument);
    auto cfg = quick_config(1);
    cfg.refit_null = true;
    EXPECT_THROW((void)gof_test_external(data, data.response(), gaussian, cfg), std::invalid_argument);
    const ExternalNoise bernoulli{ExternalNoise::Kind::Bernoulli, std::nullopt};
    EXPECT_THROW((void)gof_test_external(data, std::vector<double>(40, 1.5), bernoulli, quick_config(1)),
                 std::invalid_argument);
    EXPECT_EQ(parse_external_noise("poisson").kind, ExternalNoise::Kind::Poisson);
    EXPECT_THROW((void)parse_external_noise("cauchy"), std::invalid_argument);
}
