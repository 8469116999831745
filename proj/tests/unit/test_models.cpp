#include "macgof/errors.hpp"
#include "macgof/models.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

using namespace macgof;

namespace {

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

std::vector<double> bernoulli_response(const RowMatrix& xs, const Eigen::VectorXd& beta, std::mt19937_64& rng) {
    std::vector<double> y(static_cast<std::size_t>(xs.rows()));
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
        const double eta = beta[0] + xs.row(i).dot(beta.tail(xs.cols()));
        y[static_cast<std::size_t>(i)] = std::bernoulli_distribution(1.0 / (1.0 + std::exp(-eta)))(rng) ? 1.0 : 0.0;
    }
    return y;
}

std::vector<double> poisson_response(const RowMatrix& xs, const Eigen::VectorXd& beta, std::mt19937_64& rng) {
    std::vector<double> y(static_cast<std::size_t>(xs.rows()));
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
        const double eta = beta[0] + xs.row(i).dot(beta.tail(xs.cols()));
        y[static_cast<std::size_t>(i)] = static_cast<double>(std::poisson_distribution<int>(std::exp(eta))(rng));
    }
    return y;
}

}  // namespace

TEST(FeatureMap, ParseDescribeRoundTrip) {
    for (const char* spec : {"linear", "poly:3", "interact:2", "custom:x1;x1^2;log(x2)", "linear,nointercept"}) {
        const auto fm = FeatureMap::parse(spec);
        EXPECT_EQ(FeatureMap::parse(fm.describe()), fm) << spec;
    }
    EXPECT_THROW((void)FeatureMap::parse("cubic"), std::invalid_argument);
    EXPECT_EQ(FeatureMap::polynomial(2).width(3), 7u);
    EXPECT_EQ(FeatureMap::with_interactions(2).width(3), 7u);
}

TEST(FitOls, ExactLine) {
    const auto fit = fit_ols(oracle::column({0, 1, 2}), std::vector<double>{1, 3, 5}, FeatureMap::linear());
    EXPECT_NEAR(fit.theta_hat[0], 1.0, 1e-12);
    EXPECT_NEAR(fit.theta_hat[1], 2.0, 1e-12);
    for (double r : fit.residuals) EXPECT_NEAR(r, 0.0, 1e-12);
    EXPECT_NEAR(predict(fit, oracle::column({3}))[0], 7.0, 1e-12);
}

TEST(FitOls, ZeroResponse) {
    std::mt19937_64 rng(1);
    const auto xs = oracle::random_matrix(20, 2, rng, false);
    const auto fit = fit_ols(xs, std::vector<double>(20, 0.0), FeatureMap::linear());
    for (Eigen::Index i = 0; i < fit.theta_hat.size(); ++i) EXPECT_EQ(fit.theta_hat[i], 0.0);
}

TEST(FitOls, MatchesNormalEquations) {
    std::mt19937_64 rng(50);
    std::normal_distribution<double> normal;
    for (int t = 0; t < 20; ++t) {
        const auto xs = oracle::random_matrix(50, 3, rng, false);
        std::vector<double> y(50);
        for (auto& v : y) v = 3.0 * normal(rng) + 1.0;
        const auto fm = FeatureMap::linear();
        const auto fit = fit_ols(xs, y, fm);
        const Eigen::VectorXd expected = oracle::normal_equations(fm.design(xs), y);
        for (Eigen::Index i = 0; i < expected.size(); ++i) EXPECT_NEAR(fit.theta_hat[i], expected[i], 1e-8);
        double rss = 0.0;
        for (double r : fit.residuals) rss += r * r;
        EXPECT_NEAR(fit.dispersion, rss / (50 - 4), 1e-10);
    }
}

TEST(FitOls, ResidualOrthogonality) {
    std::mt19937_64 rng(51);
    const auto xs = oracle::random_matrix(80, 2, rng, false);
    std::normal_distribution<double> normal;
    std::vector<double> y(80);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 100.0 + 5.0 * xs(static_cast<Eigen::Index>(i), 0) + normal(rng);
    const auto fm = FeatureMap::polynomial(2);
    const auto fit = fit_ols(xs, y, fm);
    const Eigen::Map<const Eigen::VectorXd> r(fit.residuals.data(), 80);
    const Eigen::VectorXd g = fm.design(xs).transpose() * r;
    EXPECT_LT(g.cwiseAbs().maxCoeff(), 1e-8 * 80 * 100);
    EXPECT_NEAR(r.sum(), 0.0, 1e-8 * 80);
}

TEST(FitOls, Errors) {
    RowMatrix xs(4, 2);
    xs << 1, 2, 2, 4, 3, 6, 4, 8;
    EXPECT_THROW((void)fit_ols(xs, std::vector<double>{1, 2, 3, 5}, FeatureMap::linear()), NumericalError);
    EXPECT_THROW((void)fit_ols(oracle::column({1, 2}), std::vector<double>{1, 2}, FeatureMap::linear()),
                 std::invalid_argument);
    try {
        (void)fit_ols(xs, std::vector<double>{1, 2, 3, 5}, FeatureMap::linear());
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("collinear columns: x"), std::string::npos);
    }
}

TEST(FitGlm, LogisticBinaryCovariateClosedForm) {
    const auto xs = oracle::column({0, 0, 0, 0, 1, 1, 1, 1});
    const std::vector<double> y{1, 0, 0, 0, 1, 1, 1, 0};
    const auto fit = fit_glm(xs, y, Family::Logistic, FeatureMap::linear());
    EXPECT_NEAR(fit.theta_hat[0], std::log(1.0 / 3.0), 1e-8);
    EXPECT_NEAR(fit.theta_hat[1], 2.0 * std::log(3.0), 1e-8);
}

TEST(FitGlm, PoissonInterceptOnly) {
    const auto fit = fit_glm(oracle::column({5, 6, 7}), std::vector<double>{1, 2, 3}, Family::Poisson,
                             FeatureMap::custom({}, true));
    EXPECT_NEAR(fit.theta_hat[0], std::log(2.0), 1e-10);
    for (double m : predict(fit, oracle::column({0, 1, 2}))) EXPECT_NEAR(m, 2.0, 1e-9);
}

TEST(FitGlm, ZeroCoefficientsPredictHalf) {
    FittedModel fit;
    fit.family = Family::Logistic;
    fit.theta_hat = Eigen::VectorXd::Zero(2);
    for (double m : predict(fit, oracle::column({-3, 0, 4}))) EXPECT_DOUBLE_EQ(m, 0.5);
}

TEST(FitGlm, ScoreMatchesFiniteDifferences) {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> normal;
    for (Family family : {Family::Logistic, Family::Poisson}) {
        for (int t = 0; t < 10; ++t) {
            const auto xs = oracle::random_matrix(30, 2, rng, false);
            Eigen::VectorXd beta(3);
            beta << 0.3, 0.5, -0.4;
            const auto y = family == Family::Logistic ? bernoulli_response(xs, beta, rng)
                                                      : poisson_response(xs, beta, rng);
            const auto design = FeatureMap::linear().design(xs);
            Eigen::VectorXd theta(3);
            theta << normal(rng) * 0.5, normal(rng) * 0.5, normal(rng) * 0.5;
            const Eigen::VectorXd score = glm_score(family, design, y, theta);
            for (Eigen::Index j = 0; j < 3; ++j) {
                const double h = 1e-5;
                Eigen::VectorXd up = theta, down = theta;
                up[j] += h;
                down[j] -= h;
                const double fd =
                    (glm_log_likelihood(family, design, y, up) - glm_log_likelihood(family, design, y, down)) / (2 * h);
                EXPECT_NEAR(score[j], fd, 1e-4 * std::max(1.0, std::abs(fd)));
            }
        }
    }
}

TEST(FitGlm, ConvergesToScoreRootWithMonotoneDeviance) {
    std::mt19937_64 rng(62);
    for (Family family : {Family::Logistic, Family::Poisson}) {
        for (int t = 0; t < 10; ++t) {
            const auto xs = oracle::random_matrix(100, 2, rng, false);
            Eigen::VectorXd beta(3);
            beta << 0.2, 0.7, -0.5;
            const auto y = family == Family::Logistic ? bernoulli_response(xs, beta, rng)
                                                      : poisson_response(xs, beta, rng);
            const auto fit = fit_glm(xs, y, family, FeatureMap::linear());
            const auto score = glm_score(family, FeatureMap::linear().design(xs), y, fit.theta_hat);
            EXPECT_LE(score.norm(), 1e-8);
            const auto& trace = fit.diagnostics.deviance_trace;
            ASSERT_FALSE(trace.empty());
            for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1] + 1e-12);
        }
    }
}

TEST(FitGlm, Errors) {
    const auto xs = oracle::column({-2, -1, 1, 2});
    EXPECT_THROW((void)fit_glm(xs, std::vector<double>{0, 0, 1, 1}, Family::Logistic, FeatureMap::linear()),
                 NumericalError);
    EXPECT_THROW((void)fit_glm(xs, std::vector<double>{0, 2, 1, 1}, Family::Logistic, FeatureMap::linear()),
                 std::invalid_argument);
    EXPECT_THROW((void)fit_glm(xs, std::vector<double>{0, 1.5, 1, 1}, Family::Poisson, FeatureMap::linear()),
                 std::invalid_argument);
}

TEST(FitGlm, ExampleSixShapeDirectional) {
    // Mean over datasets of the linear-logit fit to logit = 2X + X^2 with X ~ N(0, 1).
    Rng rng(66);
    std::normal_distribution<double> normal;
    double b0 = 0.0;
    double b1 = 0.0;
    const int reps = 50;
    for (int r = 0; r < reps; ++r) {
        RowMatrix xs(200, 1);
        std::vector<double> y(200);
        for (int i = 0; i < 200; ++i) {
            const double x = normal(rng);
            xs(i, 0) = x;
            y[static_cast<std::size_t>(i)] =
                std::bernoulli_distribution(1.0 / (1.0 + std::exp(-(2 * x + x * x))))(rng) ? 1.0 : 0.0;
        }
        const auto fit = fit_glm(xs, y, Family::Logistic, FeatureMap::linear());
        b0 += fit.theta_hat[0] / reps;
        b1 += fit.theta_hat[1] / reps;
    }
    EXPECT_GT(b0, 0.0);
    EXPECT_NEAR(b0, 0.5939, 0.25);
    EXPECT_GT(b1, 0.0);
}

TEST(Bootstrap, ZeroResidualsReproduceMeans) {
    const auto xs = oracle::column({0, 1, 2});
    auto fit = fit_ols(xs, std::vector<double>{1, 3, 5}, FeatureMap::linear());
    std::fill(fit.residuals.begin(), fit.residuals.end(), 0.0);
    fit.dispersion = 0.0;
    Rng rng(1);
    const auto mu = predict(fit, xs);
    EXPECT_EQ(bootstrap_response(fit, xs, BootstrapKind::Residual, rng), mu);
    EXPECT_EQ(bootstrap_response(fit, xs, BootstrapKind::Parametric, rng), mu);
}

TEST(Bootstrap, ResidualDrawsComeFromCentredResiduals) {
    std::mt19937_64 gen(70);
    const auto xs = oracle::random_matrix(40, 1, gen, false);
    std::normal_distribution<double> normal;
    std::vector<double> y(40);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::exp(xs(static_cast<Eigen::Index>(i), 0)) + normal(gen);
    const auto fit = fit_ols(xs, y, FeatureMap::linear(false));
    const double centre = mean_of(fit.residuals);
    Rng rng(3);
    const auto ystar = bootstrap_response(fit, xs, BootstrapKind::Residual, rng);
    const auto mu = predict(fit, xs);
    for (std::size_t i = 0; i < ystar.size(); ++i) {
        const double e = ystar[i] - mu[i];
        const bool found = std::any_of(fit.residuals.begin(), fit.residuals.end(),
                                       [&](double r) { return std::abs(r - centre - e) < 1e-9; });
        EXPECT_TRUE(found) << i;
    }
}

TEST(Bootstrap, ResidualRejectedForGlm) {
    const auto xs = oracle::column({0, 1, 2, 3});
    const auto fit = fit_glm(xs, std::vector<double>{1, 2, 2, 5}, Family::Poisson, FeatureMap::linear());
    Rng rng(1);
    EXPECT_THROW((void)bootstrap_response(fit, xs, BootstrapKind::Residual, rng), std::invalid_argument);
}

TEST(Bootstrap, PoissonMeansMatch) {
    const auto xs = oracle::column({0, 1, 2, 3, 4});
    const auto fit = fit_glm(xs, std::vector<double>{1, 2, 2, 5, 7}, Family::Poisson, FeatureMap::linear());
    const auto mu = predict(fit, xs);
    Rng rng(5);
    std::vector<double> sum(mu.size(), 0.0);
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
        const auto y = bootstrap_response(fit, xs, BootstrapKind::Parametric, rng);
        for (std::size_t i = 0; i < y.size(); ++i) sum[i] += y[i];
    }
    for (std::size_t i = 0; i < mu.size(); ++i) {
        EXPECT_NEAR(sum[i] / draws, mu[i], 3.0 * std::sqrt(mu[i] / draws));
    }
}

TEST(Bootstrap, GaussianParametricVariance) {
    std::mt19937_64 gen(71);
    const auto xs = oracle::random_matrix(30, 1, gen, false);
    std::normal_distribution<double> normal;
    std::vector<double> y(30);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 2.0 * xs(static_cast<Eigen::Index>(i), 0) + 1.5 * normal(gen);
    const auto fit = fit_ols(xs, y, FeatureMap::linear());
    const auto mu = predict(fit, xs);
    Rng rng(9);
    double ss = 0.0;
    std::size_t count = 0;
    for (int d = 0; d < 4000; ++d) {
        const auto ystar = bootstrap_response(fit, xs, BootstrapKind::Parametric, rng);
        for (std::size_t i = 0; i < ystar.size(); ++i, ++count) ss += (ystar[i] - mu[i]) * (ystar[i] - mu[i]);
    }
    // Relative standard error of a variance estimate from N normal draws is sqrt(2 / N).
    EXPECT_NEAR(ss / count / fit.dispersion, 1.0, 4.0 * std::sqrt(2.0 / count));
}

TEST(Bootstrap, Deterministic) {
    std::mt19937_64 gen(72);
    const auto xs = oracle::random_matrix(30, 2, gen, false);
    std::vector<double> y(30);
    for (auto& v : y) v = std::normal_distribution<double>()(gen);
    const auto fit = fit_ols(xs, y, FeatureMap::linear());
    for (auto kind : {BootstrapKind::Residual, BootstrapKind::Parametric}) {
        Rng a(17), b(17);
        EXPECT_EQ(bootstrap_response(fit, xs, kind, a), bootstrap_response(fit, xs, kind, b));
    }
}

TEST(SimulateAr, DeterministicRecursion) {
    const FixedARSpec spec{ARRegime{0.0, {0.5, 0.25}, NoiseSpec::gaussian(0.0)}, std::nullopt};
    Rng rng(1);
    const auto z = simulate_ar(spec, 3, 0, std::vector<double>{1.0, 1.0}, rng);
    EXPECT_DOUBLE_EQ(z[0], 0.75);
    EXPECT_DOUBLE_EQ(z[1], 0.625);
    EXPECT_DOUBLE_EQ(z[2], 0.5 * 0.625 + 0.25 * 0.75);
}

TEST(SimulateAr, ConstantSeries) {
    const FixedARSpec spec{ARRegime{0.0, {1.0}, NoiseSpec::gaussian(0.0)}, std::nullopt};
    Rng rng(1);
    for (double v : simulate_ar(spec, 50, 10, std::vector<double>{4.2}, rng)) EXPECT_EQ(v, 4.2);
}

TEST(SimulateAr, ThresholdSelectsRegime) {
    const FixedARSpec spec{ARRegime{1.0, {0.0}, NoiseSpec::gaussian(0.0)},
                           FixedARSpec::Threshold{1, 0.5, ARRegime{-1.0, {0.0}, NoiseSpec::gaussian(0.0)}}};
    Rng rng(1);
    const auto z = simulate_ar(spec, 4, 0, std::vector<double>{0.0}, rng);
    EXPECT_EQ(z, (std::vector<double>{1.0, -1.0, 1.0, -1.0}));
}

TEST(SimulateAr, ExplosiveDrawFails) {
    const FixedARSpec spec{ARRegime{0.0, {1e200}, NoiseSpec::gaussian(0.0)}, std::nullopt};
    Rng rng(1);
    EXPECT_THROW((void)simulate_ar(spec, 10, 0, std::vector<double>{1.0}, rng), NumericalError);
}

TEST(SimulateAr, Ar9VarianceMatchesMovingAverageWeights) {
    const auto spec = FixedARSpec::sunspot_ar9();
    const auto& phi = spec.lower.coefficients;
    std::vector<double> psi{1.0};
    double weights = 1.0;
    for (std::size_t j = 1; j < 5000; ++j) {
        double v = 0.0;
        for (std::size_t l = 1; l <= phi.size() && l <= j; ++l) v += phi[l - 1] * psi[j - l];
        psi.push_back(v);
        weights += v * v;
    }
    const double expected = 221.24 * weights;
    double phi_sum = 0.0;
    for (double p : phi) phi_sum += p;
    const double expected_mean = 6.96 / (1.0 - phi_sum);

    Rng rng(2);
    const auto z = simulate_ar(spec, 400000, 1000, std::vector<double>(9, expected_mean), rng);
    const double m = mean_of(z);
    double var = 0.0;
    for (double v : z) var += (v - m) * (v - m);
    var /= static_cast<double>(z.size() - 1);
    EXPECT_NEAR(var / expected, 1.0, 0.1);
    EXPECT_NEAR(m, expected_mean, 0.05 * expected_mean);
}

TEST(SimulateAr, PresetsValidate) {
    for (const char* name : {"ar9", "tar", "ar2-lognormal"}) EXPECT_NO_THROW(FixedARSpec::preset(name).validate());
    EXPECT_EQ(FixedARSpec::sunspot_tar().order(), 11u);
    EXPECT_THROW((void)FixedARSpec::preset("ar3"), std::invalid_argument);
}

TEST(LagEmbed, PairsValuesWithLags) {
    const std::vector<double> z{1, 2, 3, 4, 5};
    const auto s = lag_embed(z, 2);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s.x(0)[0], 2.0);
    EXPECT_EQ(s.x(0)[1], 1.0);
    EXPECT_EQ(s.y(0)[0], 3.0);
    EXPECT_EQ(s.y(2)[0], 5.0);
    EXPECT_THROW((void)lag_embed(z, 5), std::invalid_argument);
}

TEST(FixedAr, PredictAndBootstrapCentre) {
    const FixedARSpec spec{ARRegime{1.0, {0.5}, NoiseSpec::log_normal(2.0, 1.0)}, std::nullopt};
    const auto fit = fixed_ar_model(spec);
    const auto xs = oracle::column({0.0, 2.0});
    const auto mu = predict(fit, xs);
    EXPECT_NEAR(mu[0], 3.0, 1e-12);
    EXPECT_NEAR(mu[1], 4.0, 1e-12);
    Rng rng(3);
    double sum = 0.0;
    for (int d = 0; d < 20000; ++d) sum += bootstrap_response(fit, xs, BootstrapKind::Parametric, rng)[0];
    EXPECT_NEAR(sum / 20000, 3.0, 4.0 * std::sqrt(1.0 / 20000));
}

TEST(Refit, SameFamilyNewResponse) {
    const auto xs = oracle::column({0, 1, 2, 3});
    const auto fit = fit_ols(xs, std::vector<double>{1, 3, 5, 7}, FeatureMap::linear());
    const auto again = refit(fit, xs, std::vector<double>{0, 1, 2, 3});
    EXPECT_NEAR(again.theta_hat[1], 1.0, 1e-12);
    EXPECT_EQ(again.feature_map, fit.feature_map);
}
