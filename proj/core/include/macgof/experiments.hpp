#pragma once

#include "macgof/gof.hpp"
#include "macgof/mac_stat.hpp"
#include "macgof/models.hpp"
#include "macgof/random.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace macgof::experiments {

// ---------------------------------------------------------------------------
// Two-sample power studies

/// Covariate dimension of power examples 1..4 (1, 2, 2, 5).
[[nodiscard]] std::size_t power_example_dimension(int example);

/// Value of c at which power example `example` is a null (1 for examples 1-2, 0 for 3-4).
[[nodiscard]] double power_example_null_c(int example);

/**
 * @brief One draw of the two samples compared in power example 1..4.
 *
 * X ~ N(0, I_d) is shared. `first` holds Y from the c-dependent model,
 * `second` holds Y* from the reference model:
 *  1. Y ~ N(cX, 1),                  Y* ~ N(X, 1)
 *  2. Y ~ N(X1 + cX2, 1),            Y* ~ N(X1 + X2, 1)
 *  3. Y ~ N(X1 + X2 + cX1X2, 1),     Y* ~ N(X1 + X2, 1)
 *  4. Y ~ N(sum X + c prod X, 1),    Y* ~ N(sum X, 1)
 * @throws std::invalid_argument for an unknown example or n < 2
 */
[[nodiscard]] std::pair<PairedSample, PairedSample> draw_power_example(int example, std::size_t n, double c,
                                                                       Rng& rng);

/// MAC of one draw, with k locations drawn at random from the pooled rows.
[[nodiscard]] double power_example_mac(int example, std::size_t n, double c, std::size_t k, LocationStrategy strategy,
                                       Rng& rng);

struct PowerConfig {
    std::size_t reps = 500;
    double alpha = 0.05;
    std::size_t k = 100;
    std::size_t null_draws = 999;
    LocationStrategy strategy = LocationStrategy::RandomSubset;
    std::uint64_t seed = 0;
};

struct PowerPoint {
    int example = 1;
    std::size_t n = 0;
    double c = 0.0;
    double rate = 0.0;
    std::size_t reps = 0;

    /// Binomial standard error sqrt(rate (1 - rate) / reps).
    [[nodiscard]] double standard_error() const noexcept;
};

struct PowerCurve {
    int example = 1;
    std::size_t n = 0;
    PowerConfig config;
    std::vector<double> null_draws;  ///< sorted MAC values at the null c
    std::vector<PowerPoint> points;
};

/**
 * @brief Rejection rates of the MAC two-sample test over a grid of c.
 *
 * The critical region comes from `null_draws` Monte Carlo MAC values at the
 * example's null c, shared by every grid point. A replicate rejects when its
 * add-one Monte Carlo p-value is at most alpha. Replicates are seeded from
 * (seed, example, n, c index, replicate).
 */
[[nodiscard]] PowerCurve power_curve(int example, std::size_t n, std::span<const double> c_grid,
                                     const PowerConfig& cfg);

/// Writes "example,n,c,rate,se,reps,alpha,k,null_draws,seed" rows, with header when requested.
void write_power_csv(std::ostream& out, const std::vector<PowerCurve>& curves, bool header = true);

// ---------------------------------------------------------------------------
// Distributional checks

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
[[nodiscard]] double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

/// KS distance to Uniform(0, 1).
[[nodiscard]] double ks_uniform(std::vector<double> sample);

/// Chi-squared CDF with `df` degrees of freedom.
[[nodiscard]] double chi_squared_cdf(double x, double df);

struct Chi2Check {
    std::vector<double> statistics;
    double ks = 0.0;
    double mean = 0.0;
    double degrees_of_freedom = 0.0;
};

/**
 * @brief Local statistic of two independent multinomial(n, probs) samples.
 *
 * Repeated `sims` times; the statistics are compared with the chi-squared
 * law with (cells - 1) degrees of freedom.
 * @throws std::invalid_argument if probs has fewer than 2 cells or does not sum to 1
 */
[[nodiscard]] Chi2Check chi2_convergence_check(std::span<const double> probs, std::size_t n, std::size_t sims,
                                               std::uint64_t seed);

enum class Hypothesis { H0, H1 };

struct ScalingResult {
    Hypothesis hypothesis = Hypothesis::H0;
    std::vector<std::size_t> n_grid;
    std::vector<double> medians;
    double slope = 0.0;  ///< least-squares slope of log median against log n
};

/**
 * @brief Growth of the median MAC with n at fixed k.
 *
 * H0 compares two samples of power example 1 at c = 1; H1 uses c = 3.
 */
[[nodiscard]] ScalingResult scaling_check(Hypothesis h, std::span<const std::size_t> n_grid, std::size_t k,
                                          std::size_t reps, std::uint64_t seed);

/// Least-squares slope of log(y) against log(x).
[[nodiscard]] double log_log_slope(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Model-checking replications

/// "5a": Y = 10(X - 0.2)^2 + e, "5b": Y = 4.7X + e with X ~ U(0, 1), linear fit;
/// "6": logit P(Y = 1) = 2X + X^2 with X ~ N(0, 1), linear logistic fit.
struct ReplicationExample {
    std::string id;
    ModelSpec working_model;
};

/// @throws std::invalid_argument for ids other than 5a, 5b, 6
[[nodiscard]] ReplicationExample replication_example(std::string_view id);

/// One synthetic dataset for a replication example.
[[nodiscard]] PairedSample draw_replication_data(std::string_view id, std::size_t n, Rng& rng);

struct ReplicationResult {
    std::string id;
    std::size_t n = 0;
    GofConfig config;
    std::vector<double> p_values;
    std::vector<double> T_B;
    double rejection_fraction = 0.0;
    double mean_adjusted_r2 = 0.0;  ///< linear working models only; informational
    std::size_t failed_fits = 0;    ///< runs whose fit failed; excluded from the fraction
};

/**
 * @brief Repeats gof_test on fresh datasets of one example.
 *
 * Run r draws data from (seed, Experiment, 2r) and tests with seed
 * derive_seed(seed, Experiment, 2r + 1). Runs are evaluated in parallel.
 */
[[nodiscard]] ReplicationResult replicate_example(std::string_view id, std::size_t n, std::size_t runs,
                                                  const GofConfig& cfg, std::uint64_t seed);

/// Adjusted R^2 of a LinearGaussian fit.
[[nodiscard]] double adjusted_r2(const FittedModel& fit, std::span<const double> y);

}  // namespace macgof::experiments
