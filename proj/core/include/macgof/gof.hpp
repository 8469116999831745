#pragma once

#include "macgof/mac_stat.hpp"
#include "macgof/models.hpp"
#include "macgof/null_dist.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace macgof {

struct GofConfig {
    std::size_t B = 1000;        ///< bootstrap replicates
    std::size_t M = 999;         ///< null replicates
    std::size_t B_inner = 0;     ///< bootstrap replicates per null replicate; 0 = B
    MacConfig mac;
    BootstrapKind bootstrap = BootstrapKind::Parametric;
    double alpha = 0.05;         ///< reporting only
    bool refit_null = false;
    bool redraw_locations = false;
    std::uint64_t seed = 0;
};

struct NullSummary {
    std::size_t M = 0;
    double mean = 0.0;
    double q05 = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double q95 = 0.0;
};

[[nodiscard]] NullSummary summarize(const NullDistribution& null);

/// Null simulation settings used by gof_test for a sample of size n (k and B_inner resolved).
[[nodiscard]] NullConfig gof_null_config(const GofConfig& cfg, std::size_t n);

struct GofReport {
    FittedModel fitted;
    std::size_t n = 0;
    std::size_t k = 0;               ///< resolved location count
    std::vector<double> T_b;
    double T_B = 0.0;
    NullDistribution null;
    NullSummary null_summary;
    double p_value = 1.0;
    bool rejected = false;           ///< p_value <= alpha
    GofConfig config;                ///< with B_inner and mac.k resolved
    std::uint64_t null_seed = 0;
    bool null_from_cache = false;
    std::vector<std::string> warnings;
    double wall_time_seconds = 0.0;
};

/**
 * @brief Goodness-of-fit test of a working model by bootstrap MAC.
 *
 * Fits the model, draws B bootstrap responses, computes T_b against one
 * location set drawn from (X, y) and (X, y*_1), averages to T_B, and
 * compares T_B with a simulated null of the same shape. When `cache` is
 * given, a stored null with matching meta is reused and new nulls are stored.
 *
 * @throws std::invalid_argument if the response is not scalar or the config is invalid
 */
[[nodiscard]] GofReport gof_test(const PairedSample& data, const ModelSpec& model, const GofConfig& cfg,
                                 const NullCache* cache = nullptr);

/// Response law assumed around externally supplied means.
struct ExternalNoise {
    enum class Kind { Gaussian, Poisson, Bernoulli, None };
    Kind kind = Kind::Gaussian;
    /// Gaussian only; when absent, the mean squared residual is used.
    std::optional<double> variance;
};

[[nodiscard]] ExternalNoise parse_external_noise(std::string_view name);

/**
 * @brief Working model given by externally fitted means.
 *
 * Gaussian noise uses `noise.variance` or else the mean squared residual;
 * Kind::None generates responses equal to the means.
 * @throws std::invalid_argument on length mismatch or means invalid for the noise law
 */
[[nodiscard]] FittedModel external_model(const PairedSample& data, std::span<const double> fitted_means,
                                         const ExternalNoise& noise);

/**
 * @brief gof_test for a model fitted elsewhere, given its mean at every row.
 *
 * @throws std::invalid_argument as external_model, or when refit_null is set
 */
[[nodiscard]] GofReport gof_test_external(const PairedSample& data, std::span<const double> fitted_means,
                                          const ExternalNoise& noise, const GofConfig& cfg,
                                          const NullCache* cache = nullptr);

}  // namespace macgof
