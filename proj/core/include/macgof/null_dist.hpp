#pragma once

#include "macgof/mac_stat.hpp"
#include "macgof/models.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace macgof {

/// Whether null replicates refit the working model to each pseudo-observed response.
enum class NullProtocol { PlugIn, Refit };

[[nodiscard]] std::string_view to_string(NullProtocol p) noexcept;

/// Settings for one averaged bootstrap statistic: T_B = mean_b MAC((X, y), (X, y*_b)).
struct BootstrapMacConfig {
    std::size_t replicates = 1000;
    MacConfig mac;
    BootstrapKind kind = BootstrapKind::Parametric;
    /// false: one location set drawn from (X, y) and (X, y*_1), reused for every b.
    bool redraw_locations = false;
    std::uint64_t seed = 0;
};

/**
 * @brief The T_b series of Algorithm 1 for a scalar reference response.
 *
 * Replicate b draws y*_b from `fit` with generator make_rng(seed, Bootstrap, b),
 * so the series does not depend on evaluation order.
 */
[[nodiscard]] std::vector<double> bootstrap_mac_series(const FittedModel& fit, const RowMatrix& xs,
                                                       std::span<const double> y_ref, const BootstrapMacConfig& cfg);

/// Everything a cached null distribution must match to be reused.
struct NullMeta {
    std::size_t n = 0;
    std::size_t k = 0;
    LocationStrategy strategy = LocationStrategy::RandomSubset;
    PairOrdering ordering = PairOrdering::UpperTriangle;
    Family family = Family::LinearGaussian;
    BootstrapKind bootstrap = BootstrapKind::Parametric;
    std::size_t b_inner = 0;
    std::uint64_t seed = 0;
    NullProtocol protocol = NullProtocol::PlugIn;
    bool redraw_locations = false;
    std::uint64_t model_fingerprint = 0;

    /// Canonical "field=value;..." string; equality of keys is equality of metas.
    [[nodiscard]] std::string key() const;
    bool operator==(const NullMeta&) const = default;
};

struct NullDistribution {
    std::vector<double> draws;  ///< ascending
    NullMeta meta;

    [[nodiscard]] std::size_t size() const noexcept { return draws.size(); }
    [[nodiscard]] double quantile(double prob) const { return empirical_quantile(draws, prob); }
    [[nodiscard]] double mean() const;
};

struct NullConfig {
    std::size_t replicates = 999;  ///< M
    std::size_t b_inner = 1000;
    MacConfig mac;
    BootstrapKind kind = BootstrapKind::Parametric;
    NullProtocol protocol = NullProtocol::PlugIn;
    bool redraw_locations = false;
    std::uint64_t seed = 0;
};

/// Hash of the covariates and everything about `fit` that affects simulated responses.
[[nodiscard]] std::uint64_t model_fingerprint(const FittedModel& fit, const RowMatrix& xs);

/// Meta record describing simulate_null(fit, xs, cfg).
[[nodiscard]] NullMeta null_meta(const FittedModel& fit, const RowMatrix& xs, const NullConfig& cfg);

/**
 * @brief Monte Carlo null distribution of the averaged MAC statistic.
 *
 * Replicate r (seeded from derive_seed(seed, Null, r)) draws a pseudo-observed
 * response y0 from the working model, optionally refits the model to it, and
 * records the mean of B_inner values MAC((X, y0), (X, y*_b)) with a fresh
 * location set. This mirrors the structure of T_B.
 *
 * @throws std::invalid_argument if replicates < 99 or b_inner < 1
 */
[[nodiscard]] NullDistribution simulate_null(const FittedModel& fit, const RowMatrix& xs, const NullConfig& cfg);

/// (1 + #{draws >= observed}) / (M + 1). @throws std::invalid_argument for non-finite observed
[[nodiscard]] double p_value(double observed, const NullDistribution& null);

/**
 * @brief Directory of null distributions keyed by a hash of NullMeta.
 *
 * Files are versioned text; writes go to a temporary file that is renamed
 * into place. Unreadable or mismatching files are reported and treated as
 * misses.
 */
class NullCache {
public:
    explicit NullCache(std::filesystem::path directory);

    struct Lookup {
        std::optional<NullDistribution> hit;
        std::string warning;  ///< non-empty when a file existed but could not be used
    };

    [[nodiscard]] Lookup lookup(const NullMeta& meta) const;
    std::filesystem::path store(const NullDistribution& null) const;
    [[nodiscard]] std::filesystem::path path_for(const NullMeta& meta) const;
    [[nodiscard]] const std::filesystem::path& directory() const noexcept { return directory_; }

private:
    std::filesystem::path directory_;
};

/// FNV-1a over raw bytes.
[[nodiscard]] std::uint64_t fnv1a(std::span<const unsigned char> bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace macgof
