#pragma once

#include "macgof/random.hpp"
#include "macgof/sample_space.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace macgof {

/// How anchor locations are chosen from the pooled rows of the two samples.
enum class LocationStrategy { RandomSubset, ClusterCenters, All };

/// Which ordered location pairs enter the maximum.
enum class PairOrdering {
    UpperTriangle,  ///< i < j, partition centred at L_i
    BothOrders,     ///< every i != j
};

[[nodiscard]] std::string_view to_string(LocationStrategy s) noexcept;
[[nodiscard]] std::string_view to_string(PairOrdering o) noexcept;
/// @throws std::invalid_argument for unknown names
[[nodiscard]] LocationStrategy parse_location_strategy(std::string_view name);
[[nodiscard]] PairOrdering parse_pair_ordering(std::string_view name);

struct MacConfig {
    /// Number of locations; 0 selects default_location_count(n).
    std::size_t k = 0;
    LocationStrategy strategy = LocationStrategy::RandomSubset;
    PairOrdering pair_ordering = PairOrdering::UpperTriangle;
    std::uint64_t seed = 0;
};

/// min(n, 100).
[[nodiscard]] std::size_t default_location_count(std::size_t n) noexcept;

/// Resolves k = 0 to the default and validates k >= 2.
[[nodiscard]] std::size_t resolve_location_count(const MacConfig& cfg, std::size_t n);

struct MacResult {
    double value = 0.0;       ///< maximum local statistic
    double mean_value = 0.0;  ///< mean over the same pair set
    std::pair<std::size_t, std::size_t> argmax_pair{0, 0};
    std::size_t pair_count = 0;  ///< non-degenerate pairs evaluated
    std::optional<std::vector<double>> local_values;
};

/**
 * @brief Adjusted chi-squared statistic for one location pair.
 *
 * S = sum over the four cells of (P - Q)^2 / (P + Q); a cell with P + Q = 0
 * contributes 0. Symmetric in (P, Q).
 */
[[nodiscard]] double local_statistic(const CellCounts& p, const CellCounts& q) noexcept;

/**
 * @brief Population counterpart of local_statistic for sample size n.
 *
 * n * sum (p - q)^2 / (p + q) over cells, zero-mass cells contributing 0.
 * @throws std::invalid_argument if either vector is negative or does not sum to 1 within 1e-9
 */
[[nodiscard]] double population_local_statistic(const std::array<double, 4>& p, const std::array<double, 4>& q,
                                                std::size_t n);

/**
 * @brief Pick anchor locations from the union of two samples.
 *
 * RandomSubset draws k pooled rows without replacement; All returns every
 * pooled row (rows of `a` first); ClusterCenters runs seeded Lloyd iterations
 * on the joint (x, y) rows and returns the k centroids. Each selected point is
 * split back into (w, v).
 *
 * @throws std::invalid_argument if k < 2, k exceeds the pooled size, or the samples' dimensions differ
 */
[[nodiscard]] LocationSet select_locations(const PairedSample& a, const PairedSample& b, const MacConfig& cfg,
                                           Rng& rng);

/// One ordered pair (i, j) with its partition radii d(w_i, w_j) and d(v_i, v_j).
struct LocationPair {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    double x_radius = 0.0;
    double y_radius = 0.0;
};

/// Pairs per `ordering`, skipping those with both radii zero.
[[nodiscard]] std::vector<LocationPair> location_pairs(const LocationSet& locations, PairOrdering ordering);

/**
 * @brief MAC statistic of two samples over a fixed location set.
 *
 * Uses PartitionCounter. Degenerate pairs (both radii zero) are skipped.
 * @throws DataError if every pair is degenerate
 */
[[nodiscard]] MacResult mac(const PairedSample& a, const PairedSample& b, const LocationSet& locations,
                            const MacConfig& cfg, bool keep_local_values = false);

/// Same contract as mac(), computed with the per-point classifier. Test oracle.
[[nodiscard]] MacResult mac_reference(const PairedSample& a, const PairedSample& b, const LocationSet& locations,
                                      const MacConfig& cfg, bool keep_local_values = false);

/// mean + max * I(max > tau).
[[nodiscard]] double mixed_statistic(double mean_value, double max_value, double tau) noexcept;

/// Linearly interpolated quantile of an ascending sample. @throws std::invalid_argument if empty or prob outside [0, 1]
[[nodiscard]] double empirical_quantile(std::span<const double> sorted, double prob);

/// Threshold for mixed_statistic: the empirical (1 - alpha) quantile of MAC values.
[[nodiscard]] double mixed_threshold(std::vector<double> max_values, double alpha);

/**
 * @brief MAC of a fixed reference sample against many other samples.
 *
 * Cell counts of the reference are computed once. against_response() is the
 * bootstrap fast path: the other sample shares the reference's covariate
 * rows, so the x-ordering and x-prefix lengths are reused and only the
 * y-distances are recomputed.
 */
class MacEvaluator {
public:
    MacEvaluator(const PairedSample& reference, LocationSet locations, PairOrdering ordering);

    [[nodiscard]] MacResult against(const PairedSample& other, bool keep_local_values = false) const;

    /// `ys` is a row-major n x q response block paired with the reference's covariates.
    [[nodiscard]] MacResult against_response(std::span<const double> ys, bool keep_local_values = false) const;

    [[nodiscard]] const LocationSet& locations() const noexcept { return locations_; }
    [[nodiscard]] std::size_t pair_count() const noexcept { return pairs_.size(); }

private:
    template <typename CountFn>
    MacResult reduce(CountFn&& other_counts, bool keep_local_values) const;

    LocationSet locations_;
    std::vector<LocationPair> pairs_;
    std::size_t n_;
    std::size_t p_;
    std::size_t q_;
    std::shared_ptr<const DistanceIndex> x_index_;
    std::vector<std::size_t> x_rank_;
    std::vector<CellCounts> reference_counts_;
};

}  // namespace macgof
