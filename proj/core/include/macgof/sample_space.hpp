#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace macgof {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/**
 * @brief n observations of (x, y) with x in R^p and y in R^q.
 *
 * Rows are stored contiguously so that x(i) and y(i) are cheap spans.
 * Construction validates shape and finiteness; the object is immutable
 * afterwards.
 */
class PairedSample {
public:
    /// @throws std::invalid_argument on empty input, row-count mismatch or non-finite entries
    PairedSample(RowMatrix xs, RowMatrix ys);

    /// Convenience for the scalar-response case (q = 1).
    [[nodiscard]] static PairedSample scalar_response(RowMatrix xs, std::span<const double> y);

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(xs_.rows()); }
    [[nodiscard]] std::size_t x_dim() const noexcept { return static_cast<std::size_t>(xs_.cols()); }
    [[nodiscard]] std::size_t y_dim() const noexcept { return static_cast<std::size_t>(ys_.cols()); }

    [[nodiscard]] std::span<const double> x(std::size_t i) const noexcept {
        return {xs_.data() + i * x_dim(), x_dim()};
    }
    [[nodiscard]] std::span<const double> y(std::size_t i) const noexcept {
        return {ys_.data() + i * y_dim(), y_dim()};
    }

    [[nodiscard]] const RowMatrix& xs() const noexcept { return xs_; }
    [[nodiscard]] const RowMatrix& ys() const noexcept { return ys_; }

    /// Row-major copy of the response block (length n*q).
    [[nodiscard]] std::vector<double> response() const;

    /// Same covariates, new response block (row-major, length n*q).
    [[nodiscard]] PairedSample with_response(std::span<const double> ys) const;

private:
    RowMatrix xs_;
    RowMatrix ys_;
};

/// Anchor point L = (w, v) of the ball partition.
struct Location {
    std::vector<double> w;
    std::vector<double> v;

    bool operator==(const Location&) const = default;
};

using LocationSet = std::vector<Location>;

/// Euclidean distance. @throws std::invalid_argument on length mismatch
[[nodiscard]] double distance(std::span<const double> a, std::span<const double> b);

/**
 * Partition cell of a point relative to an ordered location pair (Li, Lj).
 *
 * With A = {d(x, w_i) <= d(w_i, w_j)} and B = {d(y, v_i) <= d(v_i, v_j)}:
 * C11 = A and B, C12 = not-A and B, C21 = A and not-B, C22 = neither.
 */
enum class Cell : std::uint8_t { C11, C12, C21, C22 };

/// Two-digit label (11, 12, 21, 22) for reports and tests.
[[nodiscard]] int cell_label(Cell cell) noexcept;

[[nodiscard]] Cell classify(std::span<const double> x, std::span<const double> y, const Location& li,
                            const Location& lj);

struct CellCounts {
    std::int64_t c11 = 0;
    std::int64_t c12 = 0;
    std::int64_t c21 = 0;
    std::int64_t c22 = 0;

    [[nodiscard]] std::int64_t total() const noexcept { return c11 + c12 + c21 + c22; }
    [[nodiscard]] std::array<std::int64_t, 4> as_array() const noexcept { return {c11, c12, c21, c22}; }

    bool operator==(const CellCounts&) const = default;
};

/// Reference counter: classifies every row of the sample once.
[[nodiscard]] CellCounts cell_counts(const PairedSample& sample, const Location& li, const Location& lj);

/**
 * @brief Per-location ordering of the x-part of a sample.
 *
 * For each location i the rows are sorted by d(x, w_i). The number of rows
 * inside an x-ball of radius r is then an upper_bound on the sorted
 * distances, and those rows form a prefix of the ordering.
 */
class DistanceIndex {
public:
    DistanceIndex(const RowMatrix& xs, const LocationSet& locations);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t locations() const noexcept { return locations_; }

    /// Number of rows with d(x, w_center) <= radius.
    [[nodiscard]] std::size_t rank(std::size_t center, double radius) const;

    [[nodiscard]] std::span<const std::uint32_t> order(std::size_t center) const noexcept {
        return {order_.data() + center * rows_, rows_};
    }

private:
    std::size_t rows_;
    std::size_t locations_;
    std::vector<std::uint32_t> order_;
    std::vector<double> sorted_distance_;
};

/**
 * @brief Optimised 2x2 cell counting for many location pairs over one sample.
 *
 * Holds the y-distances to every location permuted into that location's
 * x-distance order. A query for (center, x radius, y radius) is a binary
 * search for the x-prefix followed by one linear pass comparing y-distances.
 * Results are bit-identical to cell_counts().
 *
 * Several counters may share one DistanceIndex when their samples have the
 * same covariate rows (the bootstrap case, where only y changes).
 */
class PartitionCounter {
public:
    PartitionCounter(const PairedSample& sample, const LocationSet& locations);

    /// Counter for responses `ys` (row-major n x q) that share covariates with `x_index`.
    PartitionCounter(std::shared_ptr<const DistanceIndex> x_index, std::span<const double> ys, std::size_t q,
                     const LocationSet& locations);

    [[nodiscard]] CellCounts counts(std::size_t center, double x_radius, double y_radius) const;

    /// Same as counts() with the x-prefix length already known.
    [[nodiscard]] CellCounts counts_at_rank(std::size_t center, std::size_t x_rank, double y_radius) const noexcept;

    [[nodiscard]] const std::shared_ptr<const DistanceIndex>& x_index() const noexcept { return x_index_; }
    [[nodiscard]] std::size_t rows() const noexcept { return x_index_->rows(); }

private:
    void fill_y_distances(std::span<const double> ys, std::size_t q, const LocationSet& locations);

    std::shared_ptr<const DistanceIndex> x_index_;
    std::vector<double> y_distance_;  // locations x rows, in x order per location
};

}  // namespace macgof
