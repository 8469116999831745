#include "macgof/sample_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace macgof {

namespace {

void require_finite(const RowMatrix& m, const char* what) {
    if (!m.allFinite()) {
        throw std::invalid_argument(std::string("PairedSample: non-finite entry in ") + what);
    }
}

void check_location_dims(const Location& l, std::size_t p, std::size_t q) {
    if (l.w.size() != p || l.v.size() != q) {
        throw std::invalid_argument("location dimensions do not match the sample");
    }
}

}  // namespace

PairedSample::PairedSample(RowMatrix xs, RowMatrix ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.rows() == 0) {
        throw std::invalid_argument("PairedSample: at least one observation is required");
    }
    if (xs_.rows() != ys_.rows()) {
        throw std::invalid_argument("PairedSample: xs has " + std::to_string(xs_.rows()) + " rows but ys has " +
                                    std::to_string(ys_.rows()));
    }
    if (xs_.cols() == 0 || ys_.cols() == 0) {
        throw std::invalid_argument("PairedSample: x and y parts need at least one column");
    }
    require_finite(xs_, "xs");
    require_finite(ys_, "ys");
}

PairedSample PairedSample::scalar_response(RowMatrix xs, std::span<const double> y) {
    RowMatrix ys(static_cast<Eigen::Index>(y.size()), 1);
    std::copy(y.begin(), y.end(), ys.data());
    return PairedSample(std::move(xs), std::move(ys));
}

std::vector<double> PairedSample::response() const {
    return {ys_.data(), ys_.data() + ys_.size()};
}

PairedSample PairedSample::with_response(std::span<const double> ys) const {
    if (ys.size() != static_cast<std::size_t>(ys_.size())) {
        throw std::invalid_argument("with_response: response block has wrong length");
    }
    RowMatrix next(ys_.rows(), ys_.cols());
    std::copy(ys.begin(), ys.end(), next.data());
    return PairedSample(xs_, std::move(next));
}

double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("distance: vectors of length " + std::to_string(a.size()) + " and " +
                                    std::to_string(b.size()));
    }
    if (a.size() == 1) {
        return std::abs(a[0] - b[0]);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

int cell_label(Cell cell) noexcept {
    switch (cell) {
        case Cell::C11: return 11;
        case Cell::C12: return 12;
        case Cell::C21: return 21;
        case Cell::C22: return 22;
    }
    return 0;
}

Cell classify(std::span<const double> x, std::span<const double> y, const Location& li, const Location& lj) {
    const bool in_a = distance(x, li.w) <= distance(li.w, lj.w);
    const bool in_b = distance(y, li.v) <= distance(li.v, lj.v);
    if (in_a) {
        return in_b ? Cell::C11 : Cell::C21;
    }
    return in_b ? Cell::C12 : Cell::C22;
}

CellCounts cell_counts(const PairedSample& sample, const Location& li, const Location& lj) {
    check_location_dims(li, sample.x_dim(), sample.y_dim());
    check_location_dims(lj, sample.x_dim(), sample.y_dim());
    CellCounts counts;
    for (std::size_t t = 0; t < sample.size(); ++t) {
        switch (classify(sample.x(t), sample.y(t), li, lj)) {
            case Cell::C11: ++counts.c11; break;
            case Cell::C12: ++counts.c12; break;
            case Cell::C21: ++counts.c21; break;
            case Cell::C22: ++counts.c22; break;
        }
    }
    return counts;
}

namespace {

// Hot loop of every MAC evaluation; an AVX2 clone is selected at load time where available.
#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__)
__attribute__((target_clones("avx2", "default")))
#endif
std::int64_t count_at_most(const double* values, std::size_t len, double bound) noexcept {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < len; ++i) c += values[i] <= bound;
    return c;
}

}  // namespace

DistanceIndex::DistanceIndex(const RowMatrix& xs, const LocationSet& locations)
    : rows_(static_cast<std::size_t>(xs.rows())), locations_(locations.size()) {
    const std::size_t p = static_cast<std::size_t>(xs.cols());
    order_.resize(rows_ * locations_);
    sorted_distance_.resize(rows_ * locations_);

    std::vector<double> d(rows_);
    for (std::size_t i = 0; i < locations_; ++i) {
        if (locations[i].w.size() != p) {
            throw std::invalid_argument("DistanceIndex: location x-part has wrong dimension");
        }
        for (std::size_t t = 0; t < rows_; ++t) {
            d[t] = distance({xs.data() + t * p, p}, locations[i].w);
        }
        auto order = std::span(order_).subspan(i * rows_, rows_);
        std::iota(order.begin(), order.end(), 0U);
        std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return d[a] < d[b]; });
        double* sorted = sorted_distance_.data() + i * rows_;
        for (std::size_t r = 0; r < rows_; ++r) {
            sorted[r] = d[order[r]];
        }
    }
}

std::size_t DistanceIndex::rank(std::size_t center, double radius) const {
    const double* first = sorted_distance_.data() + center * rows_;
    return static_cast<std::size_t>(std::upper_bound(first, first + rows_, radius) - first);
}

PartitionCounter::PartitionCounter(const PairedSample& sample, const LocationSet& locations)
    : x_index_(std::make_shared<DistanceIndex>(sample.xs(), locations)) {
    fill_y_distances({sample.ys().data(), static_cast<std::size_t>(sample.ys().size())}, sample.y_dim(), locations);
}

PartitionCounter::PartitionCounter(std::shared_ptr<const DistanceIndex> x_index, std::span<const double> ys,
                                   std::size_t q, const LocationSet& locations)
    : x_index_(std::move(x_index)) {
    if (!x_index_ || x_index_->locations() != locations.size()) {
        throw std::invalid_argument("PartitionCounter: distance index does not match the location set");
    }
    if (q == 0 || ys.size() != x_index_->rows() * q) {
        throw std::invalid_argument("PartitionCounter: response block has wrong length");
    }
    fill_y_distances(ys, q, locations);
}

void PartitionCounter::fill_y_distances(std::span<const double> ys, std::size_t q, const LocationSet& locations) {
    const std::size_t n = x_index_->rows();
    y_distance_.resize(n * locations.size());
    for (std::size_t i = 0; i < locations.size(); ++i) {
        const auto& v = locations[i].v;
        if (v.size() != q) {
            throw std::invalid_argument("PartitionCounter: location y-part has wrong dimension");
        }
        const auto order = x_index_->order(i);
        double* out = y_distance_.data() + i * n;
        if (q == 1) {
            const double vi = v[0];
            for (std::size_t r = 0; r < n; ++r) {
                out[r] = std::abs(ys[order[r]] - vi);
            }
        } else {
            for (std::size_t r = 0; r < n; ++r) {
                out[r] = distance(ys.subspan(order[r] * q, q), v);
            }
        }
    }
}

CellCounts PartitionCounter::counts(std::size_t center, double x_radius, double y_radius) const {
    return counts_at_rank(center, x_index_->rank(center, x_radius), y_radius);
}

CellCounts PartitionCounter::counts_at_rank(std::size_t center, std::size_t x_rank, double y_radius) const noexcept {
    const std::size_t n = x_index_->rows();
    const double* dy = y_distance_.data() + center * n;

    const std::int64_t in_both = count_at_most(dy, x_rank, y_radius);
    const std::int64_t y_only = count_at_most(dy + x_rank, n - x_rank, y_radius);

    const auto x_in = static_cast<std::int64_t>(x_rank);
    const auto total = static_cast<std::int64_t>(n);
    return CellCounts{in_both, y_only, x_in - in_both, total - x_in - y_only};
}

}  // namespace macgof
