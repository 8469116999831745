#include "macgof/mac_stat.hpp"

#include "macgof/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace macgof {

namespace {

constexpr std::size_t kMaxLloydIterations = 100;

double cell_term(std::int64_t p, std::int64_t q) noexcept {
    const std::int64_t r = p + q;
    if (r == 0) {
        return 0.0;
    }
    const auto d = static_cast<double>(p - q);
    return d * d / static_cast<double>(r);
}

void check_probabilities(const std::array<double, 4>& cells, const char* name) {
    double sum = 0.0;
    for (double c : cells) {
        if (!std::isfinite(c) || c < 0.0) {
            throw std::invalid_argument(std::string("population_local_statistic: ") + name +
                                        " has a negative or non-finite cell");
        }
        sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument(std::string("population_local_statistic: ") + name + " sums to " +
                                    std::to_string(sum) + ", expected 1");
    }
}

// Row r of the pooled sample (a rows first, then b rows) as one joint vector.
std::vector<double> pooled_joint_row(const PairedSample& a, const PairedSample& b, std::size_t r) {
    const PairedSample& s = r < a.size() ? a : b;
    const std::size_t t = r < a.size() ? r : r - a.size();
    std::vector<double> row(s.x(t).begin(), s.x(t).end());
    row.insert(row.end(), s.y(t).begin(), s.y(t).end());
    return row;
}

Location split_joint(std::span<const double> joint, std::size_t p) {
    return Location{{joint.begin(), joint.begin() + static_cast<std::ptrdiff_t>(p)},
                    {joint.begin() + static_cast<std::ptrdiff_t>(p), joint.end()}};
}

// First k entries of a seeded partial Fisher-Yates shuffle of 0..N-1.
std::vector<std::size_t> draw_without_replacement(std::size_t population, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(population);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, population - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(k);
    return idx;
}

LocationSet cluster_centers(const PairedSample& a, const PairedSample& b, std::size_t k, Rng& rng) {
    const std::size_t total = a.size() + b.size();
    const std::size_t dim = a.x_dim() + a.y_dim();

    std::vector<std::vector<double>> rows;
    rows.reserve(total);
    for (std::size_t r = 0; r < total; ++r) {
        rows.push_back(pooled_joint_row(a, b, r));
    }

    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    for (std::size_t r : draw_without_replacement(total, k, rng)) {
        centers.push_back(rows[r]);
    }

    std::vector<std::size_t> assignment(total, k);
    for (std::size_t iter = 0; iter < kMaxLloydIterations; ++iter) {
        bool changed = false;
        for (std::size_t r = 0; r < total; ++r) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = distance(rows[r], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assignment[r] != best) {
                assignment[r] = best;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t r = 0; r < total; ++r) {
            auto& s = sums[assignment[r]];
            for (std::size_t d = 0; d < dim; ++d) {
                s[d] += rows[r][d];
            }
            ++sizes[assignment[r]];
        }
        // An empty cluster keeps its previous centre.
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] == 0) {
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d) {
                centers[c][d] = sums[c][d] / static_cast<double>(sizes[c]);
            }
        }
    }

    LocationSet out;
    out.reserve(k);
    for (const auto& c : centers) {
        out.push_back(split_joint(c, a.x_dim()));
    }
    return out;
}

}  // namespace

std::string_view to_string(LocationStrategy s) noexcept {
    switch (s) {
        case LocationStrategy::RandomSubset: return "random";
        case LocationStrategy::ClusterCenters: return "cluster";
        case LocationStrategy::All: return "all";
    }
    return "unknown";
}

std::string_view to_string(PairOrdering o) noexcept {
    switch (o) {
        case PairOrdering::UpperTriangle: return "upper";
        case PairOrdering::BothOrders: return "both";
    }
    return "unknown";
}

LocationStrategy parse_location_strategy(std::string_view name) {
    if (name == "random") return LocationStrategy::RandomSubset;
    if (name == "cluster") return LocationStrategy::ClusterCenters;
    if (name == "all") return LocationStrategy::All;
    throw std::invalid_argument("unknown location strategy '" + std::string(name) + "' (random|cluster|all)");
}

PairOrdering parse_pair_ordering(std::string_view name) {
    if (name == "upper") return PairOrdering::UpperTriangle;
    if (name == "both") return PairOrdering::BothOrders;
    throw std::invalid_argument("unknown pair ordering '" + std::string(name) + "' (upper|both)");
}

std::size_t default_location_count(std::size_t n) noexcept { return std::min<std::size_t>(n, 100); }

std::size_t resolve_location_count(const MacConfig& cfg, std::size_t n) {
    const std::size_t k = cfg.k == 0 ? default_location_count(n) : cfg.k;
    if (k < 2) {
        throw std::invalid_argument("MAC needs at least 2 locations, got k=" + std::to_string(k));
    }
    return k;
}

double local_statistic(const CellCounts& p, const CellCounts& q) noexcept {
    return cell_term(p.c11, q.c11) + cell_term(p.c12, q.c12) + cell_term(p.c21, q.c21) + cell_term(p.c22, q.c22);
}

double population_local_statistic(const std::array<double, 4>& p, const std::array<double, 4>& q, std::size_t n) {
    check_probabilities(p, "p");
    check_probabilities(q, "q");
    double s = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        const double r = p[c] + q[c];
        if (r > 0.0) {
            const double d = p[c] - q[c];
            s += d * d / r;
        }
    }
    return static_cast<double>(n) * s;
}

LocationSet select_locations(const PairedSample& a, const PairedSample& b, const MacConfig& cfg, Rng& rng) {
    if (a.x_dim() != b.x_dim() || a.y_dim() != b.y_dim()) {
        throw std::invalid_argument("select_locations: samples have different dimensions");
    }
    const std::size_t pooled = a.size() + b.size();
    const std::size_t k = resolve_location_count(cfg, a.size());
    if (k > pooled) {
        throw std::invalid_argument("select_locations: k=" + std::to_string(k) + " exceeds pooled size " +
                                    std::to_string(pooled));
    }

    LocationSet out;
    switch (cfg.strategy) {
        case LocationStrategy::All:
            out.reserve(pooled);
            for (std::size_t r = 0; r < pooled; ++r) {
                out.push_back(split_joint(pooled_joint_row(a, b, r), a.x_dim()));
            }
            break;
        case LocationStrategy::RandomSubset:
            out.reserve(k);
            for (std::size_t r : draw_without_replacement(pooled, k, rng)) {
                out.push_back(split_joint(pooled_joint_row(a, b, r), a.x_dim()));
            }
            break;
        case LocationStrategy::ClusterCenters:
            out = cluster_centers(a, b, k, rng);
            break;
    }
    return out;
}

std::vector<LocationPair> location_pairs(const LocationSet& locations, PairOrdering ordering) {
    std::vector<LocationPair> pairs;
    const std::size_t k = locations.size();
    pairs.reserve(ordering == PairOrdering::UpperTriangle ? k * (k - 1) / 2 : k * (k - 1));
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j0 = ordering == PairOrdering::UpperTriangle ? i + 1 : 0;
        for (std::size_t j = j0; j < k; ++j) {
            if (j == i) {
                continue;
            }
            const double rx = distance(locations[i].w, locations[j].w);
            const double ry = distance(locations[i].v, locations[j].v);
            if (rx == 0.0 && ry == 0.0) {
                continue;
            }
            pairs.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), rx, ry});
        }
    }
    return pairs;
}

MacResult mac(const PairedSample& a, const PairedSample& b, const LocationSet& locations, const MacConfig& cfg,
              bool keep_local_values) {
    return MacEvaluator(a, locations, cfg.pair_ordering).against(b, keep_local_values);
}

MacResult mac_reference(const PairedSample& a, const PairedSample& b, const LocationSet& locations,
                        const MacConfig& cfg, bool keep_local_values) {
    if (a.x_dim() != b.x_dim() || a.y_dim() != b.y_dim()) {
        throw std::invalid_argument("mac: samples have different dimensions");
    }
    if (locations.size() < 2) {
        throw std::invalid_argument("mac: at least 2 locations are required");
    }
    const auto pairs = location_pairs(locations, cfg.pair_ordering);
    if (pairs.empty()) {
        throw DataError("mac: every location pair is degenerate (coincident locations)");
    }

    MacResult result;
    result.pair_count = pairs.size();
    if (keep_local_values) {
        result.local_values.emplace();
        result.local_values->reserve(pairs.size());
    }
    double sum = 0.0;
    double best = -1.0;
    for (const auto& lp : pairs) {
        const double s = local_statistic(cell_counts(a, locations[lp.i], locations[lp.j]),
                                         cell_counts(b, locations[lp.i], locations[lp.j]));
        sum += s;
        if (s > best) {
            best = s;
            result.argmax_pair = {lp.i, lp.j};
        }
        if (keep_local_values) {
            result.local_values->push_back(s);
        }
    }
    result.value = best;
    result.mean_value = sum / static_cast<double>(pairs.size());
    return result;
}

double mixed_statistic(double mean_value, double max_value, double tau) noexcept {
    return mean_value + (max_value > tau ? max_value : 0.0);
}

double empirical_quantile(std::span<const double> sorted, double prob) {
    if (sorted.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("empirical_quantile: prob outside [0, 1]");
    const double h = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double mixed_threshold(std::vector<double> max_values, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("mixed_threshold: alpha must be in (0, 1)");
    std::sort(max_values.begin(), max_values.end());
    return empirical_quantile(max_values, 1.0 - alpha);
}

MacEvaluator::MacEvaluator(const PairedSample& reference, LocationSet locations, PairOrdering ordering)
    : locations_(std::move(locations)),
      n_(reference.size()),
      p_(reference.x_dim()),
      q_(reference.y_dim()) {
    if (locations_.size() < 2) {
        throw std::invalid_argument("mac: at least 2 locations are required");
    }
    for (const auto& l : locations_) {
        if (l.w.size() != p_ || l.v.size() != q_) {
            throw std::invalid_argument("mac: location dimensions do not match the sample");
        }
    }
    pairs_ = location_pairs(locations_, ordering);
    if (pairs_.empty()) {
        throw DataError("mac: every location pair is degenerate (coincident locations)");
    }

    const PartitionCounter counter(reference, locations_);
    x_index_ = counter.x_index();
    x_rank_.reserve(pairs_.size());
    reference_counts_.reserve(pairs_.size());
    for (const auto& lp : pairs_) {
        const std::size_t rank = x_index_->rank(lp.i, lp.x_radius);
        x_rank_.push_back(rank);
        reference_counts_.push_back(counter.counts_at_rank(lp.i, rank, lp.y_radius));
    }
}

template <typename CountFn>
MacResult MacEvaluator::reduce(CountFn&& other_counts, bool keep_local_values) const {
    MacResult result;
    result.pair_count = pairs_.size();
    if (keep_local_values) {
        result.local_values.emplace();
        result.local_values->reserve(pairs_.size());
    }
    double sum = 0.0;
    double best = -1.0;
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
        const double s = local_statistic(reference_counts_[k], other_counts(k));
        sum += s;
        if (s > best) {
            best = s;
            result.argmax_pair = {pairs_[k].i, pairs_[k].j};
        }
        if (keep_local_values) {
            result.local_values->push_back(s);
        }
    }
    result.value = best;
    result.mean_value = sum / static_cast<double>(pairs_.size());
    return result;
}

MacResult MacEvaluator::against(const PairedSample& other, bool keep_local_values) const {
    if (other.x_dim() != p_ || other.y_dim() != q_) {
        throw std::invalid_argument("mac: samples have different dimensions");
    }
    const PartitionCounter counter(other, locations_);
    return reduce(
        [&](std::size_t k) {
            const auto& lp = pairs_[k];
            return counter.counts(lp.i, lp.x_radius, lp.y_radius);
        },
        keep_local_values);
}

MacResult MacEvaluator::against_response(std::span<const double> ys, bool keep_local_values) const {
    if (ys.size() != n_ * q_) {
        throw std::invalid_argument("mac: response block has " + std::to_string(ys.size()) + " values, expected " +
                                    std::to_string(n_ * q_));
    }
    const PartitionCounter counter(x_index_, ys, q_, locations_);
    return reduce(
        [&](std::size_t k) { return counter.counts_at_rank(pairs_[k].i, x_rank_[k], pairs_[k].y_radius); },
        keep_local_values);
}

}  // namespace macgof
