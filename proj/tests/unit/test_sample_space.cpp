#include "macgof/sample_space.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

using namespace macgof;

namespace {

const Location kL1{{0.0}, {0.0}};
const Location kL2{{1.0}, {1.0}};

int label_of(double x, double y) {
    const std::vector<double> xv{x};
    const std::vector<double> yv{y};
    return cell_label(classify(xv, yv, kL1, kL2));
}

LocationSet random_locations(std::size_t k, std::size_t p, std::size_t q, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    LocationSet out(k);
    for (auto& l : out) {
        l.w.resize(p);
        l.v.resize(q);
        for (auto& v : l.w) v = normal(rng);
        for (auto& v : l.v) v = normal(rng);
    }
    return out;
}

}  // namespace

TEST(Distance, Examples) {
    EXPECT_DOUBLE_EQ(distance(std::vector<double>{0, 0}, std::vector<double>{3, 4}), 5.0);
    EXPECT_DOUBLE_EQ(distance(std::vector<double>{1.5}, std::vector<double>{1.5}), 0.0);
    EXPECT_DOUBLE_EQ(distance(std::vector<double>{1, 2, 3}, std::vector<double>{4, 6, 3}), 5.0);
}

TEST(Distance, SymmetricAndDimensionChecked) {
    const std::vector<double> a{0.3, -1.2};
    const std::vector<double> b{2.5, 0.7};
    EXPECT_EQ(distance(a, b), distance(b, a));
    EXPECT_THROW((void)distance(a, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(PairedSample, RejectsBadInput) {
    EXPECT_THROW(PairedSample(RowMatrix(0, 1), RowMatrix(0, 1)), std::invalid_argument);
    EXPECT_THROW(PairedSample(RowMatrix::Zero(3, 1), RowMatrix::Zero(2, 1)), std::invalid_argument);
    RowMatrix bad = RowMatrix::Zero(2, 1);
    bad(1, 0) = std::nan("");
    EXPECT_THROW(PairedSample(bad, RowMatrix::Zero(2, 1)), std::invalid_argument);
    bad(1, 0) = INFINITY;
    EXPECT_THROW(PairedSample(RowMatrix::Zero(2, 1), bad), std::invalid_argument);
}

TEST(PairedSample, WithResponseKeepsCovariates) {
    std::mt19937_64 rng(3);
    const auto s = oracle::random_sample(5, 2, 1, rng);
    const std::vector<double> y{1, 2, 3, 4, 5};
    const auto t = s.with_response(y);
    EXPECT_EQ(t.xs(), s.xs());
    EXPECT_EQ(t.response(), y);
}

TEST(Classify, Examples) {
    EXPECT_EQ(label_of(0.5, 0.5), 11);
    EXPECT_EQ(label_of(2.0, 0.3), 12);
    EXPECT_EQ(label_of(3.0, 3.0), 22);
    EXPECT_EQ(label_of(0.3, 2.0), 21);
}

TEST(Classify, BoundaryIsInside) {
    EXPECT_EQ(label_of(1.0, 1.0), 11);
    EXPECT_EQ(label_of(-1.0, -1.0), 11);
    EXPECT_EQ(label_of(std::nextafter(1.0, 2.0), 1.0), 12);
}

TEST(Classify, CoincidentLocationsCaptureOnlyTheCentre) {
    EXPECT_EQ(cell_label(classify(std::vector<double>{0.0}, std::vector<double>{0.0}, kL1, kL1)), 11);
    EXPECT_EQ(cell_label(classify(std::vector<double>{0.1}, std::vector<double>{0.0}, kL1, kL1)), 12);
}

TEST(CellCounts, Examples) {
    const PairedSample one(oracle::column({0.5}), oracle::column({0.5}));
    EXPECT_EQ(cell_counts(one, kL1, kL2), (CellCounts{1, 0, 0, 0}));
    const PairedSample three(oracle::column({0.5, 2.0, 3.0}), oracle::column({0.5, 0.3, 3.0}));
    EXPECT_EQ(cell_counts(three, kL1, kL2), (CellCounts{1, 1, 0, 1}));
}

TEST(CellCounts, DuplicatesCountWithMultiplicity) {
    const PairedSample s(oracle::column({0.5, 0.5, 0.5}), oracle::column({0.5, 0.5, 0.5}));
    EXPECT_EQ(cell_counts(s, kL1, kL2), (CellCounts{3, 0, 0, 0}));
}

TEST(CellCounts, Conservation) {
    std::mt19937_64 rng(11);
    const auto s = oracle::random_sample(200, 3, 2, rng);
    const auto locs = random_locations(20, 3, 2, rng);
    for (std::size_t i = 0; i < locs.size(); ++i) {
        for (std::size_t j = 0; j < locs.size(); ++j) {
            EXPECT_EQ(cell_counts(s, locs[i], locs[j]).total(), 200);
        }
    }
}

TEST(CellCounts, MatchesIndependentOracle) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = oracle::random_sample(40, 2, 1, rng, trial % 2 == 0);
        const auto locs = oracle::rows_as_locations(s, 8);
        for (const auto& li : locs) {
            for (const auto& lj : locs) EXPECT_EQ(cell_counts(s, li, lj), oracle::counts(s, li, lj));
        }
    }
}

TEST(CellCounts, IsometryInvariance) {
    std::mt19937_64 rng(21);
    const auto s = oracle::random_sample(150, 2, 2, rng);
    const auto locs = random_locations(12, 2, 2, rng);
    const double a = 0.7 * std::numbers::pi;
    const double b = -0.3 * std::numbers::pi;
    const auto rotate = [](double angle, double tx, double ty, std::span<const double> in) {
        return std::vector<double>{std::cos(angle) * in[0] - std::sin(angle) * in[1] + tx,
                                   std::sin(angle) * in[0] + std::cos(angle) * in[1] + ty};
    };
    RowMatrix xs(150, 2), ys(150, 2);
    for (std::size_t i = 0; i < 150; ++i) {
        const auto x = rotate(a, 3.0, -1.0, s.x(i));
        const auto y = rotate(b, -7.5, 2.0, s.y(i));
        xs.row(static_cast<Eigen::Index>(i)) << x[0], x[1];
        ys.row(static_cast<Eigen::Index>(i)) << y[0], y[1];
    }
    const PairedSample moved(xs, ys);
    LocationSet moved_locs;
    for (const auto& l : locs) moved_locs.push_back({rotate(a, 3.0, -1.0, l.w), rotate(b, -7.5, 2.0, l.v)});
    for (std::size_t i = 0; i < locs.size(); ++i) {
        for (std::size_t j = 0; j < locs.size(); ++j) {
            EXPECT_EQ(cell_counts(s, locs[i], locs[j]), cell_counts(moved, moved_locs[i], moved_locs[j]));
        }
    }
}

TEST(CellCounts, PositiveScaleInvariance) {
    std::mt19937_64 rng(22);
    const auto s = oracle::random_sample(150, 3, 1, rng);
    const auto locs = random_locations(12, 3, 1, rng);
    const PairedSample scaled(s.xs() * 3.7, s.ys() * 0.25);
    LocationSet scaled_locs = locs;
    for (auto& l : scaled_locs) {
        for (auto& v : l.w) v *= 3.7;
        for (auto& v : l.v) v *= 0.25;
    }
    for (std::size_t i = 0; i < locs.size(); ++i) {
        for (std::size_t j = 0; j < locs.size(); ++j) {
            EXPECT_EQ(cell_counts(s, locs[i], locs[j]), cell_counts(scaled, scaled_locs[i], scaled_locs[j]));
        }
    }
}

TEST(PartitionCounter, EqualsNaiveOnThousandInstances) {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> size(1, 60);
    std::uniform_int_distribution<int> dim(1, 3);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = static_cast<std::size_t>(size(rng));
        const std::size_t p = static_cast<std::size_t>(dim(rng));
        const std::size_t q = static_cast<std::size_t>(dim(rng));
        const bool ties = trial % 3 == 0;
        const auto s = oracle::random_sample(n, p, q, rng, ties);
        const auto other = oracle::random_sample(std::max<std::size_t>(n, 2), p, q, rng, ties);
        const auto locs = oracle::rows_as_locations(other, 6);
        const PartitionCounter counter(s, locs);
        for (std::size_t i = 0; i < locs.size(); ++i) {
            for (std::size_t j = 0; j < locs.size(); ++j) {
                const double rx = distance(locs[i].w, locs[j].w);
                const double ry = distance(locs[i].v, locs[j].v);
                ASSERT_EQ(counter.counts(i, rx, ry), oracle::counts(s, locs[i], locs[j])) << "trial " << trial;
            }
        }
    }
}

TEST(PartitionCounter, SharedIndexForNewResponse) {
    std::mt19937_64 rng(77);
    const auto s = oracle::random_sample(80, 2, 1, rng);
    const auto locs = oracle::rows_as_locations(s, 10);
    const PartitionCounter base(s, locs);
    std::normal_distribution<double> normal;
    std::vector<double> y(80);
    for (auto& v : y) v = normal(rng);
    const PartitionCounter shared(base.x_index(), y, 1, locs);
    const auto t = s.with_response(y);
    for (std::size_t i = 0; i < locs.size(); ++i) {
        for (std::size_t j = 0; j < locs.size(); ++j) {
            const double rx = distance(locs[i].w, locs[j].w);
            const double ry = distance(locs[i].v, locs[j].v);
            EXPECT_EQ(shared.counts(i, rx, ry), cell_counts(t, locs[i], locs[j]));
        }
    }
}
