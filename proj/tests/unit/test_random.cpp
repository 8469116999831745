#include "macgof/random.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <set>
#include <stdexcept>
#include <vector>

using namespace macgof;

TEST(DeriveSeed, DistinctAcrossStreamsAndIndices) {
    std::set<std::uint64_t> seen;
    for (auto stream : {Stream::Locations, Stream::Bootstrap, Stream::Null, Stream::Experiment, Stream::Permutation,
                        Stream::NullReference}) {
        for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, stream, i));
    }
    EXPECT_EQ(seen.size(), 6000u);
    EXPECT_EQ(derive_seed(1, Stream::Null, 3), derive_seed(1, Stream::Null, 3));
    EXPECT_NE(derive_seed(1, Stream::Null, 3), derive_seed(2, Stream::Null, 3));
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    const unsigned saved = worker_threads();
    for (unsigned threads : {1u, 3u, 8u}) {
        set_worker_threads(threads);
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
        for (int h : hits) EXPECT_EQ(h, 1);
    }
    set_worker_threads(saved);
}

TEST(ParallelFor, RethrowsAndNests) {
    const unsigned saved = worker_threads();
    set_worker_threads(4);
    EXPECT_THROW(parallel_for(100, [](std::size_t i) {
                     if (i == 37) throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
    std::atomic<int> total{0};
    parallel_for(8, [&](std::size_t) { parallel_for(10, [&](std::size_t) { ++total; }); });
    EXPECT_EQ(total.load(), 80);
    set_worker_threads(saved);
}
