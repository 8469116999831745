#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace macgof {

using Rng = std::mt19937_64;

/// Stream tags used to derive independent generators from one master seed.
enum class Stream : std::uint64_t {
    Locations = 1,
    Bootstrap = 2,
    Null = 3,
    Experiment = 4,
    Permutation = 5,
    NullReference = 6,
};

/**
 * @brief Derive a child seed from a master seed, a stream tag and an index.
 *
 * Uses splitmix64 finalisation so that nearby (seed, index) pairs give
 * uncorrelated generator states. Every replicate loop in the library seeds
 * replicate r with derive_seed(master, tag, r), which makes results
 * independent of evaluation order and thread schedule.
 */
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0);

[[nodiscard]] inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
    return Rng{derive_seed(master, stream, index)};
}

/// Draw a seed from system entropy.
[[nodiscard]] std::uint64_t entropy_seed();

/// Number of worker threads used by replicate loops (0 = hardware concurrency).
void set_worker_threads(unsigned threads);
[[nodiscard]] unsigned worker_threads();

/**
 * @brief Run body(i) for i in [0, count) on the configured worker threads.
 *
 * The body must write its result into a slot owned by index i; nothing else
 * is synchronised. The first exception thrown by any body is rethrown.
 * Calls made from inside a worker run serially.
 */
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace macgof
