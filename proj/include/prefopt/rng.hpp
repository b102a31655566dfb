#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace prefopt {

/// Counter-based SplitMix64 stream. The full state is (seed, counter), so a stream can be
/// persisted and resumed bit-exactly on any platform. Distributions are implemented here
/// rather than via <random>, whose distribution algorithms are implementation-defined.
class CounterRng {
public:
    static constexpr const char* kAlgorithm = "splitmix64-counter-v1";

    using result_type = std::uint64_t;

    CounterRng() = default;
    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next_u64(); }
    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);
    /// Standard normal (Box-Muller, no cached spare so the state stays (seed, counter)).
    double normal();

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

    /// Independent child stream, e.g. one per run or per acquisition solve.
    CounterRng split(std::uint64_t stream) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace prefopt
