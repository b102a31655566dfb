#pragma once

#include "prefopt/core_types.hpp"
#include "prefopt/rng.hpp"

#include <functional>

namespace prefopt {

/// Latin hypercube design in [-1, 1]^n with uniform jitter inside each stratum.
SampleSet latin_hypercube(std::size_t count, std::size_t n, CounterRng& rng);
SampleSet latin_hypercube(std::size_t count, std::size_t n, std::uint64_t seed);

struct InitialDesign {
    SampleSet samples;
    /// False when the oversampling cap was reached and infeasible points were admitted.
    bool all_feasible = true;
    std::size_t feasible_count = 0;
};

inline constexpr std::size_t kDefaultMaxOversample = 64;

/// Draws LHS designs of size count, 2 count, 4 count, ... (up to max_oversample * count)
/// and keeps the first count feasible points. Throws InfeasibleError if none is feasible.
InitialDesign feasible_initial_design(std::size_t count, std::size_t n,
                                      const std::function<bool(const Vector&)>& feasible, CounterRng& rng,
                                      std::size_t max_oversample = kDefaultMaxOversample);

}  // namespace prefopt
