#include "prefopt/sampling.hpp"

#include <algorithm>
#include <numeric>

namespace prefopt {

SampleSet latin_hypercube(std::size_t count, std::size_t n, CounterRng& rng) {
    if (count < 1 || n < 1) throw InvalidValueError("latin_hypercube needs count >= 1 and n >= 1");
    std::vector<Vector> points(count, Vector(static_cast<Eigen::Index>(n)));
    std::vector<std::size_t> strata(count);
    const double width = 2.0 / static_cast<double>(count);
    for (std::size_t j = 0; j < n; ++j) {
        std::iota(strata.begin(), strata.end(), 0);
        rng.shuffle(strata);
        for (std::size_t k = 0; k < count; ++k) {
            double v = -1.0 + width * (static_cast<double>(strata[k]) + rng.uniform());
            points[k][static_cast<Eigen::Index>(j)] = std::min(v, 1.0);
        }
    }
    SampleSet out(n);
    for (auto& p : points) {
        if (!out.find_close(p)) out.push_back(p);
    }
    return out;
}

SampleSet latin_hypercube(std::size_t count, std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed);
    return latin_hypercube(count, n, rng);
}

InitialDesign feasible_initial_design(std::size_t count, std::size_t n,
                                      const std::function<bool(const Vector&)>& feasible, CounterRng& rng,
                                      std::size_t max_oversample) {
    if (max_oversample < 1) throw ConfigError("max_oversample must be at least 1");
    InitialDesign design;
    if (!feasible) {
        design.samples = latin_hypercube(count, n, rng);
        design.feasible_count = design.samples.size();
        return design;
    }
    SampleSet last;
    std::vector<Vector> good;
    for (std::size_t m = count; m <= max_oversample * count; m *= 2) {
        last = latin_hypercube(m, n, rng);
        good.clear();
        for (const auto& x : last) {
            if (feasible(x)) good.push_back(x);
            if (good.size() == count) break;
        }
        if (good.size() == count) break;
    }
    if (good.empty()) throw InfeasibleError("no feasible initial sample found");
    design.samples = SampleSet(n, good);
    design.feasible_count = good.size();
    if (good.size() < count) {
        design.all_feasible = false;
        for (const auto& x : last) {
            if (design.samples.size() == count) break;
            if (!design.samples.find_close(x)) design.samples.push_back(x);
        }
    }
    return design;
}

}  // namespace prefopt
