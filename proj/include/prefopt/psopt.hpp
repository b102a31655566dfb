#pragma once

#include "prefopt/core_types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace prefopt {

struct PSOConfig {
    std::size_t swarm_size = 0;  ///< 0: min(100, 20 n)
    std::size_t iterations = 300;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    std::uint64_t seed = 0;
    /// Stop early when the best value improves by less than stall_tol over this many
    /// iterations. 0 disables.
    std::size_t stall_window = 0;
    double stall_tol = 1e-12;
    /// Budget of the coordinate pattern search run on the best particle at the end.
    std::size_t polish_evals = 200;

    void validate() const;
    std::size_t swarm(std::size_t n) const;
};

/// Quadratic penalty rho * scale * sum_i max(g_i, 0)^2 for constraints g(x) <= 0.
struct PenaltySpec {
    NonlinearConstraint g;
    double rho = 1000.0;
    double scale = 1.0;
};

double penalty_value(const Vector& g, double rho, double scale);

struct MinimizeOptions {
    std::optional<PenaltySpec> penalty;
    /// Hard constraint: positions violating it are never evaluated.
    std::function<bool(const Vector&)> hard_feasible;
    /// Extra initial particles (e.g. known feasible points); used before random draws.
    std::vector<Vector> seeds;
};

struct PSOResult {
    Vector x;
    double value = 0.0;  ///< objective plus penalty at x
    std::size_t evaluations = 0;
};

using Objective = std::function<double(const Vector&)>;

/// Particle swarm over [-1, 1]^n followed by a short pattern-search polish.
/// Deterministic given cfg.seed.
PSOResult pso_minimize(const Objective& objective, std::size_t n, const PSOConfig& cfg,
                       const MinimizeOptions& options = {});

}  // namespace prefopt
