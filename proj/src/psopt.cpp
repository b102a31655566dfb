#include "prefopt/psopt.hpp"

#include "prefopt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace prefopt {

namespace {

constexpr double kMaxSpeed = 1.0;
constexpr int kInitTries = 100;
constexpr int kStepHalvings = 8;

std::string format_point(const Vector& x) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ']';
    return os.str();
}

class Evaluator {
public:
    Evaluator(const Objective& f, const MinimizeOptions& opt) : f_(f), opt_(opt) {}

    double operator()(const Vector& x) {
        ++count;
        double v;
        try {
            v = f_(x);
            if (opt_.penalty && opt_.penalty->g) {
                v += penalty_value(opt_.penalty->g(x), opt_.penalty->rho, opt_.penalty->scale);
            }
        } catch (const std::exception& e) {
            throw Error("objective evaluation failed at " + format_point(x) + ": " + e.what());
        }
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    }

    std::size_t count = 0;

private:
    const Objective& f_;
    const MinimizeOptions& opt_;
};

}  // namespace

void PSOConfig::validate() const {
    if (swarm_size == 1) throw ConfigError("swarm size must be at least 2");
    if (iterations < 1) throw ConfigError("iteration budget must be positive");
    if (!(inertia > 0.0 && cognitive > 0.0 && social > 0.0)) throw ConfigError("PSO coefficients must be positive");
}

std::size_t PSOConfig::swarm(std::size_t n) const { return swarm_size ? swarm_size : std::min<std::size_t>(100, 20 * n); }

double penalty_value(const Vector& g, double rho, double scale) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double v = std::max(g[i], 0.0);
        s += v * v;
    }
    return rho * scale * s;
}

PSOResult pso_minimize(const Objective& objective, std::size_t n, const PSOConfig& cfg,
                       const MinimizeOptions& options) {
    cfg.validate();
    if (n < 1) throw InvalidValueError("dimension must be positive");
    if (options.penalty && !(options.penalty->rho > 0.0)) throw ConfigError("penalty weight must be positive");
    const auto dim = static_cast<Eigen::Index>(n);
    const std::size_t swarm = std::max<std::size_t>(2, cfg.swarm(n));
    CounterRng rng(cfg.seed);
    Evaluator eval(objective, options);
    auto feasible = [&](const Vector& x) { return !options.hard_feasible || options.hard_feasible(x); };
    auto random_point = [&]() { return Vector(Vector::NullaryExpr(dim, [&]() { return rng.uniform(-1.0, 1.0); })); };

    std::vector<Vector> pos(swarm), vel(swarm), pbest(swarm);
    std::vector<double> pval(swarm);
    std::size_t seed_cursor = 0;
    for (std::size_t p = 0; p < swarm; ++p) {
        Vector x;
        if (p < options.seeds.size()) {
            x = options.seeds[p].cwiseMax(-1.0).cwiseMin(1.0);
        } else {
            x = random_point();
            for (int t = 0; t < kInitTries && !feasible(x); ++t) x = random_point();
            if (!feasible(x)) {
                if (options.seeds.empty()) throw InfeasibleError("no feasible starting point for the swarm");
                x = options.seeds[seed_cursor++ % options.seeds.size()].cwiseMax(-1.0).cwiseMin(1.0);
            }
        }
        pos[p] = x;
        vel[p] = Vector::NullaryExpr(dim, [&]() { return rng.uniform(-0.2, 0.2); });
        pbest[p] = x;
        pval[p] = eval(x);
    }
    std::size_t g = static_cast<std::size_t>(std::min_element(pval.begin(), pval.end()) - pval.begin());
    Vector gbest = pbest[g];
    double gval = pval[g];

    double window_start = gval;
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        for (std::size_t p = 0; p < swarm; ++p) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                const double r1 = rng.uniform(), r2 = rng.uniform();
                double v = cfg.inertia * vel[p][j] + cfg.cognitive * r1 * (pbest[p][j] - pos[p][j]) +
                           cfg.social * r2 * (gbest[j] - pos[p][j]);
                vel[p][j] = std::clamp(v, -kMaxSpeed, kMaxSpeed);
            }
            Vector step = vel[p];
            Vector x = (pos[p] + step).cwiseMax(-1.0).cwiseMin(1.0);
            for (int t = 0; t < kStepHalvings && !feasible(x); ++t) {
                step *= 0.5;
                x = (pos[p] + step).cwiseMax(-1.0).cwiseMin(1.0);
            }
            if (!feasible(x)) {
                vel[p].setZero();
                continue;
            }
            pos[p] = x;
            const double v = eval(x);
            if (v < pval[p]) {
                pval[p] = v;
                pbest[p] = x;
                if (v < gval) {
                    gval = v;
                    gbest = x;
                }
            }
        }
        if (cfg.stall_window > 0 && (it + 1) % cfg.stall_window == 0) {
            if (window_start - gval < cfg.stall_tol) break;
            window_start = gval;
        }
    }

    // Coordinate pattern search around the best particle.
    double step = 0.05;
    std::size_t budget = cfg.polish_evals;
    while (budget > 0 && step > 1e-9) {
        bool improved = false;
        for (Eigen::Index j = 0; j < dim && budget > 0; ++j) {
            for (double sign : {1.0, -1.0}) {
                if (budget == 0) break;
                Vector x = gbest;
                x[j] = std::clamp(x[j] + sign * step, -1.0, 1.0);
                if (x[j] == gbest[j] || !feasible(x)) continue;
                --budget;
                const double v = eval(x);
                if (v < gval) {
                    gval = v;
                    gbest = x;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }

    return {gbest, gval, eval.count};
}

}  // namespace prefopt
