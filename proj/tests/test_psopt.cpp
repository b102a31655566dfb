#include "prefopt/psopt.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "prefopt/exploration.hpp"
#include "prefopt/sampling.hpp"

using namespace prefopt;

namespace {

double latent_1d(double x) {
    const double t = 1.0 + x * std::sin(2.0 * x) * std::cos(3.0 * x) / (1.0 + x * x);
    return t * t + x * x / 12.0 + x / 10.0;
}

Vector to_box05(const Vector& xbar) { return 2.5 * xbar.array() + 2.5; }

double sasena(const Vector& xbar) {
    Vector x = to_box05(xbar);
    return 2.0 + 0.01 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2) + 2.0 * std::pow(2.0 - x[1], 2) +
           7.0 * std::sin(0.5 * x[0]) * std::sin(0.7 * x[0] * x[1]);
}

Vector sasena_g(const Vector& xbar) {
    Vector x = to_box05(xbar);
    return Vector::Constant(1, -std::sin(x[0] - x[1] - std::numbers::pi / 8.0));
}

}  // namespace

TEST(Penalty, Arithmetic) {
    EXPECT_NEAR(0.0 + penalty_value(Vector::Constant(1, 0.2), 1000.0, 1.0), 40.0, 1e-12);
    EXPECT_EQ(penalty_value(Vector::Constant(2, -1.0), 1000.0, 1.0), 0.0);
}

TEST(PSO, Sphere) {
    PSOConfig cfg;
    cfg.seed = 1;
    auto res = pso_minimize([](const Vector& x) { return x.squaredNorm(); }, 3, cfg);
    EXPECT_LE(res.value, 1e-6);
    EXPECT_NEAR(res.value, res.x.squaredNorm(), 0.0);
}

TEST(PSO, PenalizedValueReported) {
    PSOConfig cfg;
    cfg.seed = 2;
    MinimizeOptions opt;
    opt.penalty = PenaltySpec{[](const Vector& x) { return Vector::Constant(1, 0.5 - x[0]); }, 1000.0, 1.0};
    auto f = [](const Vector& x) { return x.squaredNorm(); };
    auto res = pso_minimize(f, 2, cfg, opt);
    EXPECT_NEAR(res.value, f(res.x) + penalty_value(opt.penalty->g(res.x), 1000.0, 1.0), 1e-15);
    EXPECT_NEAR(res.x[0], 0.5, 1e-2);
}

TEST(PSO, Deterministic) {
    PSOConfig cfg;
    cfg.seed = 11;
    auto f = [](const Vector& x) { return std::sin(5 * x[0]) * std::cos(3 * x[1]) + 0.1 * x.squaredNorm(); };
    auto a = pso_minimize(f, 2, cfg), b = pso_minimize(f, 2, cfg);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.value, b.value);
}

TEST(PSOProperty, BoundedAndNoWorseThanInitialParticles) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        PSOConfig cfg;
        cfg.seed = seed;
        cfg.iterations = 20;
        std::vector<double> initial;
        std::size_t calls = 0;
        const std::size_t swarm = cfg.swarm(2);
        auto f = [&](const Vector& x) {
            double v = std::sin(7 * x[0]) + std::cos(4 * x[1]) + x[0];
            if (calls++ < swarm) initial.push_back(v);
            return v;
        };
        auto res = pso_minimize(f, 2, cfg);
        EXPECT_LE(res.x.cwiseAbs().maxCoeff(), 1.0);
        for (double v : initial) EXPECT_LE(res.value, v);
    }
}

TEST(PSO, AcquisitionMatchesDenseGrid) {
    // Six samples on [-3, 3] in unit coordinates, preferences against the running best.
    SampleSet X = latin_hypercube(6, 1, 17);
    std::vector<PreferenceRecord> prefs;
    std::size_t best = 0;
    for (std::size_t i = 1; i < X.size(); ++i) {
        auto b = preference_from_values(latent_1d(3 * X[best][0]), latent_1d(3 * X[i][0]));
        prefs.push_back({best, i, b});
        if (b == Preference::SecondBetter) best = i;
    }
    FitConfig cfg;
    cfg.sigma = 1.0 / 6.0;
    IDWAcquisition acq(fit_surrogate(X, prefs, cfg, 2.0, KernelFamily::InverseQuadratic), 1.0);
    double grid_min = INFINITY;
    for (int k = 0; k < 10000; ++k) grid_min = std::min(grid_min, acq(Vector::Constant(1, -1.0 + 2.0 * k / 9999.0)));
    PSOConfig pcfg;
    pcfg.seed = 5;
    auto res = pso_minimize([&](const Vector& x) { return acq(x); }, 1, pcfg);
    EXPECT_LE(std::abs(res.value - grid_min), 1e-2);
    EXPECT_LE(res.value, grid_min + 1e-9);
}

TEST(PSO, HardConstraintRespected) {
    PSOConfig cfg;
    cfg.seed = 3;
    MinimizeOptions opt;
    opt.hard_feasible = [](const Vector& x) { return x[0] + x[1] <= -0.5; };
    std::size_t violations = 0;
    auto f = [&](const Vector& x) {
        if (x[0] + x[1] > -0.5) ++violations;
        return (x - Vector::Constant(2, 0.8)).squaredNorm();
    };
    auto res = pso_minimize(f, 2, cfg, opt);
    EXPECT_EQ(violations, 0u);
    EXPECT_NEAR(res.x[0] + res.x[1], -0.5, 1e-3);
}

TEST(PSO, NoFeasibleStartThrows) {
    MinimizeOptions opt;
    opt.hard_feasible = [](const Vector&) { return false; };
    EXPECT_THROW(pso_minimize([](const Vector& x) { return x[0]; }, 1, PSOConfig{}, opt), InfeasibleError);
}

TEST(PSO, ObjectiveFailureReportsPoint) {
    try {
        pso_minimize([](const Vector&) -> double { throw std::runtime_error("boom"); }, 2, PSOConfig{});
        FAIL();
    } catch (const Error& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("boom"), std::string::npos);
        EXPECT_NE(msg.find('['), std::string::npos);
    }
}

TEST(PSOProperty, ViolationShrinksWithRhoOnSasena) {
    std::vector<double> total;
    for (double rho : {1e2, 1e3, 1e4}) {
        double sum = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            PSOConfig cfg;
            cfg.seed = seed;
            MinimizeOptions opt;
            opt.penalty = PenaltySpec{sasena_g, rho, 1.0};
            auto res = pso_minimize(sasena, 2, cfg, opt);
            sum += penalty_value(sasena_g(res.x), 1.0, 1.0);
        }
        total.push_back(sum);
    }
    EXPECT_GT(total[0], total[1]);
    EXPECT_GT(total[1], total[2]);
}

TEST(PSOConfig, Validation) {
    PSOConfig cfg;
    cfg.swarm_size = 1;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.swarm_size = 0;
    EXPECT_EQ(cfg.swarm(3), 60u);
    EXPECT_EQ(cfg.swarm(10), 100u);
    cfg.inertia = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}
