#include "prefopt/codec.hpp"
#include "prefopt/engine.hpp"
#include "prefopt/exploration.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace prefopt;

namespace {

double latent_1d(double x) {
    const double t = 1.0 + x * std::sin(2.0 * x) * std::cos(3.0 * x) / (1.0 + x * x);
    return t * t + x * x / 12.0 + x / 10.0;
}

Problem line_problem() {
    Problem p;
    p.bounds = {Vector::Constant(1, -3.0), Vector::Constant(1, 3.0)};
    return p;
}

Problem sasena_problem() {
    Problem p;
    p.bounds = {Vector::Zero(2), Vector::Constant(2, 5.0)};
    p.constraints.nonlinear = [](const Vector& x) {
        return Vector::Constant(1, -std::sin(x[0] - x[1] - M_PI / 8.0));
    };
    return p;
}

PreferenceOracle exact(const std::function<double(const Vector&)>& f) {
    return [f](const Vector& a, const Vector& b) { return preference_from_values(f(a), f(b)); };
}

double f1(const Vector& x) { return latent_1d(x[0]); }

EngineConfig quick(std::size_t n_max, std::uint64_t seed = 0) {
    EngineConfig cfg;
    cfg.n_max = n_max;
    cfg.seed = seed;
    cfg.pso.iterations = 60;
    cfg.pso.polish_evals = 60;
    return cfg;
}

}  // namespace

TEST(EngineConfig, Defaults) {
    EngineConfig cfg;
    cfg.n_max = 25;
    cfg.resolve();
    EXPECT_EQ(cfg.n_init, 9u);
    EXPECT_DOUBLE_EQ(cfg.sigma, 1.0 / 25.0);
    EXPECT_DOUBLE_EQ(cfg.acquisition.delta, 2.0);
    EXPECT_EQ(cfg.kernel, KernelFamily::InverseQuadratic);
    EXPECT_DOUBLE_EQ(cfg.epsilon, 1.0);
    EXPECT_EQ(cfg.calibration.thetas.size(), 10u);
}

TEST(EngineConfig, RejectsBadBounds) {
    EngineConfig cfg;
    cfg.n_max = 5;
    cfg.n_init = 1;
    EXPECT_THROW(cfg.resolve(), ConfigError);
    cfg.n_init = 6;
    EXPECT_THROW(cfg.resolve(), ConfigError);
    cfg.n_init = 2;
    cfg.sigma = -1.0;
    EXPECT_THROW(cfg.resolve(), ConfigError);
}

TEST(Session, SasenaInitialDesignFeasible) {
    EngineConfig cfg = quick(25);
    cfg.n_init = 8;
    Session s = Session::create(sasena_problem(), cfg);
    ASSERT_EQ(s.initial_design().size(), 8u);
    EXPECT_TRUE(s.design_all_feasible());
    for (const auto& u : s.initial_design()) {
        Vector x = s.scaling().from_unit(u);
        EXPECT_TRUE(s.problem().constraints.satisfied(x, 0.0));
    }
    EXPECT_EQ(s.phase(), Phase::Initializing);
    EXPECT_EQ(s.best_index(), 0u);
}

TEST(Session, OneDimensionalDesignIsStratified) {
    EngineConfig cfg = quick(10);
    cfg.n_init = 3;
    Session s = Session::create(line_problem(), cfg);
    std::vector<int> bins(3, 0);
    for (const auto& u : s.initial_design()) {
        bins[std::min(2, static_cast<int>((u[0] + 1.0) / 2.0 * 3.0))]++;
    }
    EXPECT_EQ(bins, std::vector<int>({1, 1, 1}));
}

TEST(Session, MinimalSession) {
    EngineConfig cfg = quick(2);
    cfg.n_init = 2;
    Session s = Session::create(line_problem(), cfg);
    QueryPair q = s.ask();
    EXPECT_EQ(q.query_index, 1u);
    s.tell(Preference::Tie);
    EXPECT_EQ(s.phase(), Phase::Done);
    EXPECT_THROW(s.ask(), StateError);
}

TEST(Session, FirstQueryComesFromDesign) {
    EngineConfig cfg = quick(10);
    cfg.n_init = 4;
    Session s = Session::create(line_problem(), cfg);
    QueryPair q = s.ask();
    EXPECT_EQ(q.incumbent_index, 0u);
    EXPECT_EQ(q.challenger_index, 1u);
    EXPECT_EQ(q.query_index, 1u);
    EXPECT_NEAR(q.incumbent[0], s.scaling().from_unit(s.initial_design()[0])[0], 1e-15);
    EXPECT_NEAR(q.challenger[0], s.scaling().from_unit(s.initial_design()[1])[0], 1e-15);
}

TEST(Session, AskIsIdempotent) {
    Session s = Session::create(line_problem(), quick(6));
    QueryPair a = s.ask();
    QueryPair b = s.ask();
    EXPECT_EQ(a.challenger, b.challenger);
    EXPECT_EQ(a.query_index, b.query_index);
}

TEST(Session, TellWithoutQueryFails) {
    Session s = Session::create(line_problem(), quick(6));
    EXPECT_THROW(s.tell(Preference::Tie), StateError);
    EXPECT_THROW(preference_from_int(2), InvalidValueError);
}

TEST(Session, IncumbentUpdateRule) {
    Session s = Session::create(line_problem(), quick(8));
    s.ask();
    s.tell(Preference::FirstBetter);
    EXPECT_EQ(s.best_index(), 0u);
    s.ask();
    s.tell(Preference::Tie);
    EXPECT_EQ(s.best_index(), 0u);
    QueryPair q = s.ask();
    s.tell(Preference::SecondBetter);
    EXPECT_EQ(s.best_index(), q.challenger_index);
    EXPECT_EQ(s.best(), q.challenger);
    ASSERT_EQ(s.preferences().size(), 3u);
    EXPECT_EQ(s.preferences()[1], (PreferenceRecord{0, 2, Preference::Tie}));
}

TEST(Session, BestBeforeAnyTellIsFirstSample) {
    Session s = Session::create(line_problem(), quick(8));
    EXPECT_EQ(s.best(), s.scaling().from_unit(s.initial_design()[0]));
}

TEST(Session, FinishedSessionCounts) {
    EngineConfig cfg = quick(9, 3);
    Session s = Session::create(line_problem(), cfg);
    run_auto(s, exact(f1));
    EXPECT_EQ(s.phase(), Phase::Done);
    EXPECT_EQ(s.num_samples(), 9u);
    EXPECT_EQ(s.preferences().size(), 8u);
    EXPECT_EQ(s.queries_remaining(), 0u);
}

TEST(Session, PhaseTransitions) {
    EngineConfig cfg = quick(6);
    cfg.n_init = 3;
    Session s = Session::create(line_problem(), cfg);
    EXPECT_EQ(s.phase(), Phase::Initializing);
    s.ask();
    s.tell(Preference::Tie);
    EXPECT_EQ(s.phase(), Phase::Initializing);
    s.ask();
    s.tell(Preference::Tie);
    EXPECT_EQ(s.phase(), Phase::Active);
}

TEST(Session, ChallengerMatchesDenseGridAtFirstActiveStep) {
    EngineConfig cfg;
    cfg.n_max = 20;
    cfg.n_init = 6;
    cfg.acquisition.delta = 1.0;
    cfg.epsilon = 2.0;
    cfg.sigma = 1.0 / 6.0;
    cfg.calibrate = false;
    cfg.seed = 11;
    Session s = Session::create(line_problem(), cfg);
    auto oracle = exact(f1);
    while (s.num_samples() < 6) {
        QueryPair q = s.ask();
        s.tell(oracle(q.incumbent, q.challenger));
    }
    QueryPair q = s.ask();

    FitConfig fit;
    fit.sigma = 1.0 / 6.0;
    IDWAcquisition acq(fit_surrogate(s.samples(), s.preferences(), fit, 2.0, KernelFamily::InverseQuadratic), 1.0);
    double best = INFINITY, arg = 0.0;
    for (int k = 0; k < 10000; ++k) {
        Vector u = Vector::Constant(1, -1.0 + 2.0 * k / 9999.0);
        if (s.samples().find_close(u)) continue;
        const double v = acq(u);
        if (v < best) best = v, arg = u[0];
    }
    EXPECT_NEAR(q.challenger[0], 3.0 * arg, 1e-2);
}

TEST(Session, ChallengerNeverDuplicatesSample) {
    Session s = Session::create(line_problem(), quick(15, 4));
    auto oracle = exact(f1);
    while (s.phase() != Phase::Done) {
        QueryPair q = s.ask();
        Vector u = s.scaling().to_unit(q.challenger);
        EXPECT_FALSE(s.samples().find_close(u).has_value());
        s.tell(oracle(q.incumbent, q.challenger));
    }
}

TEST(Session, LinearConstraintsHoldExactly) {
    Problem p;
    p.bounds = {Vector::Zero(2), Vector::Constant(2, 2.0)};
    LinearConstraints lin;
    lin.A = Matrix::Ones(1, 2);
    lin.b = Vector::Constant(1, 1.5);
    p.constraints.linear = lin;
    Session s = Session::create(p, quick(14, 2));
    auto oracle = exact([](const Vector& x) { return (x - Vector::Constant(2, 1.0)).squaredNorm(); });
    while (s.phase() != Phase::Done) {
        QueryPair q = s.ask();
        EXPECT_TRUE(p.bounds.contains(q.challenger, 1e-12));
        if (s.phase() == Phase::Active) {
            EXPECT_LE(q.challenger.sum(), 1.5 + 1e-9);
        }
        s.tell(oracle(q.incumbent, q.challenger));
    }
}

TEST(Session, PiCriterionRuns) {
    EngineConfig cfg = quick(10, 1);
    cfg.acquisition.criterion = AcquisitionKind::PI;
    Session s = Session::create(line_problem(), cfg);
    run_auto(s, exact(f1));
    EXPECT_EQ(s.phase(), Phase::Done);
}

TEST(SessionProperty, BestIsMonotoneUnderExactOracle) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Session s = Session::create(line_problem(), quick(12, seed));
        auto oracle = exact(f1);
        double last = f1(s.best());
        while (s.phase() != Phase::Done) {
            QueryPair q = s.ask();
            s.tell(oracle(q.incumbent, q.challenger));
            const double now = f1(s.best());
            EXPECT_LE(now, last);
            last = now;
        }
    }
}

TEST(SessionProperty, IncumbentIsPreferenceConsistent) {
    Session s = Session::create(line_problem(), quick(12, 9));
    run_auto(s, exact(f1));
    // No record declares another sample strictly better than the incumbent.
    for (const auto& r : s.preferences()) {
        if (r.left == s.best_index()) EXPECT_NE(r.outcome, Preference::SecondBetter);
        if (r.right == s.best_index()) EXPECT_NE(r.outcome, Preference::FirstBetter);
    }
}

TEST(RunAuto, ConstantTieOracleKeepsFirstSample) {
    Session s = Session::create(line_problem(), quick(8));
    auto trace = run_auto(s, [](const Vector&, const Vector&) { return Preference::Tie; });
    EXPECT_EQ(s.best_index(), 0u);
    ASSERT_EQ(trace.size(), 1u);
    EXPECT_EQ(trace[0], (TraceEntry{0, 0}));
}

TEST(RunAuto, ReachesGlobalBasinOfOneDimensionalExample) {
    double grid_min = INFINITY;
    for (int k = 0; k < 10000; ++k) grid_min = std::min(grid_min, latent_1d(-3.0 + 6.0 * k / 9999.0));
    EngineConfig cfg;
    cfg.n_max = 20;
    cfg.n_init = 3;
    cfg.acquisition.delta = 1.0;
    cfg.seed = 1;
    Session s = Session::create(line_problem(), cfg);
    run_auto(s, exact(f1));
    EXPECT_LE(f1(s.best()), grid_min + 0.1);
}

TEST(RunAuto, DeterministicReplay) {
    Session a = Session::create(line_problem(), quick(12, 42));
    Session b = Session::create(line_problem(), quick(12, 42));
    EXPECT_EQ(run_auto(a, exact(f1)), run_auto(b, exact(f1)));
    for (std::size_t i = 0; i < a.num_samples(); ++i) EXPECT_EQ(a.samples()[i], b.samples()[i]);
}

TEST(RunAuto, OracleFailurePropagates) {
    Session s = Session::create(line_problem(), quick(8));
    EXPECT_THROW(run_auto(s, [](const Vector&, const Vector&) -> Preference { throw std::runtime_error("x"); }),
                 std::runtime_error);
}

TEST(SessionProperty, SaveLoadContinueMatchesUninterrupted) {
    EngineConfig cfg = quick(14, 5);
    cfg.n_init = 4;
    auto oracle = exact(f1);
    Session whole = Session::create(line_problem(), cfg);
    run_auto(whole, oracle);

    Session part = Session::create(line_problem(), cfg);
    for (int k = 0; k < 7; ++k) {
        QueryPair q = part.ask();
        part.tell(oracle(q.incumbent, q.challenger));
    }
    part.ask();  // pending query travels with the document
    Json doc = Json::parse(SessionCodec::encode(part).dump());
    Session resumed = SessionCodec::decode(doc);
    run_auto(resumed, oracle);

    ASSERT_EQ(resumed.num_samples(), whole.num_samples());
    for (std::size_t i = 0; i < whole.num_samples(); ++i) EXPECT_EQ(resumed.samples()[i], whole.samples()[i]);
    EXPECT_EQ(resumed.best_trace(), whole.best_trace());
    EXPECT_EQ(resumed.preferences(), whole.preferences());
    EXPECT_EQ(resumed.epsilon(), whole.epsilon());
}

TEST(Scalarization, TwoObjectivesGiveOneVariable) {
    Problem p = scalarization_problem(2);
    EXPECT_EQ(p.bounds.dim(), 1u);
    Vector w = simplex_weights(Vector::Constant(1, 0.3));
    EXPECT_DOUBLE_EQ(w[0], 0.3);
    EXPECT_DOUBLE_EQ(w[1], 0.7);
    EXPECT_THROW(scalarization_problem(1), ConfigError);
}

TEST(Scalarization, SessionCarriesObjectivePayload) {
    ScalarizationProblem mo;
    mo.objectives = {[](const Vector& z) { return (z[0] - 1.0) * (z[0] - 1.0); },
                     [](const Vector& z) { return (z[0] + 1.0) * (z[0] + 1.0); }};
    mo.inner_bounds = {Vector::Constant(1, -2.0), Vector::Constant(1, 2.0)};
    mo.inner_pso.iterations = 50;
    EngineConfig cfg = quick(5);
    Session s = scalarization_session(mo, cfg);
    QueryPair q = s.ask();
    ASSERT_TRUE(q.challenger_payload.has_value());
    // Weighted sum of the two parabolas is minimized at z = w1 - w2.
    const double w1 = q.challenger[0];
    const double z = w1 - (1.0 - w1);
    EXPECT_NEAR((*q.challenger_payload)[0], (z - 1.0) * (z - 1.0), 1e-4);
    EXPECT_NEAR((*q.challenger_payload)[1], (z + 1.0) * (z + 1.0), 1e-4);
}
