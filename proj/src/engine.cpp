#include "prefopt/engine.hpp"

#include "prefopt/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace prefopt {

namespace {

constexpr double kLinearTol = 1e-12;

std::function<bool(const Vector&)> unit_feasibility(const ScalingMap& sm, const NonlinearConstraint& g) {
    if (!sm.unit_linear && !g) return {};
    return [&sm, g](const Vector& xbar) {
        if (sm.unit_linear && !sm.unit_linear->satisfied(xbar, kLinearTol)) return false;
        if (g && (g(sm.from_unit(xbar)).array() > 0.0).any()) return false;
        return true;
    };
}

std::uint64_t acquisition_seed(std::uint64_t session_seed, std::uint64_t pso_seed, std::size_t n) {
    return CounterRng(session_seed ^ mix64(pso_seed)).split(n).next_u64();
}

}  // namespace

std::string to_string(AcquisitionKind a) { return a == AcquisitionKind::IDW ? "idw" : "pi"; }

AcquisitionKind acquisition_from_string(const std::string& tag) {
    if (tag == "idw") return AcquisitionKind::IDW;
    if (tag == "pi") return AcquisitionKind::PI;
    throw ConfigError("unknown acquisition '" + tag + "'");
}

std::string to_string(Phase p) {
    switch (p) {
        case Phase::Initializing: return "initializing";
        case Phase::Active: return "active";
        case Phase::Done: return "done";
    }
    return "done";
}

Phase phase_from_string(const std::string& tag) {
    if (tag == "initializing") return Phase::Initializing;
    if (tag == "active") return Phase::Active;
    if (tag == "done") return Phase::Done;
    throw InvalidValueError("unknown phase '" + tag + "'");
}

void EngineConfig::resolve() {
    if (n_max < 2) throw ConfigError("N_max must be at least 2");
    if (n_init == 0) n_init = std::max<std::size_t>(2, (n_max + 2) / 3);
    if (n_init < 2 || n_init > n_max) throw ConfigError("need 2 <= N_init <= N_max");
    if (sigma == 0.0) sigma = 1.0 / static_cast<double>(n_max);
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (!(lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(acquisition.delta >= 0.0)) throw ConfigError("delta must be nonnegative");
    if (!(penalty_rho > 0.0)) throw ConfigError("penalty weight must be positive");
    acquisition.weights.validate();
    if (calibration.thetas.empty()) calibration.thetas = default_thetas();
    if (calibration.schedule.empty()) calibration.schedule = default_schedule(n_init, n_max);
    if (calibrate) calibration.validate(n_max);
    pso.validate();
}

Session Session::create(const Problem& problem, EngineConfig cfg, PayloadFunction payload) {
    cfg.resolve();
    problem.bounds.validate();
    problem.constraints.validate(problem.bounds.dim());
    Session s;
    s.cfg_ = cfg;
    s.problem_ = problem;
    s.payload_ = std::move(payload);
    s.scaling_ = ScalingMap::from_problem(problem.bounds, problem.constraints);
    s.rng_ = CounterRng(cfg.seed);
    const auto feasible = unit_feasibility(s.scaling_, problem.constraints.nonlinear);
    InitialDesign design = feasible_initial_design(cfg.n_init, s.scaling_.unit_dim(), feasible, s.rng_,
                                                   cfg.max_oversample);
    s.design_ = std::move(design.samples);
    s.design_feasible_ = design.all_feasible;
    s.samples_ = SampleSet(s.scaling_.unit_dim());
    s.samples_.push_back(s.design_[0]);
    s.payloads_.push_back(s.payload_at(s.design_[0]));
    s.epsilon_ = cfg.epsilon;
    return s;
}

void Session::bind(NonlinearConstraint nonlinear, PayloadFunction payload) {
    problem_.constraints.nonlinear = std::move(nonlinear);
    payload_ = std::move(payload);
}

std::optional<Vector> Session::payload_at(const Vector& unit) const {
    if (!payload_) return std::nullopt;
    return payload_(scaling_.from_unit(unit));
}

Vector Session::best() const { return scaling_.from_unit(samples_[best_]); }

QueryPair Session::ask() {
    if (phase_ == Phase::Done) throw StateError("session is done");
    if (!pending_) {
        const std::size_t n = samples_.size();
        Vector unit = n < design_.size() && n < cfg_.n_init ? design_[n] : propose();
        const auto feasible = unit_feasibility(scaling_, problem_.constraints.nonlinear);
        Pending p;
        p.feasible = !feasible || feasible(unit);
        p.payload = payload_at(unit);
        p.unit = std::move(unit);
        pending_ = std::move(p);
    }
    QueryPair q;
    q.incumbent = best();
    q.challenger = scaling_.from_unit(pending_->unit);
    q.incumbent_index = best_;
    q.challenger_index = samples_.size();
    q.query_index = samples_.size();
    q.challenger_feasible = pending_->feasible;
    q.incumbent_payload = payloads_[best_];
    q.challenger_payload = pending_->payload;
    return q;
}

Vector Session::propose() {
    const std::size_t n = samples_.size();
    FitConfig fit;
    fit.sigma = cfg_.sigma;
    fit.lambda = cfg_.lambda;
    for (const auto& p : prefs_) fit.weights.push_back(cfg_.acquisition.weights[p.outcome]);

    if (cfg_.calibrate && cfg_.calibration.schedule.contains(n) && prefs_.size() >= 2) {
        const auto grid = epsilon_grid(cfg_.epsilon, cfg_.calibration);
        const CalibrationScore score =
            cross_validate_epsilon(samples_, prefs_, fit, cfg_.kernel, grid, best_, epsilon_,
                                   cfg_.calibration.policy, cfg_.calibration.folds);
        calibration_.push_back({n, epsilon_, score.chosen, score.status, score.correct, score.tested});
        epsilon_ = score.chosen;
    }

    std::optional<std::size_t> anchor;
    if (cfg_.anchor_best) anchor = best_;
    const KernelMatrix km = build_kernel_matrix(samples_, epsilon_, cfg_.kernel);
    RBFSurrogate s = fit_surrogate(km, prefs_, fit, anchor);
    surrogate_ = s;

    Objective acquisition;
    double scale = 1.0;
    if (cfg_.acquisition.criterion == AcquisitionKind::IDW) {
        IDWAcquisition acq(s, cfg_.acquisition.delta);
        scale = acq.range();
        acquisition = [acq](const Vector& x) { return acq(x); };
    } else {
        PreferencePosterior post{s, cfg_.sigma, cfg_.acquisition.weights, best_};
        PIAcquisition acq(post, cfg_.acquisition.pi_exploration ? cfg_.acquisition.delta : 0.0);
        acquisition = [acq](const Vector& x) { return acq(x); };
    }
    const SampleSet& samples = samples_;
    Objective objective = [&](const Vector& x) {
        if (samples.find_close(x)) return std::numeric_limits<double>::infinity();
        return acquisition(x);
    };

    MinimizeOptions opt;
    if (problem_.constraints.nonlinear) {
        const ScalingMap& sm = scaling_;
        const NonlinearConstraint g = problem_.constraints.nonlinear;
        opt.penalty = PenaltySpec{[&sm, g](const Vector& x) { return g(sm.from_unit(x)); }, cfg_.penalty_rho, scale};
    }
    if (scaling_.unit_linear) {
        const LinearConstraints& lin = *scaling_.unit_linear;
        opt.hard_feasible = [&lin](const Vector& x) { return lin.satisfied(x, kLinearTol); };
        for (const auto& x : samples_) {
            if (lin.satisfied(x, kLinearTol)) opt.seeds.push_back(x);
        }
    }
    PSOConfig pso = cfg_.pso;
    pso.seed = acquisition_seed(cfg_.seed, cfg_.pso.seed, n);
    const PSOResult res = pso_minimize(objective, scaling_.unit_dim(), pso, opt);
    if (!std::isfinite(res.value) || samples_.find_close(res.x)) {
        throw SolverError("acquisition minimization did not produce a new sample");
    }
    return res.x;
}

void Session::tell(Preference outcome) {
    if (!pending_) throw StateError("no pending query");
    const std::size_t j = samples_.size();
    samples_.push_back(pending_->unit);
    payloads_.push_back(pending_->payload);
    prefs_.push_back({best_, j, outcome});
    if (outcome == Preference::SecondBetter) best_ = j;
    best_trace_.push_back(best_);
    pending_.reset();
    const std::size_t n = samples_.size();
    if (n >= cfg_.n_max) {
        phase_ = Phase::Done;
    } else if (n >= cfg_.n_init) {
        phase_ = Phase::Active;
    }
}

std::vector<TraceEntry> run_auto(Session& s, const PreferenceOracle& oracle) {
    std::vector<TraceEntry> trace{{s.queries_done(), s.best_index()}};
    while (s.phase() != Phase::Done) {
        const QueryPair q = s.ask();
        s.tell(oracle(q.incumbent, q.challenger));
        if (s.best_index() != trace.back().best_index) trace.push_back({s.queries_done(), s.best_index()});
    }
    return trace;
}

// Scalarization ---------------------------------------------------------------

Vector simplex_weights(const Vector& reduced) {
    Vector w(reduced.size() + 1);
    w.head(reduced.size()) = reduced.cwiseMax(0.0);
    w[reduced.size()] = std::max(0.0, 1.0 - w.head(reduced.size()).sum());
    return w;
}

ScalarizedPoint solve_scalarized(const ScalarizationProblem& mo, const Vector& weights) {
    if (static_cast<std::size_t>(weights.size()) != mo.objectives.size()) {
        throw DimensionError("weight count must match the number of objectives");
    }
    const ScalingMap inner(mo.inner_bounds.lower, mo.inner_bounds.upper);
    auto scalarized = [&](const Vector& zbar) {
        const Vector z = inner.from_unit(zbar);
        double total = 0.0;
        for (std::size_t i = 0; i < mo.objectives.size(); ++i) {
            total += weights[static_cast<Eigen::Index>(i)] * mo.objectives[i](z);
        }
        return total;
    };
    MinimizeOptions opt;
    if (mo.inner_constraints) {
        opt.penalty = PenaltySpec{[&](const Vector& zbar) { return mo.inner_constraints(inner.from_unit(zbar)); },
                                  1000.0, 1.0};
    }
    const PSOResult res = pso_minimize(scalarized, inner.unit_dim(), mo.inner_pso, opt);
    ScalarizedPoint out;
    out.z = inner.from_unit(res.x);
    out.objectives.resize(static_cast<Eigen::Index>(mo.objectives.size()));
    for (std::size_t i = 0; i < mo.objectives.size(); ++i) {
        out.objectives[static_cast<Eigen::Index>(i)] = mo.objectives[i](out.z);
    }
    return out;
}

Problem scalarization_problem(std::size_t n_objectives) {
    if (n_objectives < 2) throw ConfigError("scalarization needs at least two objectives");
    const auto m = static_cast<Eigen::Index>(n_objectives - 1);
    Problem p;
    p.bounds = {Vector::Zero(m), Vector::Ones(m)};
    LinearConstraints lin;
    lin.A = Matrix::Ones(1, m);
    lin.b = Vector::Ones(1);
    p.constraints.linear = lin;
    p.name = "scalarization";
    return p;
}

Session scalarization_session(const ScalarizationProblem& mo, EngineConfig cfg) {
    Problem p = scalarization_problem(mo.objectives.size());
    return Session::create(p, std::move(cfg),
                           [mo](const Vector& x) { return solve_scalarized(mo, simplex_weights(x)).objectives; });
}

}  // namespace prefopt
