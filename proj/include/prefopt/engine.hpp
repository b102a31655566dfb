#pragma once

#include "prefopt/calibration.hpp"
#include "prefopt/probability.hpp"
#include "prefopt/psopt.hpp"
#include "prefopt/rng.hpp"
#include "prefopt/sampling.hpp"
#include "prefopt/scaling.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace prefopt {

enum class AcquisitionKind { IDW, PI };

std::string to_string(AcquisitionKind a);
AcquisitionKind acquisition_from_string(const std::string& tag);

struct AcquisitionSpec {
    AcquisitionKind criterion = AcquisitionKind::IDW;
    double delta = 2.0;
    /// PI ignores delta unless this is set, in which case -delta z is added.
    bool pi_exploration = false;
    LossWeights weights;
};

struct EngineConfig {
    std::size_t n_max = 20;
    std::size_t n_init = 0;  ///< 0: ceil(n_max / 3)
    AcquisitionSpec acquisition;
    double sigma = 0.0;  ///< 0: 1 / n_max
    double lambda = 1e-6;
    KernelFamily kernel = KernelFamily::InverseQuadratic;
    double epsilon = 1.0;
    bool calibrate = true;
    /// Empty thetas / schedule are filled with the defaults by resolve().
    CalibrationPlan calibration;
    PSOConfig pso;
    double penalty_rho = 1000.0;
    bool anchor_best = false;
    std::size_t max_oversample = kDefaultMaxOversample;
    std::uint64_t seed = 0;

    /// Fills defaults and validates; throws ConfigError.
    void resolve();
};

struct Problem {
    BoxBounds bounds;
    ConstraintSet constraints;
    /// Optional registry name, used to rebind callbacks after loading a saved session.
    std::string name;
};

/// Extra per-candidate data shown to the decision maker (e.g. objective vectors).
using PayloadFunction = std::function<Vector(const Vector&)>;

enum class Phase { Initializing, Active, Done };
std::string to_string(Phase p);
Phase phase_from_string(const std::string& tag);

class StateError : public Error {
public:
    using Error::Error;
};

struct QueryPair {
    Vector incumbent;   ///< original units
    Vector challenger;  ///< original units
    std::size_t incumbent_index = 0;
    std::size_t challenger_index = 0;
    std::size_t query_index = 0;  ///< 1-based count of this query
    bool challenger_feasible = true;
    std::optional<Vector> incumbent_payload;
    std::optional<Vector> challenger_payload;
};

struct CalibrationEvent {
    std::size_t n = 0;
    double epsilon_before = 0.0;
    double epsilon_after = 0.0;
    std::string status;
    std::vector<std::size_t> correct;
    std::size_t tested = 0;
};

/// Resumable ask/tell state machine for preference-driven optimization.
class Session {
public:
    Session() = default;

    static Session create(const Problem& problem, EngineConfig cfg, PayloadFunction payload = {});

    /// The pending query, computing it first if needed. Repeated calls return the same pair.
    QueryPair ask();
    void tell(Preference outcome);

    bool has_pending() const { return pending_.has_value(); }
    Vector best() const;
    std::size_t best_index() const { return best_; }
    std::size_t num_samples() const { return samples_.size(); }
    std::size_t queries_done() const { return prefs_.size(); }
    std::size_t queries_remaining() const { return cfg_.n_max - samples_.size(); }
    Phase phase() const { return phase_; }
    double epsilon() const { return epsilon_; }
    const EngineConfig& config() const { return cfg_; }
    const Problem& problem() const { return problem_; }
    const ScalingMap& scaling() const { return scaling_; }
    const SampleSet& samples() const { return samples_; }
    const SampleSet& initial_design() const { return design_; }
    bool design_all_feasible() const { return design_feasible_; }
    const std::vector<PreferenceRecord>& preferences() const { return prefs_; }
    /// best index after each completed query
    const std::vector<std::size_t>& best_trace() const { return best_trace_; }
    const std::vector<CalibrationEvent>& calibration_history() const { return calibration_; }
    const std::vector<std::optional<Vector>>& payloads() const { return payloads_; }
    Vector sample(std::size_t i) const { return scaling_.from_unit(samples_[i]); }
    /// Surrogate fitted by the last active-phase ask (unit coordinates).
    const std::optional<RBFSurrogate>& surrogate() const { return surrogate_; }

    /// Rebinds callbacks after loading (nonlinear constraints are not serializable).
    void bind(NonlinearConstraint nonlinear, PayloadFunction payload);

    friend struct SessionCodec;

private:
    Vector propose();
    std::optional<Vector> payload_at(const Vector& unit) const;

    EngineConfig cfg_;
    Problem problem_;
    PayloadFunction payload_;
    ScalingMap scaling_;
    SampleSet design_;
    bool design_feasible_ = true;
    SampleSet samples_;
    std::vector<std::optional<Vector>> payloads_;
    std::vector<PreferenceRecord> prefs_;
    std::vector<std::size_t> best_trace_;
    std::size_t best_ = 0;
    Phase phase_ = Phase::Initializing;
    double epsilon_ = 1.0;
    std::vector<CalibrationEvent> calibration_;
    CounterRng rng_;
    std::optional<RBFSurrogate> surrogate_;

    struct Pending {
        Vector unit;
        bool feasible = true;
        std::optional<Vector> payload;
    };
    std::optional<Pending> pending_;
};

using PreferenceOracle = std::function<Preference(const Vector&, const Vector&)>;

struct TraceEntry {
    std::size_t query_count = 0;
    std::size_t best_index = 0;
    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Alternates ask/tell until done. The trace has one entry at start and one per incumbent change.
std::vector<TraceEntry> run_auto(Session& s, const PreferenceOracle& oracle);

// Multi-objective scalarization ----------------------------------------------

using ScalarObjective = std::function<double(const Vector&)>;

struct ScalarizationProblem {
    std::vector<ScalarObjective> objectives;  ///< F_1..F_n over z
    BoxBounds inner_bounds;                   ///< box on z
    NonlinearConstraint inner_constraints;    ///< optional g(z) <= 0, penalty-handled
    PSOConfig inner_pso;
};

struct ScalarizedPoint {
    Vector z;
    Vector objectives;  ///< F*(x) components, i.e. F_i(z*)
};

/// Full weight vector (x_1..x_{n-1}, 1 - sum) from the reduced simplex coordinates.
Vector simplex_weights(const Vector& reduced);

/// min_z sum_i w_i F_i(z) over the inner box by PSO; deterministic.
ScalarizedPoint solve_scalarized(const ScalarizationProblem& mo, const Vector& weights);

/// Problem over the reduced weight simplex {x >= 0, sum x <= 1} in n-1 variables.
Problem scalarization_problem(std::size_t n_objectives);

/// Session over scalarization weights whose queries carry F* vectors as payload.
Session scalarization_session(const ScalarizationProblem& mo, EngineConfig cfg);

}  // namespace prefopt
