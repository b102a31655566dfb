#pragma once

#include "prefopt/codec.hpp"
#include "prefopt/engine.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace prefopt {

using LatentFunction = std::function<double(const Vector&)>;

struct LatentProblem {
    std::string name;
    Problem problem;
    LatentFunction f;
    /// Published optimum value, if any (sasena, multiobjective).
    std::optional<double> known_value;
    std::optional<Vector> known_point;
    /// Set for scalarization problems: F* at a weight vector.
    PayloadFunction payload;
    /// Set for scalarization problems.
    std::optional<ScalarizationProblem> scalarization;

    std::size_t dim() const { return problem.bounds.dim(); }
};

std::vector<std::string> latent_names();
bool has_latent(const std::string& name);
/// Throws ConfigError for unknown names.
LatentProblem latent_suite(const std::string& name);

/// The three-objective example over z in [-1, 1]^3.
ScalarizationProblem multiobjective_example();
/// || (F1 - F2, F1 - F3, F2 - F3) ||
double closeness_latent(const Vector& f_star);

/// Session over a named problem, with callbacks bound.
Session make_session(const LatentProblem& p, const EngineConfig& cfg);
/// Rebinds callbacks of a saved session by its problem name.
Session load_session(const Json& doc);

struct ReferenceOptimum {
    Vector x;
    double value = 0.0;
};

/// Best of `restarts` PSO runs on the latent (penalized nonlinear / hard linear constraints).
/// Cached per (name, restarts, seed).
ReferenceOptimum reference_optimum(const LatentProblem& p, std::size_t restarts = 20, std::uint64_t seed = 0);

/// Synthetic preference with multiplicative noise draw d: the lexicographically smaller
/// argument's value is scaled by (1 + d), so swapping arguments negates the outcome.
Preference noisy_preference(const LatentFunction& f, const Vector& x, const Vector& y, double d);

/// d ~ Uniform(-amplitude, amplitude) once per comparison; amplitude 0 gives the exact oracle.
PreferenceOracle noisy_preference_oracle(const LatentFunction& f, double amplitude, std::uint64_t seed);

struct RunResult {
    std::uint64_t seed = 0;
    /// latent value at the incumbent after each query (entry 0: before the first query)
    std::vector<double> best_values;
    Vector best_x;
    double cpu_seconds = 0.0;
    bool ok = true;
    std::string error;
};

struct BenchmarkReport {
    std::string problem;
    EngineConfig config;
    double noise = 0.0;
    std::vector<RunResult> runs;
    std::vector<double> median, min, max;  ///< per query index over successful runs

    void aggregate();
    std::size_t successful_runs() const;
};

struct BenchmarkOptions {
    double noise = 0.0;
    std::size_t threads = 1;
};

BenchmarkReport run_benchmark(const LatentProblem& p, const EngineConfig& cfg, const std::vector<std::uint64_t>& seeds,
                              const BenchmarkOptions& options = {});

/// <dir>/<problem>_summary.csv, <problem>_runs.csv and <problem>_report.json.
void write_report(const BenchmarkReport& r, const std::filesystem::path& dir);

struct SummaryRow {
    std::size_t query_index = 0;
    double median = 0.0, min = 0.0, max = 0.0;
};
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& file);

/// Feasible random search baseline: best latent over `count` feasible LHS samples.
double random_search_best(const LatentProblem& p, std::size_t count, std::uint64_t seed);

}  // namespace prefopt
