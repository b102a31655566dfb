#pragma once

#include "prefopt/surrogate.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace prefopt {

enum class FoldPolicy { LeaveOneOut, KFold };

struct CalibrationPlan {
    /// Strictly increasing positive multipliers applied to the base epsilon.
    std::vector<double> thetas;
    /// Iteration counts N at which epsilon is recalibrated.
    std::set<std::size_t> schedule;
    FoldPolicy policy = FoldPolicy::LeaveOneOut;
    std::size_t folds = 5;  ///< only used by KFold

    void validate(std::size_t n_max) const;
};

/// {10^(-1 + (l-1)/5)}, l = 1..10.
std::vector<double> default_thetas();

/// {N_init, N_init + ceil(R/4), N_init + ceil(R/2), N_init + ceil(3R/4)} with R = N_max - N_init.
std::set<std::size_t> default_schedule(std::size_t n_init, std::size_t n_max);

CalibrationPlan default_calibration_plan(std::size_t n_init, std::size_t n_max);

std::vector<double> epsilon_grid(double epsilon, const CalibrationPlan& plan);

/// Test folds over preference indices. Records touching best_index are never tested.
std::vector<std::vector<std::size_t>> make_folds(const std::vector<PreferenceRecord>& prefs, std::size_t best_index,
                                                 FoldPolicy policy, std::size_t k = 5);

struct CalibrationScore {
    std::vector<double> candidates;
    std::vector<std::size_t> correct;  ///< correctly predicted held-out preferences per candidate
    std::size_t tested = 0;            ///< number of held-out preferences per candidate
    double chosen = 0.0;
    /// "ok", or "no_test_folds" when exclusion left nothing to test (chosen is then the incumbent epsilon).
    std::string status = "ok";
};

/// Grid search for the RBF shape parameter by cross-validated preference prediction.
/// Ties among maximizers go to the candidate closest (in log distance) to current_epsilon.
CalibrationScore cross_validate_epsilon(const SampleSet& samples, const std::vector<PreferenceRecord>& prefs,
                                        const FitConfig& cfg, KernelFamily kernel,
                                        const std::vector<double>& candidates, std::size_t best_index,
                                        double current_epsilon, FoldPolicy policy = FoldPolicy::LeaveOneOut,
                                        std::size_t k = 5);

}  // namespace prefopt
