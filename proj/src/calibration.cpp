#include "prefopt/calibration.hpp"

#include <algorithm>
#include <cmath>

namespace prefopt {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

void CalibrationPlan::validate(std::size_t n_max) const {
    if (thetas.empty()) throw ConfigError("calibration grid must be nonempty");
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!(thetas[i] > 0.0)) throw ConfigError("calibration multipliers must be positive");
        if (i > 0 && !(thetas[i] > thetas[i - 1])) throw ConfigError("calibration grid must be strictly increasing");
    }
    for (std::size_t n : schedule) {
        if (n < 1 || n + 1 > n_max) throw ConfigError("calibration schedule entries must lie in [1, N_max - 1]");
    }
    if (policy == FoldPolicy::KFold && folds < 2) throw ConfigError("k-fold calibration needs at least 2 folds");
}

std::vector<double> default_thetas() {
    std::vector<double> thetas;
    for (int l = 1; l <= 10; ++l) thetas.push_back(std::pow(10.0, -1.0 + (l - 1) / 5.0));
    return thetas;
}

std::set<std::size_t> default_schedule(std::size_t n_init, std::size_t n_max) {
    const std::size_t range = n_max > n_init ? n_max - n_init : 0;
    std::set<std::size_t> schedule{n_init, n_init + ceil_div(range, 4), n_init + ceil_div(range, 2),
                                   n_init + ceil_div(3 * range, 4)};
    std::erase_if(schedule, [&](std::size_t n) { return n + 1 > n_max; });
    return schedule;
}

CalibrationPlan default_calibration_plan(std::size_t n_init, std::size_t n_max) {
    CalibrationPlan plan;
    plan.thetas = default_thetas();
    plan.schedule = default_schedule(n_init, n_max);
    return plan;
}

std::vector<double> epsilon_grid(double epsilon, const CalibrationPlan& plan) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    std::vector<double> grid;
    grid.reserve(plan.thetas.size());
    for (double theta : plan.thetas) grid.push_back(epsilon * theta);
    return grid;
}

std::vector<std::vector<std::size_t>> make_folds(const std::vector<PreferenceRecord>& prefs, std::size_t best_index,
                                                 FoldPolicy policy, std::size_t k) {
    std::vector<std::size_t> eligible;
    for (std::size_t h = 0; h < prefs.size(); ++h) {
        if (prefs[h].left != best_index && prefs[h].right != best_index) eligible.push_back(h);
    }
    std::vector<std::vector<std::size_t>> folds;
    if (policy == FoldPolicy::LeaveOneOut) {
        for (std::size_t h : eligible) folds.push_back({h});
        return folds;
    }
    const std::size_t count = std::min(k, eligible.size());
    folds.resize(count);
    for (std::size_t r = 0; r < eligible.size(); ++r) folds[r % count].push_back(eligible[r]);
    return folds;
}

CalibrationScore cross_validate_epsilon(const SampleSet& samples, const std::vector<PreferenceRecord>& prefs,
                                        const FitConfig& cfg, KernelFamily kernel,
                                        const std::vector<double>& candidates, std::size_t best_index,
                                        double current_epsilon, FoldPolicy policy, std::size_t k) {
    if (candidates.empty()) throw ConfigError("no calibration candidates");
    if (prefs.size() < 2) throw InvalidValueError("calibration needs at least two preferences");
    validate_preferences(prefs, samples.size());

    CalibrationScore score;
    score.candidates = candidates;
    score.correct.assign(candidates.size(), 0);

    const auto folds = make_folds(prefs, best_index, policy, k);
    if (folds.empty()) {
        score.status = "no_test_folds";
        score.chosen = current_epsilon;
        return score;
    }
    for (const auto& fold : folds) score.tested += fold.size();

    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const KernelMatrix km = build_kernel_matrix(samples, candidates[c], kernel);
        for (const auto& fold : folds) {
            std::vector<PreferenceRecord> train;
            FitConfig train_cfg = cfg;
            train_cfg.weights.clear();
            for (std::size_t h = 0; h < prefs.size(); ++h) {
                if (std::find(fold.begin(), fold.end(), h) != fold.end()) continue;
                train.push_back(prefs[h]);
                if (!cfg.weights.empty()) train_cfg.weights.push_back(cfg.weights[h]);
            }
            if (train.empty()) continue;
            const RBFSurrogate s = fit_surrogate(km, train, train_cfg);
            const Vector y = km.psi * s.beta();
            for (std::size_t h : fold) {
                const auto& p = prefs[h];
                const Preference predicted = predict_preference(y[static_cast<Eigen::Index>(p.left)],
                                                                y[static_cast<Eigen::Index>(p.right)], cfg.sigma);
                if (predicted == p.outcome) ++score.correct[c];
            }
        }
    }

    std::size_t best = 0;
    auto log_gap = [&](std::size_t c) { return std::abs(std::log(candidates[c] / current_epsilon)); };
    for (std::size_t c = 1; c < candidates.size(); ++c) {
        if (score.correct[c] > score.correct[best] ||
            (score.correct[c] == score.correct[best] && log_gap(c) < log_gap(best) - 1e-12)) {
            best = c;
        }
    }
    score.chosen = candidates[best];
    return score;
}

}  // namespace prefopt
