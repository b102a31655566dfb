#pragma once

#include "prefopt/surrogate.hpp"

#include <array>
#include <cstdint>

namespace prefopt {

/// Loss weight per outcome class (c_bar_{-1}, c_bar_0, c_bar_1).
struct LossWeights {
    double first_better = 1.0;
    double tie = 1.0;
    double second_better = 1.0;

    double operator[](Preference t) const;
    void validate() const;
};

/// Phi_k = phi(eps d(x, x_k)) - phi(eps d(y, x_k)); Phi' beta = f_hat(x) - f_hat(y).
Vector phi_difference(double epsilon, KernelFamily kernel, const SampleSet& samples, const Vector& x,
                      const Vector& y);

/// Piecewise-linear convex losses; v stands for Phi' beta.
///   t = -1: max(0, v + sigma)   t = 1: max(0, -v + sigma)   t = 0: max(0, |v| - sigma)
double hinge_loss(Preference t, double v, double sigma);

/// p(t | v) = exp(-c_t l_t(v)) / sum_s exp(-c_s l_s(v)).
double preference_posterior(Preference t, double v, double sigma, const LossWeights& weights);

/// Posterior model attached to a fitted surrogate and the current best sample.
struct PreferencePosterior {
    RBFSurrogate surrogate;
    double sigma = 1.0;
    LossWeights weights;
    std::size_t best_index = 0;

    double probability(Preference t, const Vector& phi) const;
};

/// a(x) = -p(t = -1 | Phi(x, x_best)), optionally minus delta * z(x).
class PIAcquisition {
public:
    PIAcquisition(PreferencePosterior posterior, double delta = 0.0);

    double operator()(const Vector& x) const;
    const PreferencePosterior& posterior() const { return posterior_; }

private:
    PreferencePosterior posterior_;
    double delta_;
    Vector best_row_;
};

double acquisition_pi(const Vector& x, const PreferencePosterior& posterior);

// Numerical checks of the likelihood interpretation ---------------------------

/// sum_h c_h l_{b_h}(tau * Phi_h' u) where Phi_h are the columns' preference rows.
double hinge_objective(const Matrix& phi_rows, const std::vector<Preference>& outcomes,
                       const std::vector<double>& weights, double sigma, double tau, const Vector& u);

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Importance-sampling estimate of I_t = int exp(-c l_t(tau Phi'u)) exp(-Phi'Phi) dPhi over R^N,
/// sampling Phi ~ N(0, I/2) (proposal proportional to exp(-Phi'Phi)).
MonteCarloEstimate hinge_integral_estimate(Preference t, double weight, double sigma, double tau, const Vector& u,
                                           std::size_t n_samples, std::uint64_t seed);

}  // namespace prefopt
