#include "prefopt/probability.hpp"

#include "prefopt/exploration.hpp"
#include "prefopt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace prefopt {

double LossWeights::operator[](Preference t) const {
    switch (t) {
        case Preference::FirstBetter: return first_better;
        case Preference::Tie: return tie;
        case Preference::SecondBetter: return second_better;
    }
    return tie;
}

void LossWeights::validate() const {
    if (!(first_better > 0.0 && tie > 0.0 && second_better > 0.0)) {
        throw ConfigError("loss weights must be positive");
    }
}

Vector phi_difference(double epsilon, KernelFamily kernel, const SampleSet& samples, const Vector& x,
                      const Vector& y) {
    return kernel_row(samples, epsilon, kernel, x) - kernel_row(samples, epsilon, kernel, y);
}

double hinge_loss(Preference t, double v, double sigma) {
    switch (t) {
        case Preference::FirstBetter: return std::max(0.0, v + sigma);
        case Preference::SecondBetter: return std::max(0.0, -v + sigma);
        case Preference::Tie: return std::max(0.0, std::abs(v) - sigma);
    }
    return 0.0;
}

double preference_posterior(Preference t, double v, double sigma, const LossWeights& weights) {
    // Shift by the smallest exponent so the largest term is exp(0).
    const std::array<Preference, 3> all{Preference::FirstBetter, Preference::Tie, Preference::SecondBetter};
    std::array<double, 3> expo{};
    for (std::size_t k = 0; k < 3; ++k) expo[k] = weights[all[k]] * hinge_loss(all[k], v, sigma);
    const double shift = *std::min_element(expo.begin(), expo.end());
    double denom = 0.0;
    for (double e : expo) denom += std::exp(-(e - shift));
    return std::exp(-(weights[t] * hinge_loss(t, v, sigma) - shift)) / denom;
}

double PreferencePosterior::probability(Preference t, const Vector& phi) const {
    return preference_posterior(t, phi.dot(surrogate.beta()), sigma, weights);
}

PIAcquisition::PIAcquisition(PreferencePosterior posterior, double delta)
    : posterior_(std::move(posterior)), delta_(delta) {
    posterior_.weights.validate();
    if (posterior_.best_index >= posterior_.surrogate.samples().size()) {
        throw InvalidValueError("best index out of range");
    }
    if (!(delta_ >= 0.0)) throw ConfigError("exploration weight must be nonnegative");
    const auto& s = posterior_.surrogate;
    best_row_ = kernel_row(s.samples(), s.epsilon(), s.kernel(), s.samples()[posterior_.best_index]);
}

double PIAcquisition::operator()(const Vector& x) const {
    const auto& s = posterior_.surrogate;
    const Vector phi = kernel_row(s.samples(), s.epsilon(), s.kernel(), x) - best_row_;
    double a = -posterior_.probability(Preference::FirstBetter, phi);
    if (delta_ > 0.0) a -= delta_ * idw_exploration(x, s.samples());
    return a;
}

double acquisition_pi(const Vector& x, const PreferencePosterior& posterior) {
    return PIAcquisition(posterior)(x);
}

double hinge_objective(const Matrix& phi_rows, const std::vector<Preference>& outcomes,
                       const std::vector<double>& weights, double sigma, double tau, const Vector& u) {
    const Vector v = tau * (phi_rows * u);
    double total = 0.0;
    for (std::size_t h = 0; h < outcomes.size(); ++h) {
        const double c = weights.empty() ? 1.0 : weights[h];
        total += c * hinge_loss(outcomes[h], v[static_cast<Eigen::Index>(h)], sigma);
    }
    return total;
}

MonteCarloEstimate hinge_integral_estimate(Preference t, double weight, double sigma, double tau, const Vector& u,
                                           std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 2) throw InvalidValueError("need at least two Monte Carlo samples");
    CounterRng rng(seed);
    const Eigen::Index n = u.size();
    const double scale = std::sqrt(0.5);
    // int exp(-Phi'Phi) dPhi = pi^{N/2}
    const double mass = std::pow(std::numbers::pi, 0.5 * static_cast<double>(n));
    double sum = 0.0, sum_sq = 0.0;
    Vector phi(n);
    for (std::size_t k = 0; k < n_samples; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) phi[j] = scale * rng.normal();
        const double g = std::exp(-weight * hinge_loss(t, tau * phi.dot(u), sigma));
        sum += g;
        sum_sq += g * g;
    }
    const double count = static_cast<double>(n_samples);
    const double mean = sum / count;
    const double var = std::max(0.0, (sum_sq / count - mean * mean) * count / (count - 1.0));
    return {mass * mean, mass * std::sqrt(var / count)};
}

}  // namespace prefopt
