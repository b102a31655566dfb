#include "prefopt/exploration.hpp"

#include <cmath>

namespace prefopt {

namespace {

// Shared by z(x) and the acquisition so distances are computed once per point.
double idw_from_distances(const Vector& d2) {
    double weight_sum = 0.0;
    for (Eigen::Index i = 0; i < d2.size(); ++i) {
        if (d2[i] < kDuplicateGuard) return 0.0;
        weight_sum += 1.0 / (d2[i] * d2[i]);
    }
    return std::atan(1.0 / weight_sum);
}

Vector squared_distances(const Vector& x, const SampleSet& samples) {
    if (static_cast<std::size_t>(x.size()) != samples.dim()) throw DimensionError("point dimension mismatch");
    Vector d2(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        d2[static_cast<Eigen::Index>(i)] = squared_distance(x, samples[i]);
    }
    return d2;
}

}  // namespace

double idw_exploration(const Vector& x, const SampleSet& samples) {
    if (samples.empty()) throw InvalidValueError("exploration needs at least one sample");
    return idw_from_distances(squared_distances(x, samples));
}

IDWAcquisition::IDWAcquisition(RBFSurrogate surrogate, double delta)
    : IDWAcquisition(surrogate, delta, surrogate_range(surrogate)) {}

IDWAcquisition::IDWAcquisition(RBFSurrogate surrogate, double delta, double range)
    : surrogate_(std::move(surrogate)), delta_(delta), range_(range) {
    if (!(delta_ >= 0.0)) throw ConfigError("exploration weight must be nonnegative");
    if (!(range_ > 0.0)) throw ConfigError("surrogate range must be positive");
}

double IDWAcquisition::operator()(const Vector& x) const {
    const Vector d2 = squared_distances(x, surrogate_.samples());
    double f_hat = 0.0;
    for (Eigen::Index i = 0; i < d2.size(); ++i) {
        f_hat += surrogate_.beta()[i] * kernel_value(surrogate_.kernel(), surrogate_.epsilon(), d2[i]);
    }
    const double z = delta_ > 0.0 ? idw_from_distances(d2) : 0.0;
    return f_hat / range_ - delta_ * z;
}

}  // namespace prefopt
