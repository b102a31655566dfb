#pragma once

#include "prefopt/surrogate.hpp"

namespace prefopt {

/// IDW exploration term: 0 at samples, otherwise atan(1 / sum_i 1/d_i^2) with d_i the
/// squared distance to sample i. Bounded by pi/2.
double idw_exploration(const Vector& x, const SampleSet& samples);

/// a(x) = f_hat(x) / range - delta * z(x).
class IDWAcquisition {
public:
    IDWAcquisition(RBFSurrogate surrogate, double delta);
    IDWAcquisition(RBFSurrogate surrogate, double delta, double range);

    double operator()(const Vector& x) const;

    const RBFSurrogate& surrogate() const { return surrogate_; }
    double delta() const { return delta_; }
    double range() const { return range_; }

private:
    RBFSurrogate surrogate_;
    double delta_;
    double range_;
};

inline double acquisition_idw(const Vector& x, const IDWAcquisition& acq) { return acq(x); }

}  // namespace prefopt
