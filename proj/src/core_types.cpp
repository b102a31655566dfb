#include "prefopt/core_types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <utility>

namespace prefopt {

double squared_distance(const Vector& a, const Vector& b) { return (a - b).squaredNorm(); }

SampleSet::SampleSet(std::size_t dim, const std::vector<Vector>& samples) : dim_(dim) {
    samples_.reserve(samples.size());
    for (const auto& x : samples) push_back(x);
}

std::optional<std::size_t> SampleSet::find_close(const Vector& x, double guard) const {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (squared_distance(samples_[i], x) < guard) return i;
    }
    return std::nullopt;
}

void SampleSet::push_back(const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != dim_) {
        throw DimensionError("sample dimension " + std::to_string(x.size()) + " != " + std::to_string(dim_));
    }
    if (!x.allFinite()) throw InvalidValueError("sample has non-finite entries");
    if (auto i = find_close(x)) {
        throw DuplicateSampleError("sample coincides with stored sample " + std::to_string(*i));
    }
    samples_.push_back(x);
}

Preference preference_from_int(int value) {
    if (value < -1 || value > 1) {
        throw InvalidValueError("preference outcome must be -1, 0 or 1, got " + std::to_string(value));
    }
    return static_cast<Preference>(value);
}

Preference preference_from_values(double f1, double f2) {
    if (!std::isfinite(f1) || !std::isfinite(f2)) throw InvalidValueError("non-finite latent value");
    if (f1 < f2) return Preference::FirstBetter;
    if (f1 > f2) return Preference::SecondBetter;
    return Preference::Tie;
}

void validate_preferences(const std::vector<PreferenceRecord>& prefs, std::size_t n_samples) {
    for (const auto& p : prefs) {
        if (p.left >= n_samples || p.right >= n_samples) {
            throw InvalidValueError("preference index out of range");
        }
        if (p.left == p.right) throw InvalidValueError("preference compares a sample with itself");
    }
}

ConsistencyReport check_transitive_consistency(const std::vector<PreferenceRecord>& prefs) {
    // better[a] = set of b with a strictly preferred to b.
    std::map<std::size_t, std::set<std::size_t>> better;
    // Recorded outcome per unordered pair, normalized to (min,max) orientation.
    std::map<std::pair<std::size_t, std::size_t>, std::set<int>> recorded;
    for (const auto& p : prefs) {
        int b = to_int(p.outcome);
        if (b == -1) better[p.left].insert(p.right);
        if (b == 1) better[p.right].insert(p.left);
        if (p.left < p.right) {
            recorded[{p.left, p.right}].insert(b);
        } else {
            recorded[{p.right, p.left}].insert(-b);
        }
    }

    // Does any record on (a,c) fail to say "a strictly better than c"?
    auto contradicts = [&](std::size_t a, std::size_t c) {
        bool flipped = a > c;
        auto it = recorded.find(flipped ? std::make_pair(c, a) : std::make_pair(a, c));
        if (it == recorded.end()) return false;
        int expected = flipped ? 1 : -1;
        return std::any_of(it->second.begin(), it->second.end(), [&](int b) { return b != expected; });
    };

    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> found;
    for (const auto& [a, worse_than_a] : better) {
        for (std::size_t b : worse_than_a) {
            auto it = better.find(b);
            if (it == better.end()) continue;
            for (std::size_t c : it->second) {
                if (c == a || !contradicts(a, c)) continue;
                if (better.count(c) && better.at(c).count(a)) {
                    // Strict 3-cycle: report each cycle once, smallest index first.
                    std::array<std::size_t, 3> cyc{a, b, c};
                    std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
                    found.insert({cyc[0], cyc[1], cyc[2]});
                } else {
                    found.insert({a, b, c});
                }
            }
        }
    }

    ConsistencyReport report;
    for (const auto& [a, b, c] : found) report.violations.push_back({a, b, c});
    report.consistent = report.violations.empty();
    return report;
}

void BoxBounds::validate() const {
    if (lower.size() != upper.size()) throw DimensionError("bound vectors differ in length");
    if (lower.size() == 0) throw DimensionError("bounds must have dimension >= 1");
    if (!lower.allFinite() || !upper.allFinite()) throw InvalidValueError("bounds must be finite");
    for (Eigen::Index j = 0; j < lower.size(); ++j) {
        if (lower[j] > upper[j]) {
            throw InfeasibleError("lower bound exceeds upper bound in coordinate " + std::to_string(j));
        }
    }
}

bool BoxBounds::contains(const Vector& x, double tol) const {
    return ((x - lower).array() >= -tol).all() && ((upper - x).array() >= -tol).all();
}

bool LinearConstraints::satisfied(const Vector& x, double tol) const {
    if (b.size() == 0) return true;
    return ((A * x - b).array() <= tol).all();
}

void ConstraintSet::validate(std::size_t n) const {
    if (!linear) return;
    if (linear->A.rows() != linear->b.size()) throw DimensionError("constraint matrix rows != rhs length");
    if (linear->b.size() > 0 && static_cast<std::size_t>(linear->A.cols()) != n) {
        throw DimensionError("constraint matrix columns != problem dimension");
    }
}

bool ConstraintSet::satisfied(const Vector& x, double tol) const {
    if (linear && !linear->satisfied(x, tol)) return false;
    if (nonlinear && (nonlinear(x).array() > tol).any()) return false;
    return true;
}

std::string to_string(KernelFamily k) {
    switch (k) {
        case KernelFamily::InverseQuadratic: return "inverse_quadratic";
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::ThinPlateSpline: return "thin_plate_spline";
        case KernelFamily::Multiquadric: return "multiquadric";
        case KernelFamily::Linear: return "linear";
    }
    throw ConfigError("unknown kernel family");
}

KernelFamily kernel_from_string(const std::string& tag) {
    if (tag == "inverse_quadratic") return KernelFamily::InverseQuadratic;
    if (tag == "gaussian") return KernelFamily::Gaussian;
    if (tag == "thin_plate_spline") return KernelFamily::ThinPlateSpline;
    if (tag == "multiquadric") return KernelFamily::Multiquadric;
    if (tag == "linear") return KernelFamily::Linear;
    throw ConfigError("unknown kernel family '" + tag + "'");
}

void FitConfig::validate() const {
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (!(lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
    for (double c : weights) {
        if (!(c > 0.0)) throw ConfigError("preference weights must be positive");
    }
}

}  // namespace prefopt
