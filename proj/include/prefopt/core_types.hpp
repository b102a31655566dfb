#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prefopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Decision vectors are plain Eigen column vectors; dimension is fixed per problem.
using DecisionVector = Vector;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidValueError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class DuplicateSampleError : public Error {
public:
    using Error::Error;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

/// Squared-distance threshold under which two scaled samples are considered identical.
inline constexpr double kDuplicateGuard = 1e-12;

double squared_distance(const Vector& a, const Vector& b);

// ---------------------------------------------------------------------------
// Samples
// ---------------------------------------------------------------------------

/// Ordered, duplicate-free collection of equally sized decision vectors.
class SampleSet {
public:
    SampleSet() = default;
    explicit SampleSet(std::size_t dim) : dim_(dim) {}
    SampleSet(std::size_t dim, const std::vector<Vector>& samples);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }

    const Vector& operator[](std::size_t i) const { return samples_[i]; }
    const std::vector<Vector>& samples() const { return samples_; }
    auto begin() const { return samples_.begin(); }
    auto end() const { return samples_.end(); }

    /// Index of a stored sample within the duplicate guard of x, if any.
    std::optional<std::size_t> find_close(const Vector& x, double guard = kDuplicateGuard) const;

    /// Appends x; throws DuplicateSampleError or DimensionError.
    void push_back(const Vector& x);

private:
    std::size_t dim_ = 0;
    std::vector<Vector> samples_;
};

// ---------------------------------------------------------------------------
// Preferences
// ---------------------------------------------------------------------------

/// -1: first argument better, 0: equivalent, 1: second argument better.
enum class Preference : int { FirstBetter = -1, Tie = 0, SecondBetter = 1 };

Preference preference_from_int(int value);
inline int to_int(Preference p) { return static_cast<int>(p); }
inline Preference negate(Preference p) { return static_cast<Preference>(-to_int(p)); }

/// Synthetic oracle rule: compares two latent values.
Preference preference_from_values(double f1, double f2);

struct PreferenceRecord {
    std::size_t left = 0;   ///< i(h)
    std::size_t right = 0;  ///< j(h)
    Preference outcome = Preference::Tie;

    friend bool operator==(const PreferenceRecord&, const PreferenceRecord&) = default;
};

void validate_preferences(const std::vector<PreferenceRecord>& prefs, std::size_t n_samples);

struct ViolatedTriple {
    std::size_t a = 0, b = 0, c = 0;
    friend bool operator==(const ViolatedTriple&, const ViolatedTriple&) = default;
};

struct ConsistencyReport {
    bool consistent = true;
    std::vector<ViolatedTriple> violations;
};

/// Flags chains a<b, b<c (strict) whose implied a<c contradicts a recorded outcome
/// for the pair (a,c). Diagnostic only.
ConsistencyReport check_transitive_consistency(const std::vector<PreferenceRecord>& prefs);

// ---------------------------------------------------------------------------
// Problem description
// ---------------------------------------------------------------------------

struct BoxBounds {
    Vector lower;
    Vector upper;

    std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
    void validate() const;
    bool contains(const Vector& x, double tol = 0.0) const;
};

struct LinearConstraints {
    Matrix A;  ///< q x n
    Vector b;  ///< q

    std::size_t rows() const { return static_cast<std::size_t>(b.size()); }
    bool satisfied(const Vector& x, double tol = 1e-9) const;
};

/// Black-box constraint g(x) <= 0 componentwise.
using NonlinearConstraint = std::function<Vector(const Vector&)>;

struct ConstraintSet {
    std::optional<LinearConstraints> linear;
    NonlinearConstraint nonlinear;

    bool empty() const { return !linear && !nonlinear; }
    void validate(std::size_t n) const;
    bool satisfied(const Vector& x, double tol = 1e-9) const;
};

// ---------------------------------------------------------------------------
// Kernels and fit configuration
// ---------------------------------------------------------------------------

enum class KernelFamily { InverseQuadratic, Gaussian, ThinPlateSpline, Multiquadric, Linear };

std::string to_string(KernelFamily k);
KernelFamily kernel_from_string(const std::string& tag);

struct FitConfig {
    double sigma = 1.0;
    double lambda = 1e-6;
    /// Per-preference weights; empty means all ones.
    std::vector<double> weights;

    void validate() const;
    double weight(std::size_t h) const { return weights.empty() ? 1.0 : weights.at(h); }
};

}  // namespace prefopt
