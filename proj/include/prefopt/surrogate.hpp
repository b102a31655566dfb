#pragma once

#include "prefopt/core_types.hpp"
#include "prefopt/qp_solver.hpp"

#include <optional>
#include <vector>

namespace prefopt {

/// phi(epsilon * d) for the given family. d is a squared Euclidean distance.
double kernel_value(KernelFamily kernel, double epsilon, double d);

/// Psi_ij = phi(epsilon * ||x_i - x_j||^2) over a sample set.
struct KernelMatrix {
    SampleSet samples;
    Matrix psi;
    KernelFamily kernel = KernelFamily::InverseQuadratic;
    double epsilon = 1.0;

    std::size_t size() const { return samples.size(); }
};

KernelMatrix build_kernel_matrix(const SampleSet& samples, double epsilon, KernelFamily kernel);

/// Grows the matrix by one row/column; only the new kernel values are evaluated.
KernelMatrix append_sample(const KernelMatrix& km, const Vector& x_new);

/// Kernel values phi(epsilon * d(x, x_k)) for every stored sample.
Vector kernel_row(const SampleSet& samples, double epsilon, KernelFamily kernel, const Vector& x);

class RBFSurrogate {
public:
    RBFSurrogate() = default;
    RBFSurrogate(SampleSet samples, Vector beta, double epsilon, KernelFamily kernel);

    const SampleSet& samples() const { return samples_; }
    const Vector& beta() const { return beta_; }
    double epsilon() const { return epsilon_; }
    KernelFamily kernel() const { return kernel_; }
    std::size_t dim() const { return samples_.dim(); }

    double operator()(const Vector& x) const { return evaluate(x); }
    double evaluate(const Vector& x) const;
    /// One point per column.
    Vector evaluate_batch(const Matrix& points) const;
    /// f_hat at each stored sample, i.e. Psi * beta.
    Vector values_at_samples() const;

    // Fit diagnostics.
    Vector slacks;
    double objective = 0.0;
    QPStatus status = QPStatus::Optimal;

private:
    SampleSet samples_;
    Vector beta_;
    double epsilon_ = 1.0;
    KernelFamily kernel_ = KernelFamily::InverseQuadratic;
};

/// Solves the preference-constrained fit
///   min sum_h c_h e_h + lambda/2 |beta|^2
///   s.t. per-preference separation constraints with tolerance sigma, e_h >= 0,
/// optionally with f_hat(x_anchor) = 0.
RBFSurrogate fit_surrogate(const KernelMatrix& km, const std::vector<PreferenceRecord>& prefs, const FitConfig& cfg,
                           std::optional<std::size_t> anchor_best = std::nullopt, const QPOptions& qp_options = {});

RBFSurrogate fit_surrogate(const SampleSet& samples, const std::vector<PreferenceRecord>& prefs, const FitConfig& cfg,
                           double epsilon, KernelFamily kernel, std::optional<std::size_t> anchor_best = std::nullopt);

inline constexpr double kMinSurrogateRange = 1e-8;

/// max_i f_hat(x_i) - min_i f_hat(x_i), floored at kMinSurrogateRange.
double surrogate_range(const RBFSurrogate& s);

/// Induced preference with tie band sigma: -1 if f_a < f_b - sigma, +1 if f_a > f_b + sigma, else 0.
Preference predict_preference(double f_a, double f_b, double sigma);

}  // namespace prefopt
