#include "prefopt/surrogate.hpp"

#include <cmath>

namespace prefopt {

double kernel_value(KernelFamily kernel, double epsilon, double d) {
    const double r = epsilon * d;
    switch (kernel) {
        case KernelFamily::InverseQuadratic: return 1.0 / (1.0 + r * r);
        case KernelFamily::Gaussian: return std::exp(-r * r);
        case KernelFamily::ThinPlateSpline: return r > 0.0 ? r * r * std::log(r) : 0.0;
        case KernelFamily::Multiquadric: return std::sqrt(1.0 + r * r);
        case KernelFamily::Linear: return r;
    }
    throw ConfigError("unknown kernel family");
}

Vector kernel_row(const SampleSet& samples, double epsilon, KernelFamily kernel, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != samples.dim()) throw DimensionError("point dimension mismatch");
    Vector row(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        row[static_cast<Eigen::Index>(k)] = kernel_value(kernel, epsilon, squared_distance(x, samples[k]));
    }
    return row;
}

KernelMatrix build_kernel_matrix(const SampleSet& samples, double epsilon, KernelFamily kernel) {
    if (samples.empty()) throw InvalidValueError("kernel matrix needs at least one sample");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    KernelMatrix km;
    km.kernel = kernel;
    km.epsilon = epsilon;
    km.samples = SampleSet(samples.dim());
    km.psi = Matrix(0, 0);
    for (const auto& x : samples) km = append_sample(km, x);
    return km;
}

KernelMatrix append_sample(const KernelMatrix& km, const Vector& x_new) {
    KernelMatrix out = km;
    out.samples.push_back(x_new);  // duplicate and dimension checks
    const Eigen::Index n = static_cast<Eigen::Index>(km.size());
    out.psi.conservativeResize(n + 1, n + 1);
    for (Eigen::Index k = 0; k <= n; ++k) {
        const double v =
            kernel_value(km.kernel, km.epsilon, squared_distance(x_new, out.samples[static_cast<std::size_t>(k)]));
        out.psi(n, k) = v;
        out.psi(k, n) = v;
    }
    return out;
}

RBFSurrogate::RBFSurrogate(SampleSet samples, Vector beta, double epsilon, KernelFamily kernel)
    : samples_(std::move(samples)), beta_(std::move(beta)), epsilon_(epsilon), kernel_(kernel) {
    if (static_cast<std::size_t>(beta_.size()) != samples_.size()) {
        throw DimensionError("coefficient vector length must equal sample count");
    }
}

double RBFSurrogate::evaluate(const Vector& x) const {
    return kernel_row(samples_, epsilon_, kernel_, x).dot(beta_);
}

Vector RBFSurrogate::evaluate_batch(const Matrix& points) const {
    Vector out(points.cols());
    for (Eigen::Index c = 0; c < points.cols(); ++c) out[c] = evaluate(points.col(c));
    return out;
}

Vector RBFSurrogate::values_at_samples() const {
    Vector y(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i) y[static_cast<Eigen::Index>(i)] = evaluate(samples_[i]);
    return y;
}

RBFSurrogate fit_surrogate(const KernelMatrix& km, const std::vector<PreferenceRecord>& prefs, const FitConfig& cfg,
                           std::optional<std::size_t> anchor_best, const QPOptions& qp_options) {
    cfg.validate();
    const std::size_t n_samples = km.size();
    if (n_samples < 2) throw InvalidValueError("surrogate fit needs at least two samples");
    if (prefs.empty()) throw InvalidValueError("surrogate fit needs at least one preference");
    validate_preferences(prefs, n_samples);
    if (!cfg.weights.empty() && cfg.weights.size() != prefs.size()) {
        throw ConfigError("preference weight count must match preference count");
    }
    if (anchor_best && *anchor_best >= n_samples) throw InvalidValueError("anchor index out of range");

    const Eigen::Index N = static_cast<Eigen::Index>(n_samples);
    const Eigen::Index M = static_cast<Eigen::Index>(prefs.size());
    Eigen::Index rows = 0;
    for (const auto& p : prefs) rows += (p.outcome == Preference::Tie) ? 2 : 1;

    QuadraticProgram qp;
    qp.H = Matrix::Zero(N + M, N + M);
    qp.H.topLeftCorner(N, N).diagonal().setConstant(cfg.lambda);
    qp.f = Vector::Zero(N + M);
    for (Eigen::Index h = 0; h < M; ++h) qp.f[N + h] = cfg.weight(static_cast<std::size_t>(h));
    qp.G = Matrix::Zero(rows, N + M);
    qp.h = Vector::Zero(rows);
    qp.lower = Vector::Constant(N + M, -INFINITY);
    qp.lower.tail(M).setZero();

    Eigen::Index row = 0;
    for (Eigen::Index h = 0; h < M; ++h) {
        const auto& p = prefs[static_cast<std::size_t>(h)];
        // phi_h' beta = f_hat(x_i) - f_hat(x_j)
        const Vector phi = km.psi.row(static_cast<Eigen::Index>(p.left)) - km.psi.row(static_cast<Eigen::Index>(p.right));
        auto add_row = [&](double sign, double rhs) {
            qp.G.row(row).head(N) = sign * phi.transpose();
            qp.G(row, N + h) = -1.0;
            qp.h[row] = rhs;
            ++row;
        };
        switch (p.outcome) {
            case Preference::FirstBetter: add_row(1.0, -cfg.sigma); break;
            case Preference::SecondBetter: add_row(-1.0, -cfg.sigma); break;
            case Preference::Tie:
                add_row(1.0, cfg.sigma);
                add_row(-1.0, cfg.sigma);
                break;
        }
    }
    if (anchor_best) {
        qp.E = Matrix::Zero(1, N + M);
        qp.E.row(0).head(N) = km.psi.row(static_cast<Eigen::Index>(*anchor_best));
        qp.d = Vector::Zero(1);
    } else {
        qp.E = Matrix::Zero(0, N + M);
        qp.d = Vector::Zero(0);
    }

    QPSolution sol = solve_qp(qp, qp_options);
    if (sol.status == QPStatus::Infeasible) throw SolverError("surrogate fit reported infeasible");
    if (!sol.x.allFinite()) {
        throw SolverError("surrogate fit diverged (status " + to_string(sol.status) +
                          ", kkt residual " + std::to_string(sol.kkt_residual) + ")");
    }

    RBFSurrogate s(km.samples, sol.x.head(N), km.epsilon, km.kernel);
    s.slacks = sol.x.tail(M).cwiseMax(0.0);
    s.objective = sol.objective;
    s.status = sol.status;
    return s;
}

RBFSurrogate fit_surrogate(const SampleSet& samples, const std::vector<PreferenceRecord>& prefs, const FitConfig& cfg,
                           double epsilon, KernelFamily kernel, std::optional<std::size_t> anchor_best) {
    return fit_surrogate(build_kernel_matrix(samples, epsilon, kernel), prefs, cfg, anchor_best);
}

double surrogate_range(const RBFSurrogate& s) {
    const Vector y = s.values_at_samples();
    if (y.size() == 0) return kMinSurrogateRange;
    return std::max(y.maxCoeff() - y.minCoeff(), kMinSurrogateRange);
}

Preference predict_preference(double f_a, double f_b, double sigma) {
    if (f_a < f_b - sigma) return Preference::FirstBetter;
    if (f_a > f_b + sigma) return Preference::SecondBetter;
    return Preference::Tie;
}

}  // namespace prefopt
