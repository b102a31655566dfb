#include "prefopt/qp_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace prefopt {

namespace {

constexpr double kRegularization = 1e-10;
constexpr double kStepFraction = 0.99;

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Largest alpha in (0,1] keeping v + alpha*dv >= 0.
double max_step(const Vector& v, const Vector& dv) {
    double alpha = 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
    }
    return alpha;
}

struct Residuals {
    Vector dual, primal, eq;
    double mu = 0.0;
    double kkt = 0.0;
};

}  // namespace

std::string to_string(QPStatus s) {
    switch (s) {
        case QPStatus::Optimal: return "optimal";
        case QPStatus::MaxIter: return "max_iter";
        case QPStatus::Infeasible: return "infeasible";
    }
    return "unknown";
}

void QuadraticProgram::validate() const {
    const Eigen::Index m = f.size();
    if (H.rows() != m || H.cols() != m) throw DimensionError("QP: H must be m x m");
    if (G.rows() != h.size() || (h.size() > 0 && G.cols() != m)) throw DimensionError("QP: G/h mismatch");
    if (E.rows() != d.size() || (d.size() > 0 && E.cols() != m)) throw DimensionError("QP: E/d mismatch");
    if (lower.size() != 0 && lower.size() != m) throw DimensionError("QP: lower bound length mismatch");
    if (!(H - H.transpose()).isZero(1e-9 * (1.0 + H.cwiseAbs().maxCoeff()))) {
        throw InvalidValueError("QP: H must be symmetric");
    }
}

QPSolution solve_qp(const QuadraticProgram& qp, const QPOptions& options) {
    qp.validate();
    const Eigen::Index m = qp.f.size();

    // Fold finite lower bounds into the inequality block as -x_i <= -lower_i.
    std::vector<Eigen::Index> bounded;
    for (Eigen::Index i = 0; i < qp.lower.size(); ++i) {
        if (std::isfinite(qp.lower[i])) bounded.push_back(i);
    }
    const Eigen::Index p0 = qp.h.size();
    const Eigen::Index p = p0 + static_cast<Eigen::Index>(bounded.size());
    const Eigen::Index r = qp.d.size();
    Matrix G = Matrix::Zero(p, m);
    Vector h(p);
    if (p0 > 0) {
        G.topRows(p0) = qp.G;
        h.head(p0) = qp.h;
    }
    for (std::size_t k = 0; k < bounded.size(); ++k) {
        G(p0 + static_cast<Eigen::Index>(k), bounded[k]) = -1.0;
        h[p0 + static_cast<Eigen::Index>(k)] = -qp.lower[bounded[k]];
    }
    const Matrix& H = qp.H;
    const Matrix& E = qp.E;
    const Vector& f = qp.f;
    const Vector& d = qp.d;

    const double f_scale = 1.0 + inf_norm(f);
    const double h_scale = 1.0 + inf_norm(h);
    const double d_scale = 1.0 + inf_norm(d);

    Vector x = Vector::Zero(m);
    Vector y = Vector::Zero(r);
    Vector s = (h - G * x).cwiseMax(1.0);
    Vector z = Vector::Ones(p);

    auto objective_of = [&](const Vector& v) { return 0.5 * v.dot(H * v) + f.dot(v); };

    auto residuals = [&]() {
        Residuals res;
        res.dual = H * x + f;
        if (p > 0) res.dual += G.transpose() * z;
        if (r > 0) res.dual += E.transpose() * y;
        res.primal = p > 0 ? Vector(G * x + s - h) : Vector();
        res.eq = r > 0 ? Vector(E * x - d) : Vector();
        res.mu = p > 0 ? s.dot(z) / static_cast<double>(p) : 0.0;
        double obj_scale = 1.0 + std::abs(objective_of(x));
        res.kkt = std::max({inf_norm(res.dual) / f_scale, inf_norm(res.primal) / h_scale,
                            inf_norm(res.eq) / d_scale, res.mu / obj_scale});
        return res;
    };

    QPSolution best;
    best.kkt_residual = std::numeric_limits<double>::infinity();
    auto record = [&](const Residuals& res, int iter, QPStatus status) {
        if (res.kkt <= best.kkt_residual || status != QPStatus::MaxIter) {
            best.x = x;
            best.objective = objective_of(x);
            best.kkt_residual = res.kkt;
            best.iterations = iter;
            best.status = status;
            best.ineq_multipliers = z;
            best.eq_multipliers = y;
        }
    };

    Matrix K(m + r, m + r);
    for (int iter = 0; iter <= options.max_iter; ++iter) {
        Residuals res = residuals();
        if (!x.allFinite() || !s.allFinite() || !z.allFinite()) break;
        if (res.kkt <= options.tol) {
            record(res, iter, QPStatus::Optimal);
            return best;
        }
        record(res, iter, QPStatus::MaxIter);
        if (iter == options.max_iter) break;

        // Farkas certificate: z >= 0, G'z + E'y ~ 0, h'z + d'y < 0.
        const double z_norm = inf_norm(z) + inf_norm(y);
        if (z_norm > 1e6) {
            Vector ray = Vector::Zero(m);
            if (p > 0) ray += G.transpose() * z;
            if (r > 0) ray += E.transpose() * y;
            const double gap = (h.dot(z) + d.dot(y)) / z_norm;
            if (inf_norm(ray) / z_norm < 1e-7 && gap < -1e-7) {
                best.x = x;
                best.objective = objective_of(x);
                best.kkt_residual = res.kkt;
                best.iterations = iter;
                best.status = QPStatus::Infeasible;
                best.ineq_multipliers = z;
                best.eq_multipliers = y;
                return best;
            }
        }

        const Vector w = z.cwiseQuotient(s);
        K.setZero();
        K.topLeftCorner(m, m) = H;
        if (p > 0) K.topLeftCorner(m, m) += G.transpose() * w.asDiagonal() * G;
        K.topLeftCorner(m, m).diagonal().array() += kRegularization;
        if (r > 0) {
            K.topRightCorner(m, r) = E.transpose();
            K.bottomLeftCorner(r, m) = E;
            K.bottomRightCorner(r, r).diagonal().setConstant(-kRegularization);
        }
        Eigen::PartialPivLU<Matrix> lu(K);

        // Solves the reduced Newton system for complementarity target rc.
        auto newton = [&](const Vector& rc, Vector& dx, Vector& ds, Vector& dz, Vector& dy) {
            Vector rhs(m + r);
            Vector top = -res.dual;
            if (p > 0) top -= G.transpose() * ((-rc + z.cwiseProduct(res.primal)).cwiseQuotient(s));
            rhs.head(m) = top;
            if (r > 0) rhs.tail(r) = -res.eq;
            Vector sol = lu.solve(rhs);
            // One refinement pass against the unregularized system.
            Vector exact = K * sol;
            exact.head(m) -= kRegularization * sol.head(m);
            if (r > 0) exact.tail(r) += kRegularization * sol.tail(r);
            sol += lu.solve(rhs - exact);
            dx = sol.head(m);
            dy = r > 0 ? Vector(sol.tail(r)) : Vector();
            if (p > 0) {
                ds = -res.primal - G * dx;
                dz = (-rc - z.cwiseProduct(ds)).cwiseQuotient(s);
            }
        };

        Vector dx, ds, dz, dy;
        if (p == 0) {
            newton(Vector(), dx, ds, dz, dy);
            x += dx;
            if (r > 0) y += dy;
            continue;
        }

        // Predictor.
        Vector rc = s.cwiseProduct(z);
        newton(rc, dx, ds, dz, dy);
        const double alpha_aff = std::min(max_step(s, ds), max_step(z, dz));
        const double mu_aff =
            (s + alpha_aff * ds).dot(z + alpha_aff * dz) / static_cast<double>(p);
        const double centering = std::pow(std::max(mu_aff, 0.0) / std::max(res.mu, 1e-300), 3.0);

        // Corrector.
        rc = s.cwiseProduct(z) + ds.cwiseProduct(dz);
        rc.array() -= centering * res.mu;
        newton(rc, dx, ds, dz, dy);
        const double alpha = std::min(1.0, kStepFraction * std::min(max_step(s, ds), max_step(z, dz)));

        x += alpha * dx;
        s += alpha * ds;
        z += alpha * dz;
        if (r > 0) y += alpha * dy;
        s = s.cwiseMax(1e-300);
        z = z.cwiseMax(1e-300);
    }
    return best;
}

}  // namespace prefopt
