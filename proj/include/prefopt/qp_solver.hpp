#pragma once

#include "prefopt/core_types.hpp"

#include <string>

namespace prefopt {

/// min 1/2 x'Hx + f'x  s.t.  Gx <= h,  Ex = d,  x >= lower (entries may be -inf).
struct QuadraticProgram {
    Matrix H;
    Vector f;
    Matrix G;
    Vector h;
    Matrix E;
    Vector d;
    Vector lower;  ///< empty, or one entry per variable

    std::size_t num_vars() const { return static_cast<std::size_t>(f.size()); }
    void validate() const;
};

enum class QPStatus { Optimal, MaxIter, Infeasible };

std::string to_string(QPStatus s);

struct QPSolution {
    Vector x;
    double objective = 0.0;
    QPStatus status = QPStatus::MaxIter;
    double kkt_residual = 0.0;
    int iterations = 0;
    /// Multipliers of Gx <= h followed by those of the lower bounds (finite ones only).
    Vector ineq_multipliers;
    Vector eq_multipliers;

    bool optimal() const { return status == QPStatus::Optimal; }
};

struct QPOptions {
    double tol = 1e-8;
    int max_iter = 10000;
};

/// Dense primal-dual interior point method (Mehrotra predictor-corrector).
///
/// Handles H = 0 (linear programs) through the same path. kkt_residual is the
/// largest of the scaled stationarity, primal feasibility and complementarity
/// residuals; status Optimal means it is below tol.
QPSolution solve_qp(const QuadraticProgram& qp, const QPOptions& options = {});

inline QPSolution solve_qp(const QuadraticProgram& qp, double tol) {
    QPOptions o;
    o.tol = tol;
    return solve_qp(qp, o);
}

}  // namespace prefopt
