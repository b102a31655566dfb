#include "prefopt/scaling.hpp"

#include "prefopt/qp_solver.hpp"

#include <cmath>
#include <limits>

namespace prefopt {

namespace {

// LP over x with box rows folded into G: min c'x s.t. A x <= b, x <= u, x >= l.
QPSolution box_lp(const Vector& c, const BoxBounds& bounds, const LinearConstraints& lin) {
    const Eigen::Index n = c.size();
    const Eigen::Index q = lin.A.rows();
    QuadraticProgram lp;
    lp.H = Matrix::Zero(n, n);
    lp.f = c;
    lp.G.resize(q + n, n);
    lp.h.resize(q + n);
    lp.G.topRows(q) = lin.A;
    lp.h.head(q) = lin.b;
    lp.G.bottomRows(n) = Matrix::Identity(n, n);
    lp.h.tail(n) = bounds.upper;
    lp.E.resize(0, n);
    lp.d.resize(0);
    lp.lower = bounds.lower;
    return solve_qp(lp);
}

}  // namespace

BoundingBox compute_bounding_box(const BoxBounds& bounds, const ConstraintSet& constraints) {
    bounds.validate();
    constraints.validate(bounds.dim());
    BoundingBox box;
    box.lower = bounds.lower;
    box.upper = bounds.upper;
    const Eigen::Index n = bounds.lower.size();
    if (!constraints.linear || constraints.linear->rows() == 0) {
        for (Eigen::Index i = 0; i < n; ++i) {
            Vector lo = bounds.lower, hi = bounds.lower;
            hi[i] = bounds.upper[i];
            box.lower_witness.push_back(lo);
            box.upper_witness.push_back(hi);
        }
        return box;
    }
    const auto& lin = *constraints.linear;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (double sign : {1.0, -1.0}) {
            Vector c = Vector::Zero(n);
            c[i] = sign;
            const QPSolution sol = box_lp(c, bounds, lin);
            if (sol.status == QPStatus::Infeasible) {
                throw InfeasibleError("feasible region is empty");
            }
            if (!sol.optimal()) throw SolverError("bounding-box LP did not converge");
            Vector x = sol.x.cwiseMax(bounds.lower).cwiseMin(bounds.upper);
            const double width = bounds.upper[i] - bounds.lower[i];
            // Snap values within solver accuracy onto the original bounds.
            const double snap = 1e-8 * (1.0 + width);
            if (sign > 0) {
                box.lower[i] = x[i] - bounds.lower[i] < snap ? bounds.lower[i] : x[i];
                box.lower_witness.push_back(x);
            } else {
                box.upper[i] = bounds.upper[i] - x[i] < snap ? bounds.upper[i] : x[i];
                box.upper_witness.push_back(x);
            }
        }
        if (box.upper[i] < box.lower[i]) box.upper[i] = box.lower[i];
    }
    return box;
}

ScalingMap::ScalingMap(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size() || lower_.size() == 0) throw DimensionError("bounds dimension mismatch");
    BoxBounds{lower_, upper_}.validate();
    center_ = 0.5 * (upper_ + lower_);
    half_width_ = 0.5 * (upper_ - lower_);
    for (Eigen::Index j = 0; j < lower_.size(); ++j) {
        if (half_width_[j] > 0.0) active_.push_back(static_cast<std::size_t>(j));
    }
    if (active_.empty()) throw InfeasibleError("every coordinate is fixed; nothing to optimize");
}

ScalingMap ScalingMap::from_problem(const BoxBounds& bounds, const ConstraintSet& constraints) {
    const BoundingBox box = compute_bounding_box(bounds, constraints);
    ScalingMap sm(box.lower, box.upper);
    if (constraints.linear && constraints.linear->rows() > 0) {
        sm.unit_linear = rescale_polyhedron(*constraints.linear, sm);
    }
    return sm;
}

Vector ScalingMap::to_unit(const Vector& x) const {
    if (x.size() != lower_.size()) throw DimensionError("to_unit: dimension mismatch");
    Vector xbar(static_cast<Eigen::Index>(active_.size()));
    for (std::size_t k = 0; k < active_.size(); ++k) {
        const auto j = static_cast<Eigen::Index>(active_[k]);
        xbar[static_cast<Eigen::Index>(k)] = (x[j] - center_[j]) / half_width_[j];
    }
    return xbar;
}

Vector ScalingMap::from_unit(const Vector& xbar) const {
    if (static_cast<std::size_t>(xbar.size()) != active_.size()) throw DimensionError("from_unit: dimension mismatch");
    Vector x = center_;
    for (std::size_t k = 0; k < active_.size(); ++k) {
        const auto j = static_cast<Eigen::Index>(active_[k]);
        x[j] = half_width_[j] * xbar[static_cast<Eigen::Index>(k)] + center_[j];
    }
    return x;
}

LinearConstraints rescale_polyhedron(const LinearConstraints& lin, const ScalingMap& sm) {
    if (static_cast<std::size_t>(lin.A.cols()) != sm.full_dim()) throw DimensionError("constraint matrix width");
    LinearConstraints out;
    out.A.resize(lin.A.rows(), static_cast<Eigen::Index>(sm.unit_dim()));
    for (std::size_t k = 0; k < sm.unit_dim(); ++k) {
        const auto j = static_cast<Eigen::Index>(sm.active()[k]);
        out.A.col(static_cast<Eigen::Index>(k)) = lin.A.col(j) * sm.half_width()[j];
    }
    out.b = lin.b - lin.A * sm.center();
    return out;
}

}  // namespace prefopt
