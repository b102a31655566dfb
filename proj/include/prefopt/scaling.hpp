#pragma once

#include "prefopt/core_types.hpp"

#include <optional>
#include <vector>

namespace prefopt {

/// Tightened bounds plus, per coordinate, the feasible points attaining them.
struct BoundingBox {
    Vector lower;
    Vector upper;
    std::vector<Vector> lower_witness;
    std::vector<Vector> upper_witness;
};

/// Per-coordinate min/max of x_i over the box intersected with the linear constraints
/// (2n LPs). Nonlinear constraints are ignored here. Throws InfeasibleError.
BoundingBox compute_bounding_box(const BoxBounds& bounds, const ConstraintSet& constraints);

/// Affine map between the tightened box and [-1, 1]^m, where m counts the non-degenerate
/// coordinates. Degenerate coordinates (zero width) are frozen at their value.
class ScalingMap {
public:
    ScalingMap() = default;
    ScalingMap(Vector lower, Vector upper);

    static ScalingMap from_problem(const BoxBounds& bounds, const ConstraintSet& constraints);

    const Vector& lower() const { return lower_; }
    const Vector& upper() const { return upper_; }
    const Vector& center() const { return center_; }
    const Vector& half_width() const { return half_width_; }
    std::size_t full_dim() const { return static_cast<std::size_t>(lower_.size()); }
    std::size_t unit_dim() const { return active_.size(); }
    const std::vector<std::size_t>& active() const { return active_; }

    Vector to_unit(const Vector& x) const;
    Vector from_unit(const Vector& xbar) const;

    /// Linear constraints rewritten for the unit variables (set by from_problem).
    std::optional<LinearConstraints> unit_linear;

private:
    Vector lower_, upper_, center_, half_width_;
    std::vector<std::size_t> active_;
};

/// A from_unit(xbar) <= b  <=>  Abar xbar <= bbar.
LinearConstraints rescale_polyhedron(const LinearConstraints& lin, const ScalingMap& sm);

}  // namespace prefopt
