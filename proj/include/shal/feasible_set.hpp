#pragma once

#include <variant>
#include <vector>

#include "shal/vector_ops.hpp"

namespace shal {

struct L2Ball {
    Vector center;  // empty means origin
    double radius;
};

/// l1 ball centered at the origin.
struct L1Ball {
    double radius;
};

/// {w : <normal, w> >= offset}, normal is unit length.
struct Halfspace {
    Vector normal;
    double offset;
};

using AtomicConstraint = std::variant<L2Ball, L1Ball, Halfspace>;

bool atom_satisfied(const AtomicConstraint& c, const Vector& w, double tol);

/// Euclidean projection onto one atom (ball scaling, sort-based simplex
/// projection for l1, halfspace reflection).
Vector atom_project(const AtomicConstraint& c, const Vector& z);

/// Projection onto the l1 ball of the given radius, sort-based, O(d log d).
Vector project_l1_ball(const Vector& z, double radius);

/// Intersection of 1-3 atomic constraints. Construction requires a witness
/// point inside the intersection so infeasible sets are rejected up front.
class FeasibleSet {
public:
    FeasibleSet(std::vector<AtomicConstraint> constraints, const Vector& witness,
                double witness_tol = 1e-9);

    /// Single ball, or ball pair {||w - center|| <= r} n {||w|| <= 1} with
    /// the witness derived from the center.
    static FeasibleSet unit_l2_ball(std::size_t dim);
    static FeasibleSet refine_set(const Vector& center, double radius);

    bool contains(const Vector& w, double tol) const;

    /// Dykstra's alternating projections over the atoms. Stops when the
    /// change between successive sweeps drops below tol.
    Vector project_euclidean(const Vector& z, double tol = 1e-10,
                             int max_iter = 10000) const;

    const std::vector<AtomicConstraint>& constraints() const { return constraints_; }
    const Vector& witness() const { return witness_; }

private:
    std::vector<AtomicConstraint> constraints_;
    Vector witness_;
};

}  // namespace shal
