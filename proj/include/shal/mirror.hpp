#pragma once

#include "shal/feasible_set.hpp"
#include "shal/vector_ops.hpp"

namespace shal {

/// Phi_v(w) = ||w - v||_p^2 / (2(p-1)), the distance-generating function of
/// the descent engine.
struct Regularizer {
    Vector reference;  // v
    PNormParams params;

    double value(const Vector& w) const;
    Vector grad(const Vector& w) const;
    Vector grad_inverse(const Vector& theta) const;
};

double bregman(const Regularizer& reg, const Vector& w, const Vector& wprime);

/// argmin_{w in K} D_reg(w, z). Solved through the Fenchel dual: one dual
/// vector per atomic constraint, accelerated proximal gradient with adaptive
/// restart; the smooth dual term is the conjugate q-norm square, whose
/// curvature is bounded by (p-1)(q-1) = 1 per atom, so a fixed step works.
/// `dual_warm` (optional) carries dual variables across consecutive calls.
Vector bregman_project(const Regularizer& reg, const FeasibleSet& K, const Vector& z,
                       double tol = 1e-10, int max_iter = 50000,
                       std::vector<Vector>* dual_warm = nullptr);

struct OmdState {
    Vector iterate;
    double step;  // alpha, constant within one refine call
    const FeasibleSet* set;
    Regularizer reg;
    int t = 0;
    std::vector<Vector> dual;  // projection warm start, one block per atom
};

/// One mirror-descent update: dual step through the gradient maps, then
/// Bregman projection back onto the feasible set.
OmdState omd_step(const OmdState& state, const Vector& g);

/// normalize(mean of normalized iterates).
Vector online_to_batch(const std::vector<Vector>& iterates);

/// Same conversion from a running sum of already-normalized iterates.
Vector online_to_batch_sum(const Vector& sum_of_units);

}  // namespace shal
