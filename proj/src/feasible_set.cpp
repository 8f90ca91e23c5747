#include "shal/feasible_set.hpp"

#include <algorithm>
#include <cmath>

namespace shal {

namespace {

double l2_dist_to_center(const Vector& w, const Vector& center) {
    if (center.empty()) return norm2(w);
    return norm2(sub(w, center));
}

}  // namespace

bool atom_satisfied(const AtomicConstraint& c, const Vector& w, double tol) {
    return std::visit(
        [&](const auto& atom) -> bool {
            using T = std::decay_t<decltype(atom)>;
            if constexpr (std::is_same_v<T, L2Ball>) {
                return l2_dist_to_center(w, atom.center) <= atom.radius + tol;
            } else if constexpr (std::is_same_v<T, L1Ball>) {
                return norm1(w) <= atom.radius + tol;
            } else {
                return dot(atom.normal, w) >= atom.offset - tol;
            }
        },
        c);
}

Vector project_l1_ball(const Vector& z, double radius) {
    if (norm1(z) <= radius) return z;
    // soft-threshold at the level found by the sorted simplex projection
    std::vector<double> a(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) a[i] = std::abs(z[i]);
    std::sort(a.begin(), a.end(), std::greater<double>());
    double cumsum = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        cumsum += a[k];
        const double t = (cumsum - radius) / static_cast<double>(k + 1);
        if (t >= (k + 1 < a.size() ? a[k + 1] : 0.0)) {
            theta = t;
            break;
        }
    }
    Vector out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double m = std::abs(z[i]) - theta;
        out[i] = m > 0.0 ? (z[i] > 0 ? m : -m) : 0.0;
    }
    return out;
}

Vector atom_project(const AtomicConstraint& c, const Vector& z) {
    return std::visit(
        [&](const auto& atom) -> Vector {
            using T = std::decay_t<decltype(atom)>;
            if constexpr (std::is_same_v<T, L2Ball>) {
                const double dist = l2_dist_to_center(z, atom.center);
                if (dist <= atom.radius) return z;
                const double f = atom.radius / dist;
                if (atom.center.empty()) return scale(z, f);
                Vector out(atom.center);
                axpy(f, sub(z, atom.center), out);
                return out;
            } else if constexpr (std::is_same_v<T, L1Ball>) {
                return project_l1_ball(z, atom.radius);
            } else {
                const double slack = dot(atom.normal, z) - atom.offset;
                if (slack >= 0.0) return z;
                Vector out(z);
                axpy(-slack, atom.normal, out);
                return out;
            }
        },
        c);
}

FeasibleSet::FeasibleSet(std::vector<AtomicConstraint> constraints, const Vector& witness,
                         double witness_tol)
    : constraints_(std::move(constraints)), witness_(witness) {
    if (constraints_.empty()) throw ConfigError("FeasibleSet: no constraints");
    for (const auto& c : constraints_) {
        if (!atom_satisfied(c, witness_, witness_tol)) {
            throw ConfigError("FeasibleSet: witness violates a constraint");
        }
    }
}

FeasibleSet FeasibleSet::unit_l2_ball(std::size_t dim) {
    return FeasibleSet({L2Ball{{}, 1.0}}, Vector(dim, 0.0));
}

FeasibleSet FeasibleSet::refine_set(const Vector& center, double radius) {
    Vector witness(center);
    if (norm2(witness) > 1.0) witness = normalize(witness);
    return FeasibleSet({L2Ball{center, radius}, L2Ball{{}, 1.0}}, witness);
}

bool FeasibleSet::contains(const Vector& w, double tol) const {
    for (const auto& c : constraints_) {
        if (!atom_satisfied(c, w, tol)) return false;
    }
    return true;
}

namespace {

Vector dykstra(const std::vector<AtomicConstraint>& atoms, const Vector& z, double tol,
               int max_iter);

// Exact projection onto (L2 ball) .. (one other atom) via the scalar dual of
// the ball constraint: w(lambda) = P_other((z + lambda*c) / (1 + lambda)) is
// the Lagrangian minimizer, and concavity of the dual makes the ball slack
// monotone in lambda, so bisection to the active boundary is exact. Dykstra's
// alternating scheme can need ~1e5 sweeps when the two sets meet at a shallow
// angle at the solution; this path replaces it whenever it applies.
Vector project_ball_pair(const L2Ball& ball, const AtomicConstraint& other,
                         const Vector& z) {
    auto inner = [&](double lambda) {
        Vector pt(z);
        if (!ball.center.empty()) axpy(lambda, ball.center, pt);
        pt = scale(pt, 1.0 / (1.0 + lambda));
        return atom_project(other, pt);
    };
    Vector w = inner(0.0);
    if (atom_satisfied(AtomicConstraint(ball), w, 0.0)) return w;
    double lo = 0.0;
    double hi = 1.0;
    while (!atom_satisfied(AtomicConstraint(ball), inner(hi), 0.0)) {
        hi *= 2.0;
        if (hi > 1e12) throw ProjectionNotConverged("ball multiplier diverged", w);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (atom_satisfied(AtomicConstraint(ball), inner(mid), 0.0) ? hi : lo) = mid;
    }
    return inner(hi);
}

Vector project_intersection(const std::vector<AtomicConstraint>& atoms, const Vector& z,
                            double tol, int max_iter) {
    if (atoms.size() == 1) return atom_project(atoms[0], z);
    if (atoms.size() == 2) {
        if (const auto* b = std::get_if<L2Ball>(&atoms[0])) {
            return project_ball_pair(*b, atoms[1], z);
        }
        if (const auto* b = std::get_if<L2Ball>(&atoms[1])) {
            return project_ball_pair(*b, atoms[0], z);
        }
    }
    return dykstra(atoms, z, tol, max_iter);
}

Vector dykstra(const std::vector<AtomicConstraint>& atoms, const Vector& z, double tol,
               int max_iter) {
    if (atoms.size() == 1) return atom_project(atoms[0], z);
    const std::size_t m = atoms.size();
    Vector x(z);
    std::vector<Vector> corr(m, Vector(z.size(), 0.0));
    for (int it = 0; it < max_iter; ++it) {
        double change = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            Vector y(x);
            axpy(1.0, corr[j], y);
            Vector px = atom_project(atoms[j], y);
            corr[j] = sub(y, px);
            change += norm2(sub(px, x));
            x = std::move(px);
        }
        if (change <= tol) return x;
    }
    throw ProjectionNotConverged("Dykstra projection did not converge", x);
}

}  // namespace

Vector FeasibleSet::project_euclidean(const Vector& z, double tol, int max_iter) const {
    if (contains(z, 0.0)) return z;
    if (constraints_.size() == 1) return atom_project(constraints_[0], z);

    // A tiny-offset halfspace meets a ball face almost tangentially and makes
    // plain Dykstra limit-cycle at the offset scale, so a single halfspace is
    // peeled off and handled by an exact dual scalar solve instead: project
    // onto the ball intersection at z + mu * normal and bisect on mu >= 0.
    // The halfspace slack of that projection is nondecreasing and 1-Lipschitz
    // in mu, which makes the bisection both correct and well conditioned.
    std::vector<AtomicConstraint> balls;
    const Halfspace* hs = nullptr;
    bool multiple_halfspaces = false;
    for (const auto& c : constraints_) {
        if (const auto* h = std::get_if<Halfspace>(&c)) {
            if (hs) multiple_halfspaces = true;
            hs = h;
        } else {
            balls.push_back(c);
        }
    }

    if (hs == nullptr || multiple_halfspaces || balls.empty()) {
        return project_intersection(constraints_, z, tol, max_iter);
    }

    auto project_balls = [&](double mu) {
        Vector shifted(z);
        axpy(mu, hs->normal, shifted);
        return project_intersection(balls, shifted, tol, max_iter);
    };

    Vector w = project_balls(0.0);
    if (dot(hs->normal, w) >= hs->offset) return w;

    double lo = 0.0;
    double hi = 1.0;
    while (dot(hs->normal, project_balls(hi)) < hs->offset) {
        hi *= 2.0;
        if (hi > 1e9) throw ProjectionNotConverged("halfspace multiplier diverged", w);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (dot(hs->normal, project_balls(mid)) < hs->offset ? lo : hi) = mid;
    }
    return project_balls(hi);
}

}  // namespace shal
