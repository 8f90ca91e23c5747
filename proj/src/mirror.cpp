#include "shal/mirror.hpp"

#include <cmath>

namespace shal {

double Regularizer::value(const Vector& w) const {
    const double n = norm_p(sub(w, reference), params.p);
    return n * n / (2.0 * (params.p - 1.0));
}

Vector Regularizer::grad(const Vector& w) const {
    Vector diff = sub(w, reference);
    if (norm_p(diff, params.p) < 1e-14) return Vector(w.size(), 0.0);
    return pnorm_grad(diff, params);
}

Vector Regularizer::grad_inverse(const Vector& theta) const {
    Vector u = pnorm_grad_inverse(theta, params);
    axpy(1.0, reference, u);
    return u;
}

double bregman(const Regularizer& reg, const Vector& w, const Vector& wprime) {
    const double d =
        reg.value(w) - reg.value(wprime) - dot(reg.grad(wprime), sub(w, wprime));
    return d < 0.0 ? 0.0 : d;  // clip float dust on w ~ w'
}

namespace {

double atom_violation(const AtomicConstraint& c, const Vector& w) {
    return std::visit(
        [&](const auto& atom) -> double {
            using T = std::decay_t<decltype(atom)>;
            if constexpr (std::is_same_v<T, L2Ball>) {
                const double dist =
                    atom.center.empty() ? norm2(w) : norm2(sub(w, atom.center));
                return std::max(0.0, dist - atom.radius);
            } else if constexpr (std::is_same_v<T, L1Ball>) {
                return std::max(0.0, norm1(w) - atom.radius);
            } else {
                return std::max(0.0, atom.offset - dot(atom.normal, w));
            }
        },
        c);
}

}  // namespace

Vector bregman_project(const Regularizer& reg, const FeasibleSet& K, const Vector& z,
                       double tol, int max_iter, std::vector<Vector>* dual_warm) {
    if (K.contains(z, 0.0)) return z;  // divergence is minimized at z

    const auto& atoms = K.constraints();
    const std::size_t m = atoms.size();
    const std::size_t d = z.size();
    const Vector theta_bar = reg.grad(z);

    // dual blocks y_j, one per atom; the primal readout is
    // w(y) = v + grad_psi_star(theta_bar - sum_j y_j)
    std::vector<Vector> y(m, Vector(d, 0.0));
    if (dual_warm && dual_warm->size() == m && !dual_warm->empty() &&
        (*dual_warm)[0].size() == d) {
        y = *dual_warm;
    }
    std::vector<Vector> y_prev = y;
    double step = 0.45 / static_cast<double>(m);
    double t_acc = 1.0;
    bool frozen = false;

    // residual and primal readout: w(y) = v + grad_psi_star(theta_bar - sum y_j)
    auto residual = [&](const std::vector<Vector>& blocks) {
        Vector r(theta_bar);
        for (const auto& b : blocks) axpy(-1.0, b, r);
        return r;
    };
    auto primal = [&](const std::vector<Vector>& blocks) {
        return reg.grad_inverse(residual(blocks));
    };
    // smooth part of the dual objective: psi_star(r) + <v, r>
    const double p_minus_1 = reg.params.p - 1.0;
    auto smooth_val = [&](const Vector& r) {
        const double nq = norm_p(r, reg.params.q);
        return 0.5 * p_minus_1 * nq * nq + dot(reg.reference, r);
    };

    auto finish = [&](Vector out) {
        if (dual_warm) *dual_warm = y;
        if (!K.contains(out, 1e-9)) out = K.project_euclidean(out);
        return out;
    };

    Vector w = primal(y);
    for (int it = 0; it < max_iter; ++it) {
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc));
        const double beta = (t_acc - 1.0) / t_next;
        std::vector<Vector> ye(m);
        for (std::size_t j = 0; j < m; ++j) {
            ye[j] = y[j];
            axpy(beta, sub(y[j], y_prev[j]), ye[j]);
        }
        const Vector re = residual(ye);
        const Vector we = reg.grad_inverse(re);  // -grad of the smooth part
        const double fe = smooth_val(re);

        // the conjugate q-norm map has local curvature spanning orders of
        // magnitude, so the prox step is sized by backtracking; regrowth is
        // frozen near the optimum, where a drifting step only causes
        // accept-overshoot limit cycles
        if (!frozen) step = std::min(step * 1.3, 1e8);
        std::vector<Vector> y_next(m);
        for (int bt = 0;; ++bt) {
            for (std::size_t j = 0; j < m; ++j) {
                Vector x = ye[j];
                axpy(step, we, x);
                const Vector px = atom_project(atoms[j], scale(x, 1.0 / step));
                y_next[j] = std::move(x);
                axpy(-step, px, y_next[j]);
            }
            if (bt >= 60) break;
            double lin = 0.0, quad = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const Vector dy = sub(y_next[j], ye[j]);
                lin += dot(we, dy);  // <grad f, dy> = -<we, dy>
                quad += dot(dy, dy);
            }
            const double bound = fe - lin + 0.5 * quad / step;
            if (smooth_val(residual(y_next)) <= bound + 1e-12 * (1.0 + std::abs(fe))) {
                break;
            }
            step *= 0.5;
        }

        double restart_dot = 0.0;  // O'Donoghue-Candes gradient restart test
        for (std::size_t j = 0; j < m; ++j) {
            restart_dot += dot(sub(ye[j], y_next[j]), sub(y_next[j], y[j]));
        }
        y_prev = std::move(y);
        y = std::move(y_next);
        t_acc = restart_dot > 0.0 ? 1.0 : t_next;

        Vector w_next = primal(y);
        double viol = 0.0;
        for (const auto& atom : atoms) viol = std::max(viol, atom_violation(atom, w_next));
        // step-normalized prox-gradient mapping: the movement alone is not an
        // optimality measure once the step adapts
        double gm_sq = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const Vector dy = sub(y[j], ye[j]);
            gm_sq += dot(dy, dy);
        }
        const double gm = std::sqrt(gm_sq) / step;
        w = std::move(w_next);
        const double ref = 1.0 + norm2(w);
        if (gm <= 1e-5 * ref) frozen = true;
        if (viol <= std::max(1e-9, tol) * ref && gm <= tol * ref) {
            return finish(std::move(w));
        }
    }
    // accept a modestly-accurate iterate rather than losing the run
    double viol = 0.0;
    for (const auto& atom : atoms) viol = std::max(viol, atom_violation(atom, w));
    if (viol <= 1e-6 * (1.0 + norm2(w))) return finish(std::move(w));
    throw ProjectionNotConverged("bregman_project: max_iter reached", w);
}

OmdState omd_step(const OmdState& state, const Vector& g) {
    Vector theta = state.reg.grad(state.iterate);
    axpy(-state.step, g, theta);
    Vector z = state.reg.grad_inverse(theta);
    OmdState next(state);
    // 1e-7 is ample for an OMD step (the step moves the iterate by ~alpha);
    // the solver snaps the result to exact feasibility on the way out
    next.iterate = bregman_project(state.reg, *state.set, z, 1e-7, 50000, &next.dual);
    next.t = state.t + 1;
    return next;
}

Vector online_to_batch(const std::vector<Vector>& iterates) {
    if (iterates.empty()) throw DegenerateVector("online_to_batch: empty");
    Vector sum(iterates[0].size(), 0.0);
    for (const auto& w : iterates) axpy(1.0, normalize(w), sum);
    return online_to_batch_sum(sum);
}

Vector online_to_batch_sum(const Vector& sum_of_units) {
    return normalize(sum_of_units);
}

}  // namespace shal
