#include "shal/vector_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace shal {

PNormParams::PNormParams(double p_, double q_) : p(p_), q(q_) {
    if (!(p > 1.0 && p <= 2.0) || !(q >= 2.0)) {
        throw ConfigError("PNormParams: need p in (1,2] and q in [2,inf)");
    }
    if (std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-12) {
        throw ConfigError("PNormParams: p and q are not conjugate");
    }
}

PNormParams PNormParams::from_dimension(std::size_t d) {
    const double lq = std::log(8.0 * static_cast<double>(d));
    return PNormParams(lq / (lq - 1.0), lq);
}

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

double norm1(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double norm_inf(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm_p(const Vector& v, double p) {
    const double m = norm_inf(v);
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x) / m, p);
    return m * std::pow(s, 1.0 / p);
}

Vector add(const Vector& a, const Vector& b) {
    Vector r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Vector sub(const Vector& a, const Vector& b) {
    Vector r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Vector scale(const Vector& v, double c) {
    Vector r(v);
    for (double& x : r) x *= c;
    return r;
}

void axpy(double c, const Vector& x, Vector& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

bool all_finite(const Vector& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

Vector hard_threshold(const Vector& v, std::size_t s) {
    const std::size_t d = v.size();
    if (s < 1 || s > d) {
        throw InvalidSparsity("hard_threshold: s must be in [1, d]");
    }
    if (s == d) return v;
    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    // stable partial sort on |v_i| descending; ties keep the lower index
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(v[a]) > std::abs(v[b]);
    });
    Vector out(d, 0.0);
    for (std::size_t k = 0; k < s; ++k) out[idx[k]] = v[idx[k]];
    return out;
}

Vector normalize(const Vector& v) {
    const double n = norm2(v);
    if (n <= 0.0) throw DegenerateVector("normalize: zero vector");
    return scale(v, 1.0 / n);
}

double angle(const Vector& v1, const Vector& v2) {
    const double n1 = norm2(v1);
    const double n2 = norm2(v2);
    if (n1 <= 0.0 || n2 <= 0.0) throw DegenerateVector("angle: zero vector");
    double c = dot(v1, v2) / (n1 * n2);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c);
}

Vector pnorm_grad(const Vector& u, const PNormParams& params) {
    // component j: sign(u_j) |u_j|^{p-1} ||u||_p^{2-p} / (p-1), written as
    // sign(u_j) (|u_j|/||u||_p)^{p-1} ||u||_p / (p-1) so the pow stays in [0,1]
    const double p = params.p;
    const double np = norm_p(u, p);
    Vector out(u.size(), 0.0);
    if (np < 1e-300) return out;
    const double c = np / (p - 1.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = std::abs(u[i]);
        if (a > 0.0) out[i] = (u[i] > 0 ? 1.0 : -1.0) * std::pow(a / np, p - 1.0) * c;
    }
    return out;
}

Vector pnorm_grad_inverse(const Vector& theta, const PNormParams& params) {
    // component j: (p-1) sign(t_j) |t_j|^{q-1} ||t||_q^{2-q}, same scaling trick;
    // q = ln(8d) can be large, so |t_j|^{q-1} on its own would over/underflow
    const double p = params.p;
    const double q = params.q;
    const double nq = norm_p(theta, q);
    Vector out(theta.size(), 0.0);
    if (nq < 1e-300) return out;
    const double c = (p - 1.0) * nq;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double a = std::abs(theta[i]);
        if (a > 0.0) out[i] = (theta[i] > 0 ? 1.0 : -1.0) * std::pow(a / nq, q - 1.0) * c;
    }
    return out;
}

}  // namespace shal
