#pragma once

#include <cstddef>
#include <vector>

#include "shal/errors.hpp"

namespace shal {

using Vector = std::vector<double>;

/// The conjugate pair (p, q) used by the mirror map. When built from a
/// dimension d, p = ln(8d)/(ln(8d)-1) and q = ln(8d).
struct PNormParams {
    double p;
    double q;

    PNormParams(double p_, double q_);
    static PNormParams from_dimension(std::size_t d);
    static PNormParams euclidean() { return PNormParams(2.0, 2.0); }
};

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
double norm1(const Vector& v);
double norm_inf(const Vector& v);

/// lp norm computed with max-scaling so that |x_i|^p stays in range even
/// for p close to 1.
double norm_p(const Vector& v, double p);

Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scale(const Vector& v, double c);
void axpy(double c, const Vector& x, Vector& y);  // y += c*x

bool all_finite(const Vector& v);

/// Keeps the s largest-magnitude entries, zeroing the rest. Ties at the
/// cut are broken toward the lower index.
Vector hard_threshold(const Vector& v, std::size_t s);

/// Unit-normalized copy of v. Throws DegenerateVector on the zero vector.
Vector normalize(const Vector& v);

/// Angle between v1 and v2 in [0, pi]; the cosine is clamped before acos.
double angle(const Vector& v1, const Vector& v2);

/// Gradient of w -> ||w||_p^2 / (2(p-1)) evaluated at u. Maps 0 to 0.
Vector pnorm_grad(const Vector& u, const PNormParams& params);

/// Inverse of pnorm_grad: component j is (p-1) sign(t_j)|t_j|^{q-1} ||t||_q^{2-q}.
Vector pnorm_grad_inverse(const Vector& theta, const PNormParams& params);

inline int sign(double z) { return z >= 0.0 ? 1 : -1; }

}  // namespace shal
