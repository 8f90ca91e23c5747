#pragma once

#include <functional>
#include <optional>

#include "shal/mirror.hpp"
#include "shal/oracle.hpp"

namespace shal {

/// Per-iteration trace record emitted by refine (angle is present only when
/// the sink was given the ground truth).
struct TraceRecord {
    int t;
    double angle_to_truth;
    double grad_q_norm;
    std::uint64_t labels_so_far;
};

using TraceSink = std::function<void(const TraceRecord&)>;

struct RefineConfig {
    Vector w1;             // initial halfspace, must lie in K
    double delta = 0.05;   // logged only, no runtime branching
    double eta = 0.0;
    double alpha = 0.1;
    double b = 0.1;
    const FeasibleSet* K = nullptr;
    int T = 100;
    Vector reference;      // v of Phi_v; defaults to w1 when empty
    bool passive = false;
};

/// g = (-y/2 + (1/2 - eta) yhat) x with yhat = sign(<w, x>).
Vector noise_aware_gradient(const Vector& x, int y, const Vector& w, double eta);

/// The band-sampling OMD loop; returns the normalized average of the
/// normalized iterates. Consumes exactly T label queries in active mode.
Vector refine(const RefineConfig& cfg, OracleBundle& oracles,
              const TraceSink& sink = nullptr);

struct McValue {
    double estimate;
    double stderr;
};

/// Monte Carlo estimate of the band-conditioned disagreement margin mass
/// E[|<u,x>| 1{sign<w,x> != sign<u,x>}] over x ~ D_X | band(w, b).
McValue estimate_f_ub(const Vector& w, const Vector& u, double b,
                      UnlabeledDistribution& dist, int n_mc);

}  // namespace shal
