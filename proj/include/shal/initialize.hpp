#pragma once

#include "shal/refine.hpp"

namespace shal {

struct InitConfig {
    int m = 0;                  // labeled samples for the averaging stage
    std::size_t s_tilde = 0;    // thresholding level, capped at d
    double eta = 0.0;
    std::size_t s = 1;
    double delta = 0.05;        // logged only
    double alpha = 0.1;         // stage-two refine schedule
    double b = 0.1;
    int T = 100;
    double c_hs = 1.0;          // scaling of the halfspace constraint offset
    bool passive = false;
};

struct InitResult {
    Vector v0;                 // unit output
    Vector w_sharp;
    double w_sharp_dot_truth;  // <w#, u>, for diagnostics
    double w_avg_norm;
    std::uint64_t labels_stage1;
    std::uint64_t labels_total;
};

/// Mean of y*x over m fresh full-distribution labeled draws.
Vector averaging_direction(OracleBundle& oracles, int m);

/// normalize(hard_threshold(w_avg, s_tilde)).
Vector coarse_estimate(const Vector& w_avg, std::size_t s_tilde);

double halfspace_offset(double eta, double c_hs);

/// Builds K = {||w||_2 <= 1, ||w||_1 <= sqrt(s), <w, w#> >= offset} with the
/// scaled-w# witness as the initial point, then runs the constrained refine.
InitResult initialize(const InitConfig& cfg, OracleBundle& oracles,
                      const TraceSink& sink = nullptr);

}  // namespace shal
