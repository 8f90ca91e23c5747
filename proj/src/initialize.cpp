#include "shal/initialize.hpp"

#include <cmath>

namespace shal {

Vector averaging_direction(OracleBundle& oracles, int m) {
    if (m < 1) throw ConfigError("averaging_direction: m must be >= 1");
    Vector sum(oracles.dist.dim(), 0.0);
    for (int i = 0; i < m; ++i) {
        Vector x = draw_unlabeled(oracles.dist, oracles.stats);
        const int y = query_label(x, oracles.truth, oracles.noise, oracles.stats);
        axpy(static_cast<double>(y), x, sum);
    }
    return scale(sum, 1.0 / m);
}

Vector coarse_estimate(const Vector& w_avg, std::size_t s_tilde) {
    return normalize(hard_threshold(w_avg, std::min(s_tilde, w_avg.size())));
}

double halfspace_offset(double eta, double c_hs) {
    return c_hs * (1.0 - 2.0 * eta) / (9.0 * 524288.0);  // (1-2eta)/(9*2^19)
}

InitResult initialize(const InitConfig& cfg, OracleBundle& oracles, const TraceSink& sink) {
    const std::uint64_t labels_before = oracles.stats.label_queries;

    Vector w_avg = averaging_direction(oracles, cfg.m);
    Vector w_sharp = coarse_estimate(w_avg, cfg.s_tilde);
    const std::uint64_t labels_stage1 = oracles.stats.label_queries - labels_before;

    const double offset = halfspace_offset(cfg.eta, cfg.c_hs);
    Vector w1 = scale(w_sharp, offset);  // meets the halfspace bound with equality
    FeasibleSet K({L2Ball{{}, 1.0}, L1Ball{std::sqrt(static_cast<double>(cfg.s))},
                   Halfspace{w_sharp, offset}},
                  w1);

    RefineConfig rc;
    rc.w1 = std::move(w1);
    rc.delta = cfg.delta / 2.0;
    rc.eta = cfg.eta;
    rc.alpha = cfg.alpha;
    rc.b = cfg.b;
    rc.K = &K;
    rc.T = cfg.T;
    rc.passive = cfg.passive;
    Vector v0 = refine(rc, oracles, sink);

    return InitResult{std::move(v0),
                      w_sharp,
                      dot(w_sharp, oracles.truth.u),
                      norm2(w_avg),
                      labels_stage1,
                      oracles.stats.label_queries - labels_before};
}

}  // namespace shal
