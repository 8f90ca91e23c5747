#include "shal/refine.hpp"

#include <cmath>

namespace shal {

Vector noise_aware_gradient(const Vector& x, int y, const Vector& w, double eta) {
    const int yhat = sign(dot(w, x));
    const double c = -0.5 * y + (0.5 - eta) * yhat;
    return scale(x, c);
}

Vector refine(const RefineConfig& cfg, OracleBundle& oracles, const TraceSink& sink) {
    if (cfg.K == nullptr) throw ConfigError("refine: no feasible set");
    if (cfg.T < 1 || cfg.alpha <= 0.0 || cfg.b <= 0.0) {
        throw ConfigError("refine: need T >= 1, alpha > 0, b > 0");
    }
    const Vector& v = cfg.reference.empty() ? cfg.w1 : cfg.reference;
    const PNormParams params = PNormParams::from_dimension(cfg.w1.size());
    OmdState state{cfg.w1, cfg.alpha, cfg.K, Regularizer{v, params}, 0};

    Vector unit_sum(cfg.w1.size(), 0.0);
    for (int t = 1; t <= cfg.T; ++t) {
        Vector w_hat = normalize(state.iterate);
        axpy(1.0, w_hat, unit_sum);
        LabeledExample ex = sample_band(oracles.dist, oracles.truth, oracles.noise, w_hat,
                                        cfg.b, oracles.stats, 0, cfg.passive);
        Vector g = noise_aware_gradient(ex.x, ex.y, state.iterate, cfg.eta);
        state = omd_step(state, g);
        if (sink) {
            sink(TraceRecord{t, angle(state.iterate, oracles.truth.u),
                             norm_p(g, params.q), oracles.stats.label_queries});
        }
    }
    return online_to_batch_sum(unit_sum);
}

McValue estimate_f_ub(const Vector& w, const Vector& u, double b,
                      UnlabeledDistribution& dist, int n_mc) {
    if (n_mc < 1) throw ConfigError("estimate_f_ub: n_mc must be >= 1");
    const Vector w_hat = normalize(w);
    const Vector u_hat = normalize(u);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n_mc; ++i) {
        std::uint64_t attempts = 0;
        Vector x = draw_band_conditioned(dist, w_hat, b, 0, attempts);
        const double margin_u = dot(u_hat, x);
        const double val =
            sign(dot(w_hat, x)) != sign(margin_u) ? std::abs(margin_u) : 0.0;
        sum += val;
        sumsq += val * val;
    }
    const double mean = sum / n_mc;
    const double var = n_mc > 1 ? (sumsq - n_mc * mean * mean) / (n_mc - 1) : 0.0;
    return McValue{mean, std::sqrt(std::max(var, 0.0) / n_mc)};
}

}  // namespace shal
