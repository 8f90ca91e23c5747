#include "shal/learner.hpp"

#include <chrono>
#include <cmath>

namespace shal {

namespace {

int checked_iterations(double value, const char* what) {
    if (!(value >= 1.0)) throw ConfigError(std::string(what) + ": schedule below 1");
    if (value > 2e9) {
        throw ConfigError(std::string(what) +
                          ": schedule too large to execute (use the desk profile)");
    }
    return static_cast<int>(std::ceil(value));
}

}  // namespace

Profile profile_from_string(const std::string& name) {
    if (name == "desk") return Profile::Desk;
    if (name == "paper") return Profile::Paper;
    throw ConfigError("unknown profile: " + name);
}

std::string to_string(Profile profile) {
    return profile == Profile::Desk ? "desk" : "paper";
}

int phase_count(double epsilon, double c1) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must be in (0,1)");
    const double v = std::log2(1.0 / (c1 * epsilon));
    return v <= 0.0 ? 0 : static_cast<int>(std::ceil(v));
}

PhaseSchedule phase_schedule(int k, double eta, std::size_t s, std::size_t d,
                             double delta, const ScheduleKnobs& knobs, Profile profile) {
    const double gap = 1.0 - 2.0 * eta;
    const double two_k = std::pow(2.0, k);
    const double radius = M_PI / (16.0 * std::pow(2.0, k - 1));
    if (profile == Profile::Desk) {
        return PhaseSchedule{
            k, knobs.c_alpha * gap / two_k, knobs.c_b * gap / two_k,
            std::ceil(knobs.c_T * s * std::log(static_cast<double>(d)) / (gap * gap)),
            radius};
    }
    // literal prescriptions: theta_k = pi/(32*2^{k-1}), alpha with the log^2
    // damping of the local-convergence corollary
    const double theta = M_PI / (32.0 * std::pow(2.0, k - 1));
    const double log_term =
        std::log(static_cast<double>(d) * k * k * two_k / (delta * gap));
    const double b = gap * theta;
    const double alpha_log = std::log(static_cast<double>(d) / (delta * theta * gap));
    return PhaseSchedule{k, gap * theta / (alpha_log * alpha_log), b,
                         std::ceil(s / (gap * gap) * log_term * log_term * log_term),
                         radius};
}

InitSchedule init_schedule(double eta, std::size_t s, std::size_t d, double delta,
                           const ScheduleKnobs& knobs, Profile profile) {
    const double gap = 1.0 - 2.0 * eta;
    const double dd = static_cast<double>(d);
    if (profile == Profile::Desk) {
        return InitSchedule{
            std::ceil(knobs.c_m * s * std::log(8.0 * dd) / (gap * gap)),
            std::min(dd, std::ceil(knobs.c_s_tilde * s / (gap * gap))),
            knobs.c_alpha0 * gap * gap, knobs.c_b0 * gap * gap,
            std::ceil(knobs.c_T0 * s * std::log(dd) / (gap * gap * gap * gap))};
    }
    const double log_term = std::log(dd / (delta * gap));
    return InitSchedule{
        std::ceil(81.0 * std::pow(2.0, 51) * s * std::log(8.0 * dd / delta) /
                  (gap * gap)),
        std::min(dd, std::ceil(81.0 * std::pow(2.0, 38) * s / (gap * gap))),
        gap * gap / (log_term * log_term), gap * gap,
        std::ceil(s / (gap * gap * gap * gap) * log_term * log_term * log_term)};
}

RunReport learn(const LearnerConfig& cfg, OracleBundle& oracles, const TraceSink& sink) {
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ConfigError("delta must be in (0,1)");
    if (cfg.s < 1 || cfg.s > cfg.d) throw InvalidSparsity("learner: s must be in [1, d]");

    const auto t_start = std::chrono::steady_clock::now();
    RunReport report;
    report.mode = cfg.mode;
    const bool passive = cfg.mode == Mode::Passive;
    const int k0 = phase_count(cfg.epsilon, cfg.knobs.c1);

    try {
        const InitSchedule is = init_schedule(cfg.eta, cfg.s, cfg.d, cfg.delta / 2.0,
                                              cfg.knobs, cfg.profile);
        InitConfig ic;
        ic.m = checked_iterations(is.m, "init m");
        ic.s_tilde = static_cast<std::size_t>(is.s_tilde);
        ic.eta = cfg.eta;
        ic.s = cfg.s;
        ic.delta = cfg.delta / 2.0;
        ic.alpha = is.alpha;
        ic.b = is.b;
        ic.T = checked_iterations(is.iterations, "init T");
        ic.c_hs = cfg.knobs.c_hs;
        ic.passive = passive;

        InitResult init = initialize(ic, oracles, sink);
        report.labels_init = init.labels_total;
        Vector v_tilde = std::move(init.v0);
        report.phase_angles.push_back(angle(v_tilde, oracles.truth.u));

        for (int k = 1; k <= k0; ++k) {
            const PhaseSchedule ps = phase_schedule(
                k, cfg.eta, cfg.s, cfg.d, cfg.delta / (2.0 * k * (k + 1)), cfg.knobs,
                cfg.profile);
            Vector v_prev = hard_threshold(v_tilde, cfg.s);
            FeasibleSet K = FeasibleSet::refine_set(v_prev, ps.radius);

            RefineConfig rc;
            rc.w1 = v_prev;
            rc.delta = cfg.delta / (2.0 * k * (k + 1));
            rc.eta = cfg.eta;
            rc.alpha = ps.alpha;
            rc.b = ps.b;
            rc.K = &K;
            rc.T = checked_iterations(ps.iterations, "phase T");
            rc.reference = v_prev;
            rc.passive = passive;

            const std::uint64_t labels_before = oracles.stats.label_queries;
            v_tilde = refine(rc, oracles, sink);
            report.labels_per_phase.push_back(oracles.stats.label_queries -
                                              labels_before);
            report.phase_angles.push_back(angle(v_tilde, oracles.truth.u));
        }

        report.final_w = v_tilde;
        report.final_angle = report.phase_angles.back();
        report.completed = true;
    } catch (const std::exception& e) {
        report.abort_reason = e.what();
    }

    report.labels_total = oracles.stats.label_queries;
    report.ex_calls = oracles.stats.ex_calls;

    if (report.completed && cfg.eval_samples > 1) {
        // shared evaluation x-stream across runs pairs the estimates; the run's
        // own noise model supplies the flips
        UnlabeledDistribution eval_dist(oracles.dist.kind(), oracles.dist.dim(),
                                        split_rng(0xabcdef12ULL, 8));
        const McEstimate e = excess_error(report.final_w, oracles.truth, oracles.noise,
                                          eval_dist, cfg.eval_samples);
        report.excess_error_mean = e.mean;
        report.excess_error_stderr = e.stderr;
    }

    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t_start)
                         .count();
    return report;
}

std::uint64_t passive_sample_count(const RunReport& report) {
    if (report.mode != Mode::Passive) {
        throw ModeMismatch("passive_sample_count: report is from an active run");
    }
    return report.ex_calls;
}

}  // namespace shal
