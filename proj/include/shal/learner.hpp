#pragma once

#include <string>

#include "shal/diagnostics.hpp"
#include "shal/initialize.hpp"

namespace shal {

enum class Profile { Desk, Paper };
enum class Mode { Active, Passive };

Profile profile_from_string(const std::string& name);
std::string to_string(Profile profile);

/// Prefactors multiplying the per-phase and initialization prescriptions.
/// The desk defaults came out of a pilot grid search; the paper profile
/// ignores them and uses the literal constants.
struct ScheduleKnobs {
    double c1 = 0.5;        // disagreement constant entering k0
    double c_m = 10.0;      // averaging sample count
    double c_s_tilde = 4.0; // thresholding level (capped at d)
    double c_hs = 1.0;      // halfspace constraint offset
    double c_alpha0 = 0.5;  // initialization refine: step, band, iterations
    double c_b0 = 0.25;
    double c_T0 = 10.0;
    double c_alpha = 0.5;   // refinement phases
    double c_b = 0.25;
    double c_T = 50.0;
};

struct PhaseSchedule {
    int k;
    double alpha;
    double b;
    double iterations;  // double: the paper profile values overflow integers
    double radius;      // pi / (16 * 2^{k-1})
};

struct InitSchedule {
    double m;
    double s_tilde;
    double alpha;
    double b;
    double iterations;
};

PhaseSchedule phase_schedule(int k, double eta, std::size_t s, std::size_t d,
                             double delta, const ScheduleKnobs& knobs, Profile profile);

InitSchedule init_schedule(double eta, std::size_t s, std::size_t d, double delta,
                           const ScheduleKnobs& knobs, Profile profile);

int phase_count(double epsilon, double c1);

struct LearnerConfig {
    double epsilon = 0.05;
    double delta = 0.05;
    double eta = 0.0;
    std::size_t s = 5;
    std::size_t d = 50;
    ScheduleKnobs knobs;
    Profile profile = Profile::Desk;
    Mode mode = Mode::Active;
    int eval_samples = 100000;  // excess-error Monte Carlo size (0 to skip)
};

struct RunReport {
    Vector final_w;
    std::vector<double> phase_angles;  // index 0 is the initialization output
    std::uint64_t labels_total = 0;
    std::uint64_t labels_init = 0;
    std::vector<std::uint64_t> labels_per_phase;
    std::uint64_t ex_calls = 0;
    double excess_error_mean = 0.0;
    double excess_error_stderr = 0.0;
    double final_angle = 0.0;
    double wall_ms = 0.0;
    Mode mode = Mode::Active;
    bool completed = false;
    std::string abort_reason;  // set when a stage error produced a partial report
};

/// Algorithm 1: initialization followed by k0 phase-doubling refine calls.
RunReport learn(const LearnerConfig& cfg, OracleBundle& oracles,
                const TraceSink& sink = nullptr);

/// Labeled-sample count of the supervised learner induced by a passive run.
std::uint64_t passive_sample_count(const RunReport& report);

}  // namespace shal
