#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "shal/learner.hpp"

namespace shal {

/// One experiment description: learner config template, oracle kinds, sweep
/// axes, seeds, output directory. Parsed fail-closed: unknown keys error.
struct ExperimentConfig {
    Profile profile = Profile::Desk;
    DistKind distribution = DistKind::Gaussian;
    NoiseKind noise = NoiseKind::Constant;
    double tau = 0.5;       // MarginConcentrated band width
    Mode mode = Mode::Active;
    double delta = 0.05;
    int eval_samples = 100000;
    std::vector<std::size_t> d_values;
    std::vector<std::size_t> s_values;
    std::vector<double> eta_values;
    std::vector<double> epsilon_values;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path output_dir = "results";
    ScheduleKnobs knobs;

    static ExperimentConfig parse_file(const std::filesystem::path& path);
    static ExperimentConfig parse_json(const std::string& text);
    std::string canonical_json() const;
};

struct SweepPoint {
    std::size_t d;
    std::size_t s;
    double eta;
    double epsilon;
    std::uint64_t seed;
};

std::vector<SweepPoint> enumerate_sweep(const ExperimentConfig& cfg);

NoiseKind noise_kind_from_string(const std::string& name);
std::string to_string(NoiseKind kind);
Mode mode_from_string(const std::string& name);
std::string to_string(Mode mode);

inline constexpr const char* kResultsSchemaId = "shal-results-v1";
inline constexpr const char* kResultsFileName = "results.csv";

/// Runs every (sweep point x seed), writes results.csv, summary.json and a
/// sidecar log under cfg.output_dir. Returns a process exit code
/// (0 ok, 2 some run aborted).
int run_experiment(const ExperimentConfig& cfg, int jobs = 1);

/// Pivots results.csv into per-axis median +- IQR label counts; returns the
/// path of the written table.
std::filesystem::path emit_label_complexity_table(const std::filesystem::path& results_dir);

}  // namespace shal
