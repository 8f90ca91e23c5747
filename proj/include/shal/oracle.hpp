#pragma once

#include <cstdint>
#include <random>

#include "shal/vector_ops.hpp"

namespace shal {

struct OracleStats {
    std::uint64_t ex_calls = 0;
    std::uint64_t label_queries = 0;
};

struct LabeledExample {
    Vector x;
    int y;  // +1 or -1
};

enum class DistKind { Gaussian, UniformCube, IsotropicLaplace };

DistKind dist_kind_from_string(const std::string& name);
std::string to_string(DistKind kind);

/// Split stream: each consumer derives its own engine from (master, stream id).
std::mt19937_64 split_rng(std::uint64_t master_seed, std::uint64_t stream_id);

/// Seedable isotropic log-concave generator (unit covariance per kind).
class UnlabeledDistribution {
public:
    UnlabeledDistribution(DistKind kind, std::size_t dim, std::mt19937_64 rng)
        : kind_(kind), dim_(dim), rng_(std::move(rng)) {}

    DistKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    std::mt19937_64& rng() { return rng_; }

    Vector sample();

private:
    DistKind kind_;
    std::size_t dim_;
    std::mt19937_64 rng_;
};

struct GroundTruth {
    Vector u;       // s-sparse unit vector
    std::size_t s;  // sparsity budget

    static GroundTruth random(std::size_t dim, std::size_t s, std::mt19937_64& rng);
};

enum class NoiseKind { Constant, MarginConcentrated, RandomField };

/// Massart flip model: flip_probability(x) <= eta_bound everywhere.
class NoiseModel {
public:
    static NoiseModel constant(double eta, std::mt19937_64 rng);
    static NoiseModel margin_concentrated(double eta, double tau, std::mt19937_64 rng);
    static NoiseModel random_field(double eta, std::mt19937_64 rng);

    double eta_bound() const { return eta_; }
    NoiseKind kind() const { return kind_; }

    /// The (deterministic in x) flip probability the adversary uses at x.
    double flip_probability(const Vector& x, const GroundTruth& truth) const;

    bool should_flip(const Vector& x, const GroundTruth& truth);

private:
    NoiseModel(NoiseKind kind, double eta, double tau, std::mt19937_64 rng)
        : kind_(kind), eta_(eta), tau_(tau), rng_(std::move(rng)) {}

    NoiseKind kind_;
    double eta_;
    double tau_;  // MarginConcentrated band width
    std::mt19937_64 rng_;
};

Vector draw_unlabeled(UnlabeledDistribution& dist, OracleStats& stats);

int query_label(const Vector& x, const GroundTruth& truth, NoiseModel& noise,
                OracleStats& stats);

int default_band_attempts(double b);

/// Band-conditioned draw without label query or stats bookkeeping; reports
/// the number of rejection attempts consumed. For the Gaussian the margin
/// is rejection-sampled on its own (same attempt-count law, same
/// conditional distribution) and the vector is materialized on acceptance.
Vector draw_band_conditioned(UnlabeledDistribution& dist, const Vector& w_hat, double b,
                             int max_attempts, std::uint64_t& attempts_used);

/// Rejection-samples from the band {|<w_hat, x>| <= b}, then labels the
/// accepted point. ex_calls counts every attempt; exactly one label query.
/// `passive` additionally spends a label query on each rejected attempt.
LabeledExample sample_band(UnlabeledDistribution& dist, const GroundTruth& truth,
                           NoiseModel& noise, const Vector& w_hat, double b,
                           OracleStats& stats, int max_attempts = 0,
                           bool passive = false);

/// Everything one learning run needs, with distribution/noise streams split
/// from a single master seed.
struct OracleBundle {
    UnlabeledDistribution dist;
    GroundTruth truth;
    NoiseModel noise;
    OracleStats stats;
};

OracleBundle make_oracle_bundle(std::uint64_t master_seed, DistKind kind, std::size_t dim,
                                std::size_t s, double eta,
                                NoiseKind noise_kind = NoiseKind::Constant,
                                double tau = 0.5);

}  // namespace shal
