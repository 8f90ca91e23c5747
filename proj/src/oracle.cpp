#include "shal/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace shal {

namespace {

constexpr double kCubeHalfWidth = 1.7320508075688772;  // sqrt(3), unit variance
constexpr double kLaplaceScale = 0.7071067811865476;   // 1/sqrt(2), unit variance

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

DistKind dist_kind_from_string(const std::string& name) {
    if (name == "gaussian") return DistKind::Gaussian;
    if (name == "uniform_cube") return DistKind::UniformCube;
    if (name == "isotropic_laplace") return DistKind::IsotropicLaplace;
    throw ConfigError("unknown distribution kind: " + name);
}

std::string to_string(DistKind kind) {
    switch (kind) {
        case DistKind::Gaussian: return "gaussian";
        case DistKind::UniformCube: return "uniform_cube";
        default: return "isotropic_laplace";
    }
}

std::mt19937_64 split_rng(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
}

Vector UnlabeledDistribution::sample() {
    Vector x(dim_);
    switch (kind_) {
        case DistKind::Gaussian: {
            std::normal_distribution<double> n(0.0, 1.0);
            for (double& xi : x) xi = n(rng_);
            break;
        }
        case DistKind::UniformCube: {
            std::uniform_real_distribution<double> u(-kCubeHalfWidth, kCubeHalfWidth);
            for (double& xi : x) xi = u(rng_);
            break;
        }
        case DistKind::IsotropicLaplace: {
            std::uniform_real_distribution<double> u(-0.5, 0.5);
            for (double& xi : x) {
                const double v = u(rng_);
                xi = -kLaplaceScale * std::copysign(std::log(1.0 - 2.0 * std::abs(v)), v);
            }
            break;
        }
    }
    return x;
}

GroundTruth GroundTruth::random(std::size_t dim, std::size_t s, std::mt19937_64& rng) {
    if (s < 1 || s > dim) throw InvalidSparsity("GroundTruth: s must be in [1, d]");
    std::vector<std::size_t> idx(dim);
    for (std::size_t i = 0; i < dim; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::normal_distribution<double> n(0.0, 1.0);
    Vector u(dim, 0.0);
    for (std::size_t k = 0; k < s; ++k) u[idx[k]] = n(rng);
    return GroundTruth{normalize(u), s};
}

NoiseModel NoiseModel::constant(double eta, std::mt19937_64 rng) {
    return NoiseModel(NoiseKind::Constant, eta, 0.0, std::move(rng));
}

NoiseModel NoiseModel::margin_concentrated(double eta, double tau, std::mt19937_64 rng) {
    return NoiseModel(NoiseKind::MarginConcentrated, eta, tau, std::move(rng));
}

NoiseModel NoiseModel::random_field(double eta, std::mt19937_64 rng) {
    return NoiseModel(NoiseKind::RandomField, eta, 0.0, std::move(rng));
}

double NoiseModel::flip_probability(const Vector& x, const GroundTruth& truth) const {
    switch (kind_) {
        case NoiseKind::Constant:
            return eta_;
        case NoiseKind::MarginConcentrated:
            return std::abs(dot(truth.u, x)) <= tau_ ? eta_ : 0.0;
        case NoiseKind::RandomField: {
            // region id from the sign pattern of the leading coordinates; each
            // region gets an iid rate in [0, eta]
            std::uint64_t h = 0x51ed270b7a2fd8d5ULL;
            const std::size_t n = std::min<std::size_t>(x.size(), 16);
            for (std::size_t i = 0; i < n; ++i) {
                h = mix64(h ^ static_cast<std::uint64_t>(x[i] >= 0.0 ? 2 * i + 1 : 2 * i));
            }
            const double u01 =
                static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
            return eta_ * u01;
        }
    }
    return eta_;
}

bool NoiseModel::should_flip(const Vector& x, const GroundTruth& truth) {
    const double p = flip_probability(x, truth);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng_) < p;
}

Vector draw_unlabeled(UnlabeledDistribution& dist, OracleStats& stats) {
    ++stats.ex_calls;
    return dist.sample();
}

int query_label(const Vector& x, const GroundTruth& truth, NoiseModel& noise,
                OracleStats& stats) {
    ++stats.label_queries;
    const int clean = sign(dot(truth.u, x));
    return noise.should_flip(x, truth) ? -clean : clean;
}

int default_band_attempts(double b) {
    // band mass is Omega(b) for isotropic log-concave marginals, so 200/b
    // failures in a row indicate a configuration bug, not bad luck
    return static_cast<int>(std::ceil(200.0 / b));
}

Vector draw_band_conditioned(UnlabeledDistribution& dist, const Vector& w_hat, double b,
                             int max_attempts, std::uint64_t& attempts_used) {
    if (b <= 0.0) throw ConfigError("draw_band_conditioned: b must be positive");
    if (max_attempts <= 0) max_attempts = default_band_attempts(b);
    attempts_used = 0;

    if (dist.kind() == DistKind::Gaussian) {
        std::normal_distribution<double> n(0.0, 1.0);
        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            ++attempts_used;
            const double margin = n(dist.rng());
            if (std::abs(margin) <= b) {
                Vector x = dist.sample();
                axpy(margin - dot(w_hat, x), w_hat, x);
                return x;
            }
        }
    } else {
        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            ++attempts_used;
            Vector x = dist.sample();
            if (std::abs(dot(w_hat, x)) <= b) return x;
        }
    }
    throw BandSamplingExhausted("band sampling: max_attempts exceeded");
}

LabeledExample sample_band(UnlabeledDistribution& dist, const GroundTruth& truth,
                           NoiseModel& noise, const Vector& w_hat, double b,
                           OracleStats& stats, int max_attempts, bool passive) {
    if (b <= 0.0) throw ConfigError("sample_band: b must be positive");
    if (max_attempts <= 0) max_attempts = default_band_attempts(b);

    if (passive) {
        // every encountered example is also labeled
        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            Vector x = draw_unlabeled(dist, stats);
            const bool in_band = std::abs(dot(w_hat, x)) <= b;
            const int y = query_label(x, truth, noise, stats);
            if (in_band) return LabeledExample{std::move(x), y};
        }
        throw BandSamplingExhausted("sample_band: max_attempts exceeded");
    }

    std::uint64_t attempts = 0;
    Vector x = draw_band_conditioned(dist, w_hat, b, max_attempts, attempts);
    stats.ex_calls += attempts;
    const int y = query_label(x, truth, noise, stats);
    return LabeledExample{std::move(x), y};
}

OracleBundle make_oracle_bundle(std::uint64_t master_seed, DistKind kind, std::size_t dim,
                                std::size_t s, double eta, NoiseKind noise_kind,
                                double tau) {
    if (eta < 0.0 || eta >= 0.5) throw ConfigError("eta must be in [0, 0.5)");
    auto truth_rng = split_rng(master_seed, 0);
    auto dist_rng = split_rng(master_seed, 1);
    auto noise_rng = split_rng(master_seed, 2);
    GroundTruth truth = GroundTruth::random(dim, s, truth_rng);
    NoiseModel noise = noise_kind == NoiseKind::Constant
                           ? NoiseModel::constant(eta, std::move(noise_rng))
                       : noise_kind == NoiseKind::MarginConcentrated
                           ? NoiseModel::margin_concentrated(eta, tau, std::move(noise_rng))
                           : NoiseModel::random_field(eta, std::move(noise_rng));
    return OracleBundle{UnlabeledDistribution(kind, dim, std::move(dist_rng)),
                        std::move(truth), std::move(noise), OracleStats{}};
}

}  // namespace shal
