#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shal/initialize.hpp"

using namespace shal;

TEST_CASE("averaging_direction is the label-weighted sample mean") {
    OracleBundle b = make_oracle_bundle(3, DistKind::Gaussian, 6, 2, 0.0);
    // replay the same streams independently
    OracleBundle replay = make_oracle_bundle(3, DistKind::Gaussian, 6, 2, 0.0);
    const int m = 50;
    Vector expect(6, 0.0);
    for (int i = 0; i < m; ++i) {
        Vector x = draw_unlabeled(replay.dist, replay.stats);
        const int y = query_label(x, replay.truth, replay.noise, replay.stats);
        axpy(static_cast<double>(y) / m, x, expect);
    }
    const Vector got = averaging_direction(b, m);
    CHECK(norm2(sub(got, expect)) <= 1e-12);
    CHECK(b.stats.ex_calls == m);
    CHECK(b.stats.label_queries == m);
    CHECK_THROWS_AS(averaging_direction(b, 0), ConfigError);
}

TEST_CASE("averaging_direction points toward the truth") {
    // E[y x] = (something positive) * u for isotropic symmetric noise models,
    // so a large sample should land within a modest angle of u
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        OracleBundle b = make_oracle_bundle(40 + seed, DistKind::Gaussian, 20, 3, 0.2);
        const Vector w_avg = averaging_direction(b, 20000);
        CHECK(angle(w_avg, b.truth.u) < 0.3);
    }
}

TEST_CASE("coarse_estimate thresholds then normalizes") {
    const Vector got = coarse_estimate({3.0, -1.0, 0.5, 2.0}, 2);
    const double n = std::sqrt(13.0);
    CHECK(got[0] == doctest::Approx(3.0 / n).epsilon(1e-12));
    CHECK(got[1] == 0.0);
    CHECK(got[2] == 0.0);
    CHECK(got[3] == doctest::Approx(2.0 / n).epsilon(1e-12));
    // s_tilde larger than d is capped
    const Vector all = coarse_estimate({3.0, 4.0}, 10);
    CHECK(all[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(all[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("halfspace_offset") {
    CHECK(halfspace_offset(0.0, 1.0) == doctest::Approx(1.0 / 4718592.0).epsilon(1e-12));
    CHECK(halfspace_offset(0.25, 1.0) ==
          doctest::Approx(0.5 / 4718592.0).epsilon(1e-12));
    CHECK(halfspace_offset(0.0, 2.0) == doctest::Approx(2.0 / 4718592.0).epsilon(1e-12));
}

TEST_CASE("initialize returns a unit vector near the truth with exact accounting") {
    const std::size_t d = 30, s = 3;
    const double eta = 0.1, gap = 1.0 - 2.0 * eta;
    int good = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        OracleBundle b = make_oracle_bundle(500 + seed, DistKind::Gaussian, d, s, eta);
        InitConfig cfg;
        cfg.m = static_cast<int>(std::ceil(10.0 * s * std::log(8.0 * d) / (gap * gap)));
        cfg.s_tilde = std::min(d, static_cast<std::size_t>(
                                      std::ceil(4.0 * s / (gap * gap))));
        cfg.eta = eta;
        cfg.s = s;
        cfg.alpha = 0.5 * gap * gap;
        cfg.b = 0.25 * gap * gap;
        cfg.T = static_cast<int>(
            std::ceil(10.0 * s * std::log(static_cast<double>(d)) / std::pow(gap, 4)));
        const InitResult r = initialize(cfg, b);

        CHECK(norm2(r.v0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(norm2(r.w_sharp) == doctest::Approx(1.0).epsilon(1e-9));
        int nnz = 0;
        for (double x : r.w_sharp) nnz += x != 0.0;
        CHECK(nnz <= static_cast<int>(cfg.s_tilde));
        CHECK(r.w_sharp_dot_truth == doctest::Approx(dot(r.w_sharp, b.truth.u)));
        CHECK(r.w_avg_norm > 0.0);
        CHECK(r.labels_stage1 == static_cast<std::uint64_t>(cfg.m));
        CHECK(r.labels_total ==
              static_cast<std::uint64_t>(cfg.m) + static_cast<std::uint64_t>(cfg.T));
        CHECK(r.labels_total == b.stats.label_queries);
        if (angle(r.v0, b.truth.u) <= M_PI / 8.0) ++good;
    }
    CHECK(good >= 4);
}

TEST_CASE("coarse stage alone already correlates with the truth") {
    const std::size_t d = 50, s = 4;
    const double eta = 0.2, gap = 1.0 - 2.0 * eta;
    int good = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        OracleBundle b = make_oracle_bundle(900 + seed, DistKind::Gaussian, d, s, eta);
        const int m =
            static_cast<int>(std::ceil(10.0 * s * std::log(8.0 * d) / (gap * gap)));
        const std::size_t s_tilde = std::min(
            d, static_cast<std::size_t>(std::ceil(4.0 * s / (gap * gap))));
        const Vector w_sharp = coarse_estimate(averaging_direction(b, m), s_tilde);
        // the coarse estimate must at least land in the right half-sphere
        // with a real margin, which is what the halfspace constraint needs
        if (dot(w_sharp, b.truth.u) > 0.2) ++good;
    }
    CHECK(good >= 4);
}

TEST_CASE("initialize works on the other distributions") {
    for (DistKind kind : {DistKind::UniformCube, DistKind::IsotropicLaplace}) {
        OracleBundle b = make_oracle_bundle(77, kind, 20, 2, 0.0);
        InitConfig cfg;
        cfg.m = 400;
        cfg.s_tilde = 8;
        cfg.eta = 0.0;
        cfg.s = 2;
        cfg.alpha = 0.3;
        cfg.b = 0.2;
        cfg.T = 300;
        const InitResult r = initialize(cfg, b);
        CHECK(norm2(r.v0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(angle(r.v0, b.truth.u) < M_PI / 4.0);
    }
}
