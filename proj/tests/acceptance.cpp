// Acceptance suite: every criterion prints exactly one "A<n>: PASS|FAIL" line.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>

#include "shal/experiment.hpp"

using namespace shal;

namespace {

void verdict(int criterion, bool ok) {
    std::printf("A%d: %s\n", criterion, ok ? "PASS" : "FAIL");
    std::fflush(stdout);
}

// run f(0..n-1) on a worker pool
template <typename F>
void parallel_for(int n, F&& f) {
    const int workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), n));
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            f(i);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
}

RunReport run_one(std::uint64_t seed, std::size_t d, std::size_t s, double eta,
                  double epsilon, Mode mode = Mode::Active, int eval_samples = 100000) {
    LearnerConfig cfg;
    cfg.epsilon = epsilon;
    cfg.eta = eta;
    cfg.s = s;
    cfg.d = d;
    cfg.mode = mode;
    cfg.eval_samples = eval_samples;
    OracleBundle oracles = make_oracle_bundle(seed, DistKind::Gaussian, d, s, eta);
    return learn(cfg, oracles);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Vector gaussian_vector(std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    Vector v(d);
    for (auto& x : v) x = n(rng);
    return v;
}

// shared across criteria (runs are expensive)
std::vector<RunReport> g_a1_runs;                  // d=50 s=5 eta=0 eps=0.05
std::vector<double> g_a4_labels_d50;               // eta=0.2 eps=0.1 labels

}  // namespace

TEST_CASE("A1 end-to-end accuracy, noiseless") {
    const int n_seeds = 10;
    g_a1_runs.resize(n_seeds);
    parallel_for(n_seeds, [&](int i) {
        g_a1_runs[i] = run_one(100 + i, 50, 5, 0.0, 0.05);
    });
    int accurate = 0;
    bool all_fast = true, all_completed = true;
    for (const RunReport& r : g_a1_runs) {
        all_completed = all_completed && r.completed;
        accurate += r.completed && r.excess_error_mean <= 0.05;
        all_fast = all_fast && r.wall_ms < 60000.0;
    }
    const bool ok = all_completed && accurate >= 8 && all_fast;
    CHECK(all_completed);
    CHECK(accurate >= 8);
    CHECK(all_fast);
    verdict(1, ok);
}

TEST_CASE("A2 angle halving across phases") {
    std::vector<double> ratios;
    for (const RunReport& r : g_a1_runs) {
        if (!r.completed) continue;
        for (int k = 1; k <= 4 && k < static_cast<int>(r.phase_angles.size()); ++k) {
            if (r.phase_angles[k - 1] > 0.0) {
                ratios.push_back(r.phase_angles[k] / r.phase_angles[k - 1]);
            }
        }
    }
    const bool ok = !ratios.empty() && median_of(ratios) <= 0.75;
    REQUIRE(!ratios.empty());
    CHECK(median_of(ratios) <= 0.75);
    verdict(2, ok);
}

TEST_CASE("A3 gradient-expectation inequality") {
    const std::size_t d = 20, s = 5;
    const double b = 0.1;
    const int n = 100000;
    const double etas[3] = {0.0, 0.2, 0.4};
    std::atomic<int> failures{0};
    parallel_for(60, [&](int task) {
        const double eta = etas[task / 20];
        const int rep = task % 20;
        OracleBundle ob =
            make_oracle_bundle(3000 + task, DistKind::Gaussian, d, s, eta);
        // unit w at an angle theta in [0.1, pi/2] from u
        std::mt19937_64 rng = split_rng(4000 + task, 0);
        std::uniform_real_distribution<double> theta_dist(0.1, M_PI / 2.0);
        const double theta = theta_dist(rng);
        Vector perp = gaussian_vector(d, rng);
        axpy(-dot(perp, ob.truth.u), ob.truth.u, perp);
        Vector w = scale(ob.truth.u, std::cos(theta));
        axpy(std::sin(theta), normalize(perp), w);

        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < n; ++i) {
            LabeledExample ex = sample_band(ob.dist, ob.truth, ob.noise, w, b, ob.stats);
            const double val = -dot(ob.truth.u, noise_aware_gradient(ex.x, ex.y, w, eta));
            sum += val;
            sumsq += val * val;
        }
        const double mean = sum / n;
        const double se =
            std::sqrt(std::max(0.0, (sumsq - n * mean * mean) / (n - 1)) / n);
        const McValue f = estimate_f_ub(w, ob.truth.u, b, ob.dist, n);
        const double rhs =
            (1.0 - 2.0 * eta) * f.estimate - 3.0 * (se + (1.0 - 2.0 * eta) * f.stderr);
        if (!(mean >= rhs)) ++failures;
        (void)rep;
    });
    const bool ok = failures.load() == 0;
    CHECK(failures.load() == 0);
    verdict(3, ok);
}

TEST_CASE("A4 polylogarithmic dimension scaling") {
    const std::size_t dims[3] = {50, 200, 800};
    std::vector<std::vector<double>> labels(3);
    for (auto& v : labels) v.resize(10);
    parallel_for(30, [&](int task) {
        const std::size_t d = dims[task / 10];
        const int seed = task % 10;
        const RunReport r = run_one(500 + seed, d, 5, 0.2, 0.1, Mode::Active, 0);
        labels[task / 10][seed] =
            r.completed ? static_cast<double>(r.labels_total) : 1e300;
    });
    g_a4_labels_d50 = labels[0];
    const double med50 = median_of(labels[0]);
    const double med800 = median_of(labels[2]);
    const double ratio = med800 / med50;
    const bool ok = med50 > 0.0 && med800 < 1e290 && ratio <= 4.0;
    CHECK(med800 < 1e290);  // all d=800 runs completed
    CHECK(ratio <= 4.0);
    std::printf("A4 detail: median labels d=50: %.0f, d=200: %.0f, d=800: %.0f "
                "(ratio %.2f)\n",
                med50, median_of(labels[1]), med800, ratio);
    verdict(4, ok);
}

TEST_CASE("A5 high-noise tolerance and label monotonicity") {
    std::vector<RunReport> noisy(10);
    parallel_for(10, [&](int i) { noisy[i] = run_one(600 + i, 50, 5, 0.4, 0.1); });
    int accurate = 0;
    std::vector<double> labels04;
    for (const RunReport& r : noisy) {
        accurate += r.completed && r.excess_error_mean <= 0.1;
        labels04.push_back(r.completed ? static_cast<double>(r.labels_total) : 1e300);
    }

    std::vector<double> labels0(10);
    parallel_for(10, [&](int i) {
        labels0[i] = static_cast<double>(
            run_one(500 + i, 50, 5, 0.0, 0.1, Mode::Active, 0).labels_total);
    });
    REQUIRE(!g_a4_labels_d50.empty());  // eta = 0.2 medians come from A4
    const double m0 = median_of(labels0);
    const double m2 = median_of(g_a4_labels_d50);
    const double m4 = median_of(labels04);
    const bool monotone = m0 < m2 && m2 < m4;
    const bool ok = accurate >= 7 && monotone && m4 < 1e290;
    CHECK(accurate >= 7);
    CHECK(monotone);
    std::printf("A5 detail: %d/10 accurate; median labels eta=0: %.0f, 0.2: %.0f, "
                "0.4: %.0f\n",
                accurate, m0, m2, m4);
    verdict(5, ok);
}

TEST_CASE("A6 deterministic lemma panel") {
    PanelSizes sizes;
    sizes.deterministic_n = 100000;
    sizes.statistical_n = 20000;
    const LemmaPanelReport report = check_lemma_panel(2026, sizes);
    bool ok = true;
    for (const LemmaCheck& c : report.checks) {
        if (c.statistical) continue;
        if (c.violations != 0) {
            std::printf("A6 detail: %s had %d violations (worst %.3g)\n",
                        c.name.c_str(), c.violations, c.worst_margin);
            ok = false;
        }
        CHECK(c.violations == 0);
    }
    verdict(6, ok);
}

TEST_CASE("A7 mirror machinery") {
    bool ok = true;
    std::mt19937_64 rng(77007);

    // gradient-map roundtrips
    for (std::size_t d : {2u, 10u, 1000u}) {
        const PNormParams pp = PNormParams::from_dimension(d);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const Vector u = gaussian_vector(d, rng);
            const Vector back = pnorm_grad_inverse(pnorm_grad(u, pp), pp);
            worst = std::max(worst, norm2(sub(back, u)) / (1.0 + norm2(u)));
        }
        if (worst > 1e-9) ok = false;
        CHECK(worst <= 1e-9);
    }

    // Bregman strong convexity
    {
        const std::size_t d = 50;
        const Regularizer reg{Vector(d, 0.0), PNormParams::from_dimension(d)};
        int bad = 0;
        for (int i = 0; i < 10000; ++i) {
            const Vector a = gaussian_vector(d, rng);
            const Vector b = gaussian_vector(d, rng);
            const double np = norm_p(sub(a, b), reg.params.p);
            if (bregman(reg, a, b) < 0.5 * np * np - 1e-9 * (1.0 + 0.5 * np * np)) ++bad;
        }
        if (bad != 0) ok = false;
        CHECK(bad == 0);
    }

    // Bregman projection first-order optimality residual on random (K, z)
    {
        const std::size_t d = 30;
        const Regularizer reg{Vector(d, 0.0), PNormParams::from_dimension(d)};
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            FeasibleSet K = [&]() {
                switch (i % 3) {
                    case 0: return FeasibleSet::unit_l2_ball(d);
                    case 1:
                        return FeasibleSet::refine_set(normalize(gaussian_vector(d, rng)),
                                                       0.2 + 0.3 * (i % 5));
                    default: {
                        const Vector n = normalize(gaussian_vector(d, rng));
                        std::size_t j = 0;
                        for (std::size_t k = 1; k < d; ++k)
                            if (std::abs(n[k]) > std::abs(n[j])) j = k;
                        Vector witness(d, 0.0);
                        witness[j] = n[j] > 0 ? 0.5 : -0.5;
                        return FeasibleSet({L2Ball{{}, 1.0}, L1Ball{2.0},
                                            Halfspace{n, 1e-6}},
                                           witness);
                    }
                }
            }();
            const Vector z = gaussian_vector(d, rng, 1.5);
            const Vector w = bregman_project(reg, K, z);
            // fixed point test: w == P_K(w - (grad Phi(w) - grad Phi(z)))
            Vector inner = sub(reg.grad(w), reg.grad(z));
            Vector probe = sub(w, inner);
            const double res = norm2(sub(w, K.project_euclidean(probe)));
            worst = std::max(worst, res);
        }
        if (worst > 1e-6) ok = false;
        CHECK(worst <= 1e-6);
    }

    // p = 2 projection matches the Euclidean oracle
    {
        const std::size_t d = 30;
        const Regularizer e{Vector(d, 0.0), PNormParams::euclidean()};
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            FeasibleSet K = i % 2 == 0
                                ? FeasibleSet::unit_l2_ball(d)
                                : FeasibleSet::refine_set(
                                      normalize(gaussian_vector(d, rng)), 0.4);
            const Vector z = gaussian_vector(d, rng, 1.5);
            worst = std::max(
                worst, norm2(sub(bregman_project(e, K, z), K.project_euclidean(z))));
        }
        if (worst > 1e-8) ok = false;
        CHECK(worst <= 1e-8);
    }

    verdict(7, ok);
}

TEST_CASE("A8 band-conditioned disagreement structure") {
    const double thetas[3] = {0.4, 0.8, 1.2};
    const double b = 0.01;
    const int n = 100000;
    const double floor_const = 81.0 * 2097152.0;  // 3^4 * 2^21
    std::vector<std::vector<double>> est(3, std::vector<double>(10));
    std::atomic<int> bound_failures{0};
    parallel_for(30, [&](int task) {
        const int ti = task / 10;
        const int seed = task % 10;
        UnlabeledDistribution dist(DistKind::Gaussian, 2,
                                   split_rng(8000 + seed, 40 + ti));
        const Vector u{1.0, 0.0};
        const Vector w{std::cos(thetas[ti]), std::sin(thetas[ti])};
        const McValue f = estimate_f_ub(w, u, b, dist, n);
        est[ti][seed] = f.estimate;
        if (!(f.estimate >= thetas[ti] / floor_const - 3.0 * f.stderr)) ++bound_failures;
    });
    const double m0 = median_of(est[0]), m1 = median_of(est[1]), m2 = median_of(est[2]);
    const bool monotone = m0 < m1 && m1 < m2;
    const bool ok = bound_failures.load() == 0 && monotone;
    CHECK(bound_failures.load() == 0);
    CHECK(monotone);
    verdict(8, ok);
}

TEST_CASE("A9 initialization direction") {
    const std::size_t d = 100, s = 5;
    const double etas[3] = {0.0, 0.2, 0.4};
    std::vector<std::vector<int>> sharp_ok(3, std::vector<int>(10, 0));
    std::vector<std::vector<int>> angle_ok(3, std::vector<int>(10, 0));
    parallel_for(30, [&](int task) {
        const int ei = task / 10;
        const int seed = task % 10;
        const double eta = etas[ei];
        OracleBundle ob = make_oracle_bundle(9000 + task, DistKind::Gaussian, d, s, eta);
        ScheduleKnobs knobs;
        const InitSchedule is = init_schedule(eta, s, d, 0.05, knobs, Profile::Desk);
        InitConfig ic;
        ic.m = static_cast<int>(is.m);
        ic.s_tilde = static_cast<std::size_t>(is.s_tilde);
        ic.eta = eta;
        ic.s = s;
        ic.alpha = is.alpha;
        ic.b = is.b;
        ic.T = static_cast<int>(is.iterations);
        const InitResult r = initialize(ic, ob);
        sharp_ok[ei][seed] =
            r.w_sharp_dot_truth >= (1.0 - 2.0 * eta) / (9.0 * 524288.0);
        angle_ok[ei][seed] = angle(r.v0, ob.truth.u) <= M_PI / 8.0;
    });
    bool ok = true;
    for (int ei = 0; ei < 3; ++ei) {
        const int sharp = std::accumulate(sharp_ok[ei].begin(), sharp_ok[ei].end(), 0);
        const int ang = std::accumulate(angle_ok[ei].begin(), angle_ok[ei].end(), 0);
        std::printf("A9 detail: eta=%.1f w-sharp bound %d/10, angle bound %d/10\n",
                    etas[ei], sharp, ang);
        if (sharp < 9 || ang < 8) ok = false;
        CHECK(sharp >= 9);
        CHECK(ang >= 8);
    }
    verdict(9, ok);
}

TEST_CASE("A10 perceptron degeneracy at zero noise") {
    const std::size_t d = 20, s = 3;
    const int T = 300;
    // two identically seeded worlds consuming the same randomness
    OracleBundle a = make_oracle_bundle(42, DistKind::Gaussian, d, s, 0.0);
    OracleBundle b = make_oracle_bundle(42, DistKind::Gaussian, d, s, 0.0);
    const Vector start = normalize(a.truth.u);
    FeasibleSet Ka = FeasibleSet::refine_set(start, 0.5);
    FeasibleSet Kb = FeasibleSet::refine_set(start, 0.5);
    const PNormParams pp = PNormParams::from_dimension(d);
    OmdState sa{start, 0.05, &Ka, Regularizer{start, pp}, 1};
    OmdState sb{start, 0.05, &Kb, Regularizer{start, pp}, 1};
    double worst = 0.0;
    for (int t = 0; t < T; ++t) {
        const Vector wa = normalize(sa.iterate);
        LabeledExample ea = sample_band(a.dist, a.truth, a.noise, wa, 0.2, a.stats);
        const Vector ga = noise_aware_gradient(ea.x, ea.y, sa.iterate, 0.0);
        sa = omd_step(sa, ga);

        const Vector wb = normalize(sb.iterate);
        LabeledExample eb = sample_band(b.dist, b.truth, b.noise, wb, 0.2, b.stats);
        // explicit perceptron rule: zero on agreement, -y x on a mistake
        const int yhat = sign(dot(sb.iterate, eb.x));
        Vector gb(d, 0.0);
        if (yhat != eb.y) gb = scale(eb.x, -static_cast<double>(eb.y));
        sb = omd_step(sb, gb);

        worst = std::max(worst, norm2(sub(sa.iterate, sb.iterate)));
    }
    const bool ok = worst <= 1e-12 && a.stats.label_queries == b.stats.label_queries;
    CHECK(worst <= 1e-12);
    verdict(10, ok);
}

TEST_CASE("A11 generator sanity") {
    const std::size_t d = 20;
    const int n = 1000000;
    bool ok = true;
    for (DistKind kind :
         {DistKind::Gaussian, DistKind::UniformCube, DistKind::IsotropicLaplace}) {
        UnlabeledDistribution dist(kind, d, split_rng(6001, static_cast<int>(kind)));
        std::mt19937_64 vrng = split_rng(6002, static_cast<int>(kind));
        const Vector v = normalize(gaussian_vector(d, vrng));
        const double ts[3] = {1.0, 2.0, 4.0};
        const double bs[2] = {0.05, 0.2};
        std::int64_t over[3] = {0, 0, 0};
        std::int64_t in_band[2] = {0, 0};
        for (int i = 0; i < n; ++i) {
            const double m = std::abs(dot(v, dist.sample()));
            for (int j = 0; j < 3; ++j) over[j] += m > ts[j];
            for (int j = 0; j < 2; ++j) in_band[j] += m <= bs[j];
        }
        for (int j = 0; j < 3; ++j) {
            const double p = static_cast<double>(over[j]) / n;
            const double se = std::sqrt(p * (1.0 - p) / n);
            if (!(p <= std::exp(1.0 - ts[j]) + 3.0 * se)) ok = false;
            CHECK(p <= std::exp(1.0 - ts[j]) + 3.0 * se);
        }
        for (int j = 0; j < 2; ++j) {
            const double p = static_cast<double>(in_band[j]) / n;
            const double se = std::sqrt(p * (1.0 - p) / n);
            if (!(p <= bs[j] + 3.0 * se)) ok = false;
            CHECK(p <= bs[j] + 3.0 * se);
        }
    }
    verdict(11, ok);
}

TEST_CASE("A12 label accounting") {
    bool ok = true;

    // active run: report counters mirror the oracle exactly
    {
        LearnerConfig cfg;
        cfg.epsilon = 0.1;
        cfg.eta = 0.1;
        cfg.s = 3;
        cfg.d = 30;
        cfg.eval_samples = 0;
        OracleBundle oracles = make_oracle_bundle(77, DistKind::Gaussian, 30, 3, 0.1);
        const RunReport r = learn(cfg, oracles);
        const std::uint64_t phases = std::accumulate(
            r.labels_per_phase.begin(), r.labels_per_phase.end(), std::uint64_t{0});
        if (!r.completed || r.labels_total != oracles.stats.label_queries ||
            r.ex_calls != oracles.stats.ex_calls ||
            r.labels_total != r.labels_init + phases) {
            ok = false;
        }
        CHECK(r.labels_total == oracles.stats.label_queries);
        CHECK(r.ex_calls == oracles.stats.ex_calls);
        CHECK(r.labels_total == r.labels_init + phases);
    }

    // paired seeds at epsilon = 0.05: passive labels everything it sees and
    // needs strictly more labels than the active learner
    std::atomic<int> pair_failures{0};
    parallel_for(3, [&](int i) {
        const std::uint64_t seed = 300 + i;
        OracleBundle oa = make_oracle_bundle(seed, DistKind::Gaussian, 30, 3, 0.1);
        OracleBundle op = make_oracle_bundle(seed, DistKind::Gaussian, 30, 3, 0.1);
        LearnerConfig cfg;
        cfg.epsilon = 0.05;
        cfg.eta = 0.1;
        cfg.s = 3;
        cfg.d = 30;
        cfg.eval_samples = 0;
        const RunReport ra = learn(cfg, oa);
        cfg.mode = Mode::Passive;
        const RunReport rp = learn(cfg, op);
        if (!ra.completed || !rp.completed) ++pair_failures;
        if (rp.labels_total != rp.ex_calls) ++pair_failures;
        if (passive_sample_count(rp) != rp.ex_calls) ++pair_failures;
        if (!(ra.labels_total < rp.labels_total)) ++pair_failures;
    });
    if (pair_failures.load() != 0) ok = false;
    CHECK(pair_failures.load() == 0);

    verdict(12, ok);
}
