#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shal/experiment.hpp"

namespace py = pybind11;
using namespace shal;

namespace {

py::dict report_to_dict(const RunReport& r) {
    py::dict d;
    d["final_w"] = r.final_w;
    d["phase_angles"] = r.phase_angles;
    d["labels_total"] = r.labels_total;
    d["labels_init"] = r.labels_init;
    d["labels_per_phase"] = r.labels_per_phase;
    d["ex_calls"] = r.ex_calls;
    d["excess_error_mean"] = r.excess_error_mean;
    d["excess_error_stderr"] = r.excess_error_stderr;
    d["final_angle"] = r.final_angle;
    d["mode"] = to_string(r.mode);
    d["completed"] = r.completed;
    d["abort_reason"] = r.abort_reason;
    return d;
}

py::dict learn_py(std::uint64_t seed, std::size_t d, std::size_t s, double eta,
                  double epsilon, const std::string& distribution,
                  const std::string& noise, double tau, const std::string& mode,
                  const std::string& profile, double delta, int eval_samples) {
    LearnerConfig cfg;
    cfg.epsilon = epsilon;
    cfg.delta = delta;
    cfg.eta = eta;
    cfg.s = s;
    cfg.d = d;
    cfg.profile = profile_from_string(profile);
    cfg.mode = mode_from_string(mode);
    cfg.eval_samples = eval_samples;
    OracleBundle oracles = make_oracle_bundle(seed, dist_kind_from_string(distribution),
                                              d, s, eta, noise_kind_from_string(noise),
                                              tau);
    py::dict out = report_to_dict(learn(cfg, oracles));
    out["truth"] = oracles.truth.u;
    return out;
}

}  // namespace

PYBIND11_MODULE(_shal, m) {
    m.doc() = "attribute-efficient active halfspace learning (C++ core)";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    // vector utilities
    m.def("hard_threshold", &hard_threshold, py::arg("v"), py::arg("s"),
          "keep the s largest-magnitude entries, zero the rest");
    m.def("normalize", &normalize, py::arg("v"));
    m.def("angle", &angle, py::arg("a"), py::arg("b"));
    m.def(
        "pnorm_params",
        [](std::size_t d) {
            const PNormParams pp = PNormParams::from_dimension(d);
            return py::make_tuple(pp.p, pp.q);
        },
        py::arg("d"), "the (p, q) conjugate pair used at dimension d");
    m.def(
        "pnorm_grad",
        [](const Vector& u, std::size_t d) {
            return pnorm_grad(u, PNormParams::from_dimension(d));
        },
        py::arg("u"), py::arg("d"));
    m.def(
        "pnorm_grad_inverse",
        [](const Vector& theta, std::size_t d) {
            return pnorm_grad_inverse(theta, PNormParams::from_dimension(d));
        },
        py::arg("theta"), py::arg("d"));

    // monte carlo diagnostics
    m.def(
        "disagreement",
        [](const Vector& w, const Vector& u, const std::string& distribution,
           std::uint64_t seed, int n) {
            UnlabeledDistribution dist(dist_kind_from_string(distribution), w.size(),
                                       split_rng(seed, 0));
            const McEstimate e = disagreement(w, u, dist, n);
            return py::make_tuple(e.mean, e.stderr);
        },
        py::arg("w"), py::arg("u"), py::arg("distribution") = "gaussian",
        py::arg("seed") = 0, py::arg("n") = 100000,
        "monte carlo P(sign<w,x> != sign<u,x>) with standard error");
    m.def(
        "lemma_panel",
        [](std::uint64_t seed, int deterministic_n, int statistical_n) {
            PanelSizes sizes;
            sizes.deterministic_n = deterministic_n;
            sizes.statistical_n = statistical_n;
            const LemmaPanelReport r = check_lemma_panel(seed, sizes);
            return py::make_tuple(r.all_passed(), r.render());
        },
        py::arg("seed") = 0, py::arg("deterministic_n") = 2000,
        py::arg("statistical_n") = 20000,
        "run the inequality panel; returns (all_passed, report_text)");

    // the learner itself
    m.def("learn", &learn_py, py::arg("seed"), py::arg("d"), py::arg("s"),
          py::arg("eta"), py::arg("epsilon"), py::arg("distribution") = "gaussian",
          py::arg("noise") = "constant", py::arg("tau") = 0.5,
          py::arg("mode") = "active", py::arg("profile") = "desk",
          py::arg("delta") = 0.05, py::arg("eval_samples") = 100000,
          "run one full learning episode against a synthetic oracle");

    // experiment harness
    m.def(
        "run_experiment",
        [](const std::string& config_json, int jobs) {
            return run_experiment(ExperimentConfig::parse_json(config_json), jobs);
        },
        py::arg("config_json"), py::arg("jobs") = 1,
        "run a sweep described by a JSON config string; returns the exit code");
    m.def(
        "label_complexity_table",
        [](const std::string& results_dir) {
            return emit_label_complexity_table(results_dir).string();
        },
        py::arg("results_dir"));
}
