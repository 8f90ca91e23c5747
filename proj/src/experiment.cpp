#include "shal/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace shal {

namespace {

using json = nlohmann::json;

// %.17g round-trips doubles exactly and keeps the CSV byte-stable
std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw ConfigError("unknown key in " + where + ": " + key);
        }
    }
}

template <typename T>
std::vector<T> read_axis(const json& obj, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError("missing required axis: " + key);
    const json& v = obj.at(key);
    std::vector<T> out;
    try {
        if (v.is_array()) {
            for (const auto& e : v) out.push_back(e.get<T>());
        } else {
            out.push_back(v.get<T>());  // scalar shorthand for a one-point axis
        }
    } catch (const json::exception& e) {
        throw ConfigError("axis " + key + " has a malformed value: " + e.what());
    }
    if (out.empty()) throw ConfigError("axis " + key + " is empty");
    return out;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Tukey hinge quartiles: medians of the lower/upper halves
std::pair<double, double> quartiles_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 1) return {v[0], v[0]};
    const std::size_t half = n / 2;
    const std::vector<double> lo(v.begin(), v.begin() + half);
    const std::vector<double> hi(v.begin() + (n - half), v.end());
    return {median_of(lo), median_of(hi)};
}

}  // namespace

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "constant") return NoiseKind::Constant;
    if (name == "margin_concentrated") return NoiseKind::MarginConcentrated;
    if (name == "random_field") return NoiseKind::RandomField;
    throw ConfigError("unknown noise kind: " + name);
}

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Constant: return "constant";
        case NoiseKind::MarginConcentrated: return "margin_concentrated";
        case NoiseKind::RandomField: return "random_field";
    }
    throw ConfigError("bad noise kind");
}

Mode mode_from_string(const std::string& name) {
    if (name == "active") return Mode::Active;
    if (name == "passive") return Mode::Passive;
    throw ConfigError("unknown mode: " + name);
}

std::string to_string(Mode mode) {
    return mode == Mode::Active ? "active" : "passive";
}

ExperimentConfig ExperimentConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

ExperimentConfig ExperimentConfig::parse_json(const std::string& text) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(obj,
                        {"profile", "distribution", "noise", "tau", "mode", "delta",
                         "eval_samples", "d", "s", "eta", "epsilon", "seeds",
                         "output_dir", "knobs"},
                        "config");

    ExperimentConfig cfg;
    try {
    if (obj.contains("profile")) cfg.profile = profile_from_string(obj["profile"]);
    if (obj.contains("distribution"))
        cfg.distribution = dist_kind_from_string(obj["distribution"]);
    if (obj.contains("noise")) cfg.noise = noise_kind_from_string(obj["noise"]);
    if (obj.contains("tau")) cfg.tau = obj["tau"].get<double>();
    if (obj.contains("mode")) cfg.mode = mode_from_string(obj["mode"]);
    if (obj.contains("delta")) cfg.delta = obj["delta"].get<double>();
    if (obj.contains("eval_samples")) cfg.eval_samples = obj["eval_samples"].get<int>();
    cfg.d_values = read_axis<std::size_t>(obj, "d");
    cfg.s_values = read_axis<std::size_t>(obj, "s");
    cfg.eta_values = read_axis<double>(obj, "eta");
    cfg.epsilon_values = read_axis<double>(obj, "epsilon");
    cfg.seeds = obj.contains("seeds") ? read_axis<std::uint64_t>(obj, "seeds")
                                      : std::vector<std::uint64_t>{};
    if (obj.contains("output_dir"))
        cfg.output_dir = obj["output_dir"].get<std::string>();

    if (obj.contains("knobs")) {
        const json& k = obj["knobs"];
        reject_unknown_keys(k,
                            {"c1", "c_m", "c_s_tilde", "c_hs", "c_alpha0", "c_b0",
                             "c_T0", "c_alpha", "c_b", "c_T"},
                            "knobs");
        auto get = [&](const char* key, double& slot) {
            if (k.contains(key)) slot = k[key].get<double>();
        };
        get("c1", cfg.knobs.c1);
        get("c_m", cfg.knobs.c_m);
        get("c_s_tilde", cfg.knobs.c_s_tilde);
        get("c_hs", cfg.knobs.c_hs);
        get("c_alpha0", cfg.knobs.c_alpha0);
        get("c_b0", cfg.knobs.c_b0);
        get("c_T0", cfg.knobs.c_T0);
        get("c_alpha", cfg.knobs.c_alpha);
        get("c_b", cfg.knobs.c_b);
        get("c_T", cfg.knobs.c_T);
    }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config value: ") + e.what());
    }

    for (std::size_t d : cfg.d_values) {
        for (std::size_t s : cfg.s_values) {
            if (s < 1 || s > d) {
                throw ConfigError("sweep contains s outside [1, d]");
            }
        }
    }
    for (double eta : cfg.eta_values) {
        if (!(eta >= 0.0 && eta < 0.5)) throw ConfigError("eta must be in [0, 1/2)");
    }
    for (double eps : cfg.epsilon_values) {
        if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("epsilon must be in (0,1)");
    }
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
        throw ConfigError("delta must be in (0,1)");
    return cfg;
}

std::string ExperimentConfig::canonical_json() const {
    json obj;
    obj["profile"] = to_string(profile);
    obj["distribution"] = to_string(distribution);
    obj["noise"] = to_string(noise);
    obj["tau"] = tau;
    obj["mode"] = to_string(mode);
    obj["delta"] = delta;
    obj["eval_samples"] = eval_samples;
    obj["d"] = d_values;
    obj["s"] = s_values;
    obj["eta"] = eta_values;
    obj["epsilon"] = epsilon_values;
    obj["seeds"] = seeds;
    obj["output_dir"] = output_dir.string();
    obj["knobs"] = {{"c1", knobs.c1},
                    {"c_m", knobs.c_m},
                    {"c_s_tilde", knobs.c_s_tilde},
                    {"c_hs", knobs.c_hs},
                    {"c_alpha0", knobs.c_alpha0},
                    {"c_b0", knobs.c_b0},
                    {"c_T0", knobs.c_T0},
                    {"c_alpha", knobs.c_alpha},
                    {"c_b", knobs.c_b},
                    {"c_T", knobs.c_T}};
    return obj.dump(2);
}

std::vector<SweepPoint> enumerate_sweep(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> out;
    for (std::size_t d : cfg.d_values)
        for (std::size_t s : cfg.s_values)
            for (double eta : cfg.eta_values)
                for (double eps : cfg.epsilon_values)
                    for (std::uint64_t seed : cfg.seeds)
                        out.push_back(SweepPoint{d, s, eta, eps, seed});
    return out;
}

int run_experiment(const ExperimentConfig& cfg, int jobs) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);

    const std::vector<SweepPoint> points = enumerate_sweep(cfg);
    std::vector<RunReport> reports(points.size());

    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(points.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            const SweepPoint& pt = points[i];
            LearnerConfig lc;
            lc.epsilon = pt.epsilon;
            lc.delta = cfg.delta;
            lc.eta = pt.eta;
            lc.s = pt.s;
            lc.d = pt.d;
            lc.knobs = cfg.knobs;
            lc.profile = cfg.profile;
            lc.mode = cfg.mode;
            lc.eval_samples = cfg.eval_samples;
            OracleBundle oracles = make_oracle_bundle(pt.seed, cfg.distribution, pt.d,
                                                      pt.s, pt.eta, cfg.noise, cfg.tau);
            reports[i] = learn(lc, oracles);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // results.csv: rows in sweep order x seed order; wall-clock timing goes
    // to the sidecar log so the data file stays byte-deterministic
    std::ofstream csv(cfg.output_dir / kResultsFileName);
    if (!csv) throw DataError("cannot write results.csv");
    csv << "# " << kResultsSchemaId << "\n";
    csv << "seed,d,s,eta,epsilon,labels_total,labels_init,labels_per_phase,"
           "ex_calls,excess_error_mean,excess_error_stderr,final_angle,wall_ms\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const SweepPoint& pt = points[i];
        const RunReport& r = reports[i];
        json phases = r.labels_per_phase;
        csv << pt.seed << ',' << pt.d << ',' << pt.s << ',' << fmt_double(pt.eta)
            << ',' << fmt_double(pt.epsilon) << ',' << r.labels_total << ','
            << r.labels_init << ',' << '"' << phases.dump() << '"' << ','
            << r.ex_calls << ',' << fmt_double(r.excess_error_mean) << ','
            << fmt_double(r.excess_error_stderr) << ',' << fmt_double(r.final_angle)
            << ",\n";
    }
    csv.close();

    std::ofstream log(cfg.output_dir / "run.log", std::ios::app);
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const SweepPoint& pt = points[i];
        const RunReport& r = reports[i];
        log << stamp << " seed=" << pt.seed << " d=" << pt.d << " s=" << pt.s
            << " eta=" << pt.eta << " epsilon=" << pt.epsilon
            << " wall_ms=" << fmt_double(r.wall_ms)
            << (r.completed ? "" : " ABORT: " + r.abort_reason) << "\n";
    }

    // summary: per-sweep-point medians plus the lemma panel
    std::map<std::tuple<std::size_t, std::size_t, double, double>,
             std::vector<std::size_t>>
        groups;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const SweepPoint& pt = points[i];
        groups[{pt.d, pt.s, pt.eta, pt.epsilon}].push_back(i);
    }
    json summary;
    summary["schema"] = "shal-summary-v1";
    summary["config"] = json::parse(cfg.canonical_json());
    summary["points"] = json::array();
    for (const auto& [key, idx] : groups) {
        std::vector<double> labels, excess, angles;
        for (std::size_t i : idx) {
            labels.push_back(static_cast<double>(reports[i].labels_total));
            excess.push_back(reports[i].excess_error_mean);
            angles.push_back(reports[i].final_angle);
        }
        json p;
        p["d"] = std::get<0>(key);
        p["s"] = std::get<1>(key);
        p["eta"] = std::get<2>(key);
        p["epsilon"] = std::get<3>(key);
        p["runs"] = idx.size();
        p["labels_total_median"] = median_of(labels);
        p["excess_error_median"] = median_of(excess);
        p["final_angle_median"] = median_of(angles);
        summary["points"].push_back(p);
    }
    const std::uint64_t panel_seed = cfg.seeds.empty() ? 0 : cfg.seeds.front();
    PanelSizes sizes;
    sizes.deterministic_n = 2000;  // summary panel is a smoke check; the full
    sizes.statistical_n = 20000;   // A6 panel runs in the acceptance suite
    const LemmaPanelReport panel = check_lemma_panel(panel_seed, sizes);
    json panel_json;
    panel_json["seed"] = panel.seed;
    panel_json["all_passed"] = panel.all_passed();
    panel_json["checks"] = json::array();
    for (const LemmaCheck& c : panel.checks) {
        panel_json["checks"].push_back({{"name", c.name},
                                        {"statistical", c.statistical},
                                        {"n", c.n},
                                        {"violations", c.violations},
                                        {"worst_margin", c.worst_margin},
                                        {"passed", c.passed}});
    }
    summary["lemma_panel"] = panel_json;

    std::ofstream sj(cfg.output_dir / "summary.json");
    sj << summary.dump(2) << "\n";

    for (const RunReport& r : reports) {
        if (!r.completed) return 2;
    }
    return 0;
}

std::filesystem::path emit_label_complexity_table(
    const std::filesystem::path& results_dir) {
    namespace fs = std::filesystem;
    const fs::path csv_path = results_dir / kResultsFileName;
    std::ifstream in(csv_path);
    if (!in) throw DataError("missing results file: " + csv_path.string());

    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
        throw DataError("results file lacks schema line");
    }
    if (line.substr(2) != kResultsSchemaId) {
        throw DataError("unsupported results schema: " + line.substr(2));
    }
    if (!std::getline(in, line) || line.rfind("seed,", 0) != 0) {
        throw DataError("results file lacks column header");
    }

    // split one CSV line honoring double-quoted cells
    auto split = [](const std::string& row) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char c : row) {
            if (c == '"') {
                quoted = !quoted;
            } else if (c == ',' && !quoted) {
                cells.push_back(std::move(cell));
                cell.clear();
            } else {
                cell.push_back(c);
            }
        }
        cells.push_back(std::move(cell));
        return cells;
    };

    std::map<std::tuple<std::size_t, std::size_t, double, double>,
             std::vector<double>>
        groups;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line);
        if (cells.size() < 13) throw DataError("corrupt results row: " + line);
        try {
            groups[{std::stoull(cells[1]), std::stoull(cells[2]), std::stod(cells[3]),
                    std::stod(cells[4])}]
                .push_back(std::stod(cells[5]));
        } catch (const std::exception&) {
            throw DataError("corrupt results row: " + line);
        }
    }

    const fs::path out_path = results_dir / "label_complexity.csv";
    std::ofstream out(out_path);
    out << "# shal-label-complexity-v1\n";
    out << "d,s,eta,epsilon,runs,labels_median,labels_q1,labels_q3\n";
    for (const auto& [key, labels] : groups) {
        const auto [q1, q3] = quartiles_of(labels);
        out << std::get<0>(key) << ',' << std::get<1>(key) << ','
            << fmt_double(std::get<2>(key)) << ',' << fmt_double(std::get<3>(key))
            << ',' << labels.size() << ',' << fmt_double(median_of(labels)) << ','
            << fmt_double(q1) << ',' << fmt_double(q3) << "\n";
    }
    return out_path;
}

}  // namespace shal
