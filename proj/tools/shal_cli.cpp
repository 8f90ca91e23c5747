#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "shal/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sparse-halfspace active learning harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string profile_override;
    int jobs = 1;
    auto* run = app.add_subcommand("run", "execute the sweep in a config file");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--profile", profile_override, "override profile: desk|paper");
    run->add_option("--jobs", jobs, "worker pool size")->check(CLI::PositiveNumber);

    std::string results_dir;
    auto* table = app.add_subcommand("table", "pivot results into a label-complexity table");
    table->add_option("dir", results_dir, "results directory")->required();

    std::uint64_t lemma_seed = 0;
    auto* lemmas = app.add_subcommand("lemmas", "run the lemma check panel");
    lemmas->add_option("--seed", lemma_seed, "panel seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            shal::ExperimentConfig cfg = shal::ExperimentConfig::parse_file(config_path);
            if (!profile_override.empty()) {
                cfg.profile = shal::profile_from_string(profile_override);
            }
            return shal::run_experiment(cfg, jobs);
        }
        if (table->parsed()) {
            const auto path = shal::emit_label_complexity_table(results_dir);
            std::cout << path.string() << "\n";
            return 0;
        }
        if (lemmas->parsed()) {
            const shal::LemmaPanelReport report = shal::check_lemma_panel(lemma_seed);
            std::cout << report.render();
            return report.all_passed() ? 0 : 2;
        }
    } catch (const shal::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const shal::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
