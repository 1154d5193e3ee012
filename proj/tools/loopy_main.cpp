#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "loopy/errors.hpp"
#include "loopy/experiment_harness.hpp"

namespace fs = std::filesystem;

namespace {

struct Flags {
    std::optional<std::uint64_t> seed;
    std::string out;
    std::size_t parallel = 1;
    bool no_plots = false;
};

void apply_seed(loopy::ScenarioConfig& config, const Flags& flags) {
    if (!flags.seed) return;
    config.ring.seed = *flags.seed;
    config.failure.seed = *flags.seed;
}

fs::path run_dir_for(const loopy::ScenarioConfig& config, const Flags& flags) {
    if (!flags.out.empty()) return loopy::resolve_output_dir(flags.out);
    if (!config.output_dir.empty()) return loopy::resolve_output_dir(config.output_dir);
    return loopy::resolve_output_dir(fs::path("runs") / config.name);
}

void print_summary(const loopy::RunRecord& record, const fs::path& dir) {
    std::cout << loopy::format_report(loopy::make_report(record), record.config);
    if (record.projection_failures > 0) {
        std::cout << "projection held previous shape on " << record.projection_failures << " frame(s)\n";
    }
    std::cout << "wrote " << dir.string() << "\n";
}

int run_one(loopy::ScenarioConfig config, const Flags& flags) {
    apply_seed(config, flags);
    const fs::path dir = run_dir_for(config, flags);
    const loopy::RunRecord record = loopy::run_scenario(config);
    loopy::write_run(record, dir, {.plots = !flags.no_plots});
    print_summary(record, dir);
    return 0;
}

int run_sweep(const fs::path& config_dir, const Flags& flags) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(config_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".ini") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());

    std::vector<loopy::ScenarioConfig> configs;
    std::vector<fs::path> dirs;
    const fs::path root = flags.out.empty() ? loopy::resolve_output_dir("runs/sweep") : loopy::resolve_output_dir(flags.out);
    int failures = 0;
    for (const fs::path& p : paths) {
        try {
            loopy::ScenarioConfig config = loopy::load_config(p);
            apply_seed(config, flags);
            configs.push_back(config);
            dirs.push_back(root / p.stem());
        } catch (const loopy::Error& e) {
            std::cerr << "skipping " << p.string() << ": " << e.what() << "\n";
            ++failures;
        }
    }

    const auto results = loopy::sweep(configs, flags.parallel);
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        if (!r.record) {
            std::cout << dirs[i].filename().string() << ": error: " << r.error << "\n";
            ++failures;
            continue;
        }
        loopy::write_run(*r.record, dirs[i], {.plots = !flags.no_plots});
        const auto& last = r.record->summaries.back();
        std::cout << dirs[i].filename().string() << ": lobes " << last.lobe_count << " amplitude "
                  << last.lobe_amplitude << " omega_me " << last.omega_me.mean << " -> " << dirs[i].string() << "\n";
    }
    std::cout << results.size() << " run(s), " << failures << " failure(s)\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-chain morphogen robot simulator"};
    app.require_subcommand(1);
    Flags flags;
    app.add_option("--seed", flags.seed, "Override the morphogen and failure seeds");
    app.add_option("--out", flags.out, "Output directory (relative paths resolve against LOOPY_OUTPUT_ROOT)");
    app.add_option("--parallel", flags.parallel, "Concurrent runs for sweep")->check(CLI::PositiveNumber);
    app.add_flag("--no-plots", flags.no_plots, "Skip SVG plot output");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run one scenario config");
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

    std::string config_dir;
    auto* sweep = app.add_subcommand("sweep", "Run every *.ini in a directory");
    sweep->add_option("config-dir", config_dir, "Config directory")->required()->check(CLI::ExistingDirectory);

    std::string run_dir;
    auto* report = app.add_subcommand("report", "Summarize a completed run directory");
    report->add_option("run-dir", run_dir, "Run directory")->required()->check(CLI::ExistingDirectory);

    std::string scenario;
    auto* demo = app.add_subcommand("demo", "Run a built-in scenario");
    demo->add_option("scenario", scenario, "Scenario name")
        ->required()
        ->check(CLI::IsMember(loopy::builtin_scenario_names()));

    for (auto* sub : {run, sweep, report, demo}) sub->fallthrough();
    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return run_one(loopy::load_config(config_path), flags);
        if (*demo) return run_one(loopy::builtin_scenario(scenario), flags);
        if (*sweep) return run_sweep(config_dir, flags);
        if (*report) {
            std::cout << loopy::report_run(run_dir, {.plots = !flags.no_plots});
            return 0;
        }
    } catch (const loopy::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
