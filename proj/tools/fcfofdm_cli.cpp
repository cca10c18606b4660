#include <CLI11.hpp>

#include <cstdlib>
#include <string>

#include "fcf/scenario.hpp"

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("FCFOFDM_OUT_DIR")) return env;
    return ".";
}

void add_common(CLI::App* cmd, fcf::RunOptions& opts, std::uint64_t& seed, bool& seed_set,
                int& max_iters, bool& iters_set) {
    cmd->add_option("--out-dir", opts.out_dir, "Artifact output directory");
    cmd->add_option("--jobs", opts.jobs, "Concurrent sweep points")->check(CLI::PositiveNumber);
    auto* s = cmd->add_option("--seed", seed, "Override the scenario seeds");
    auto* i = cmd->add_option("--max-iters", max_iters, "Override the optimizer outer iterations");
    cmd->callback([&opts, s, i, &seed, &seed_set, &max_iters, &iters_set] {
        seed_set = s->count() > 0;
        iters_set = i->count() > 0;
        (void)opts;
        (void)seed;
        (void)max_iters;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fast-convolution filtered-OFDM scenario runner"};
    app.require_subcommand(1);

    fcf::RunOptions opts;
    opts.out_dir = default_out_dir();
    std::uint64_t seed = 0;
    bool seed_set = false;
    int max_iters = 0;
    bool iters_set = false;
    std::string scenario_path;
    std::string window_file;

    auto* run = app.add_subcommand("run", "Execute a scenario and write its artifacts");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    add_common(run, opts, seed, seed_set, max_iters, iters_set);

    auto* sweep = app.add_subcommand("sweep", "Run the scenario's sweep axis");
    sweep->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    add_common(sweep, opts, seed, seed_set, max_iters, iters_set);

    auto* counts = app.add_subcommand("counts", "Emit operation-count tables for the scenario");
    counts->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    add_common(counts, opts, seed, seed_set, max_iters, iters_set);

    auto* windows = app.add_subcommand("windows", "Window file import/export");
    windows->require_subcommand(1);
    auto* wexport = windows->add_subcommand("export", "Write the scenario's window set");
    wexport->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    wexport->add_option("-o,--output", window_file, "Window file to write")->required();
    add_common(wexport, opts, seed, seed_set, max_iters, iters_set);
    auto* wimport = windows->add_subcommand("import", "Validate a window file against a scenario");
    wimport->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    wimport->add_option("file", window_file, "Window file to read")->required();
    add_common(wimport, opts, seed, seed_set, max_iters, iters_set);

    CLI11_PARSE(app, argc, argv);

    if (seed_set) opts.seed = seed;
    if (iters_set) opts.max_iters = max_iters;

    if (run->parsed()) return fcf::run_scenario(scenario_path, opts);
    if (sweep->parsed()) return fcf::sweep_scenario(scenario_path, opts);
    if (counts->parsed()) return fcf::counts_scenario(scenario_path, opts);
    if (windows->parsed()) {
        if (wexport->parsed()) return fcf::export_windows(scenario_path, window_file, opts);
        if (wimport->parsed()) return fcf::import_windows(scenario_path, window_file, opts);
    }
    return 1;
}
