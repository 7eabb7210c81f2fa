// Batch front end: --config picks the experiment, --command the pipeline.
// Exit codes: 0 success, 1 error (bad config / runtime failure), 2 a checked
// paper property failed its tolerance.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "invmet/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"invmet: smooth-to-the-boundary invariant metrics on planar domains"};

    std::string config_path;
    std::string command;
    std::string out_dir;
    uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON experiment config")->required();
    app.add_option("--command", command,
                   "build-metric | invariance-report | layers | geodesic | ball | kernel-check | "
                   "fixed-point | rigidity | curvature | demo-noncompact (default: the config's "
                   "command list)");
    app.add_option("--out", out_dir, "output directory (default: config output_dir)");
    app.add_option("--seed", seed, "seed for randomized sample draws (default 0)");
    CLI11_PARSE(app, argc, argv);

    std::string text;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot read config file " << config_path << '\n';
            return 1;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }

    invmet::ExperimentConfig cfg;
    try {
        cfg = invmet::parse_config(text);
    } catch (const invmet::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    if (out_dir.empty()) out_dir = cfg.output_dir;

    std::vector<std::string> commands;
    if (!command.empty()) {
        commands.push_back(command);
    } else if (!cfg.commands.empty()) {
        commands = cfg.commands;
    } else {
        std::cerr << "error: no --command given and the config lists none\n";
        return 1;
    }

    int exit_code = 0;
    for (const auto& cmd : commands) {
        const auto result = invmet::run_command(cfg, cmd, out_dir, seed);
        if (result.exit_code != 0) {
            std::cerr << cmd << ": "
                      << (result.exit_code == 2 ? "tolerance failure: " : "error: ")
                      << result.message << '\n';
            exit_code = std::max(exit_code, result.exit_code);
        } else {
            std::cout << cmd << ": ok";
            for (const auto& f : result.outputs) std::cout << ' ' << f;
            std::cout << '\n';
        }
    }
    return exit_code;
}
