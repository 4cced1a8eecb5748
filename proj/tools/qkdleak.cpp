#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>

#include "qkd/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Certified decoy-state BB84 key-rate bounds under source leakage"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::optional<std::uint64_t> seed;
    bool no_plot = false;
    CLI::App* run = app.add_subcommand("run", "sweep one scenario and write rates.csv");
    run->add_option("--config", config_path, "scenario file")->required();
    run->add_option("--out", out_dir, "output directory");
    std::uint64_t seed_val = 0;
    CLI::Option* seed_opt = run->add_option("--seed", seed_val, "Monte Carlo seed");
    run->add_flag("--no-plot", no_plot, "skip rates.svg");

    std::string path_a, path_b, cmp_out = ".";
    CLI::App* cmp = app.add_subcommand("compare", "run two scenarios on one grid");
    cmp->add_option("--a", path_a, "first scenario file")->required();
    cmp->add_option("--b", path_b, "second scenario file")->required();
    cmp->add_option("--out", cmp_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            qkd::run::RunConfig cfg = qkd::run::RunConfig::from_file(config_path);
            if (seed_opt->count() > 0) cfg.engine.seed = seed_val;
            bool plot = cfg.plot && !no_plot;
            return qkd::run::run_sweep(cfg, out_dir, plot);
        }
        qkd::run::RunConfig a = qkd::run::RunConfig::from_file(path_a);
        qkd::run::RunConfig b = qkd::run::RunConfig::from_file(path_b);
        int rc = qkd::run::run_compare(a, b, cmp_out);
        if (rc == 2) std::cerr << "compare: distance grids differ\n";
        return rc;
    } catch (const qkd::run::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
