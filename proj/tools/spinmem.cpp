// spinmem: batch front-end for the hybrid qubit / bus / spin-ensemble simulator.
//
//   spinmem run <config> [-o dir] [--jobs n]
//   spinmem compare <dirA> <dirB> --tol x
//   spinmem list

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "spinmem/cli/config.hpp"
#include "spinmem/cli/runner.hpp"
#include "spinmem/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Hybrid qubit / bus / NV-ensemble memory simulator"};
    app.set_version_flag("--version", std::string(spinmem::cli::tool_version));
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    unsigned jobs = 1;
    auto* run = app.add_subcommand("run", "run one experiment configuration");
    run->add_option("config", config_path, "YAML experiment configuration")->required();
    run->add_option("-o,--output", out_dir, "output directory")->capture_default_str();
    run->add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber)->capture_default_str();

    std::string dir_a, dir_b;
    double tol = 1e-3;
    auto* cmp = app.add_subcommand("compare", "max-abs difference of two runs per data column");
    cmp->add_option("dirA", dir_a)->required();
    cmp->add_option("dirB", dir_b)->required();
    cmp->add_option("--tol", tol, "pass tolerance")->required();

    auto* list = app.add_subcommand("list", "print the experiment catalog");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto config = spinmem::cli::load_config(config_path);
            const auto manifest = spinmem::cli::run(config, out_dir, jobs);
            for (const auto& f : manifest.outputs) std::cout << out_dir << '/' << f << '\n';
            std::cout << "config " << manifest.config_hash << "  " << manifest.wall_seconds << " s\n";
        } else if (cmp->parsed()) {
            const auto report = spinmem::cli::compare(dir_a, dir_b, tol);
            std::cout << report.text();
            return report.passed() ? 0 : 1;
        } else if (list->parsed()) {
            std::cout << spinmem::cli::list_experiments();
        }
    } catch (const spinmem::Error& e) {
        std::cerr << "spinmem: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "spinmem: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
