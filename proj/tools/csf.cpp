#include "csf/cli.hpp"
#include "csf/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace cli = csf::cli;

int main(int argc, char** argv) {
    CLI::App app{"Discrete curve shortening flow for space curves"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool no_topology = false, dump_chordfield = false, svg = false;
    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON run config")->required();
        sub->add_option("--out", out, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "seed for generated curves");
        sub->add_flag("--no-topology-checks", no_topology, "drop the O(N^2) avoidance monitor");
        sub->add_flag("--dump-chordfield", dump_chordfield, "write the chord field per snapshot");
        sub->add_flag("--svg", svg, "write an SVG of the projected curve per snapshot");
    };

    auto* evolve = app.add_subcommand("evolve", "run one flow (or family) from a config");
    add_run_flags(evolve);

    auto* sweep = app.add_subcommand("sweep", "run a parameter grid concurrently");
    add_run_flags(sweep);
    std::vector<std::string> vary;
    sweep->add_option("--vary", vary, "axis as key=v1,v2,... (samples, seed, flow.<field>, curve.<param>)");

    auto* verify = app.add_subcommand("verify", "run a property suite");
    std::string suite;
    verify->add_option("suite", suite, "suite name")->required();
    verify->add_option("--seed", seed, "offset added to fixture seeds");

    app.add_subcommand("list-generators", "list curve generators and their parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kUsage;
    }

    try {
        cli::EvolveOptions opts;
        opts.no_topology_checks = no_topology;
        opts.svg = svg;
        opts.dump_chordfield = dump_chordfield;
        if (!out.empty()) opts.out = out;
        if (evolve->parsed()) {
            if (evolve->count("--seed")) opts.seed = seed;
            return cli::cmd_evolve(cli::load_config(config), opts, std::cout);
        }
        if (sweep->parsed()) {
            const auto base = cli::load_config(config);
            if (sweep->count("--seed")) opts.seed = seed;
            std::vector<cli::SweepAxis> grid;
            for (const auto& v : vary) grid.push_back(cli::parse_axis(v));
            return cli::cmd_sweep(base, grid, opts, std::cout);
        }
        if (verify->parsed()) {
            const auto& names = csf::verify::suite_names();
            if (std::find(names.begin(), names.end(), suite) == names.end()) {
                std::cerr << "verify: unknown suite '" << suite << "'\n";
                return cli::kUsage;
            }
            return csf::verify::report(csf::verify::run_suite(suite, {seed}), std::cout) ? cli::kOk : cli::kCheckFailed;
        }
        cli::list_generators(std::cout);
        return cli::kOk;
    } catch (const cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kCheckFailed;
    }
}
