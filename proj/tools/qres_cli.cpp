// qres: reproduce the resource-comparison experiments from the command line.
//
//   qres task1|task2|task3 [--resource srf|sss|refbit] [--j 1/2]
//   qres sweep [--j-max 10] [--j-step 1/2]
//   qres optimize-refbit [--grid-n 101]
//   qres reproduce-all
//
// Common flags: --format json|csv|text, --out FILE, --seed N, --quad-nodes N.
// QRES_QUAD_NODES sets the quadrature order when --quad-nodes is absent.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qres/cli.hpp"

namespace {

constexpr int kInvalidConfig = 2;

qres::SpinJ parse_spin(const std::string& flag, const std::string& text) {
    try {
        return qres::SpinJ::parse(text);
    } catch (const std::invalid_argument& e) {
        throw qres::cli::ConfigError(flag + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compare shared reference frames, shared singlets and refbits on estimation and "
                 "discrimination tasks"};

    std::string command;
    std::string resource, j, j_max = "10", j_step = "1/2", format = "text", out;
    int grid_n = 101;
    std::uint64_t seed = 0;
    int quad_nodes = 0;

    app.add_option("command", command, "task1, task2, task3, sweep, optimize-refbit or reproduce-all")->required();
    app.add_option("--resource", resource, "srf, sss or refbit (default: every valid resource)");
    app.add_option("--j", j, "singlet spin for sss, e.g. 1/2, 0.5, 3");
    app.add_option("--j-max", j_max, "largest spin in the sweep")->capture_default_str();
    app.add_option("--j-step", j_step, "spin increment in the sweep")->capture_default_str();
    app.add_option("--grid-n", grid_n, "grid points per axis for optimize-refbit")->capture_default_str();
    app.add_option("--format", format, "json, csv or text")->capture_default_str();
    app.add_option("--out", out, "write records to this file instead of stdout");
    app.add_option("--seed", seed, "seed for sampled checks")->capture_default_str();
    auto* nodes_opt = app.add_option("--quad-nodes", quad_nodes, "Gauss-Legendre order (default 512)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalidConfig;
    }

    qres::cli::RunConfig config;
    try {
        const auto cmd = qres::cli::parse_command(command);
        if (!cmd) throw qres::cli::ConfigError("unknown command '" + command + "'");
        config.command = *cmd;
        if (!resource.empty()) {
            config.resource = qres::cli::parse_resource(resource);
            if (!config.resource) throw qres::cli::ConfigError("unknown resource '" + resource + "' (srf, sss, refbit)");
        }
        if (!j.empty()) config.j = parse_spin("--j", j);
        config.j_max = parse_spin("--j-max", j_max);
        config.j_step = parse_spin("--j-step", j_step);
        const auto fmt = qres::cli::parse_format(format);
        if (!fmt) throw qres::cli::ConfigError("unknown format '" + format + "' (json, csv, text)");
        config.format = *fmt;
        config.grid_n = grid_n;
        config.seed = seed;
        if (!out.empty()) config.out = out;

        if (nodes_opt->count() > 0) {
            config.quad_nodes = quad_nodes;
        } else if (const char* env = std::getenv("QRES_QUAD_NODES")) {
            try {
                std::size_t used = 0;
                config.quad_nodes = std::stoi(env, &used);
                if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw qres::cli::ConfigError(std::string("QRES_QUAD_NODES is not an integer: ") + env);
            }
        }
    } catch (const qres::cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidConfig;
    }

    return qres::cli::run(config, std::cout, std::cerr);
}
