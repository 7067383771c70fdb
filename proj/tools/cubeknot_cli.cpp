// Command-line front end: cubulate / plane-demo / verify.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "cubeknot/pipeline.hpp"

using namespace cubeknot;

namespace {

void add_config_flags(CLI::App* cmd, RunConfig& config, std::string& config_file) {
    cmd->add_option("--config", config_file, "flat key = value config file; flags override");
    cmd->add_option("--preset", config.preset, "unknot | trefoil | torus | figure8 | file");
    cmd->add_option("--input", config.input_path, "polyline file (one 'x y z' per line, closed implicitly)");
    cmd->add_option("--p", config.p, "torus knot p");
    cmd->add_option("--q", config.q, "torus knot q");
    cmd->add_option("--torus-R", config.torus_R, "torus major radius");
    cmd->add_option("--torus-r", config.torus_r, "torus minor radius");
    cmd->add_option("--unknot-radius", config.unknot_radius, "unknot radius");
    cmd->add_option("--figure8-scale", config.figure8_scale, "figure-eight scale factor");
    cmd->add_option("-r,--radius", config.radius, "tube radius (0 = preset default)");
    cmd->add_option("--h-max", config.h_max, "max sample gap along the curve");
    cmd->add_option("--n-theta", config.n_theta, "tube cross-section resolution");
    cmd->add_option("--scale", config.scale_policy, "scale policy: auto | fixed");
    cmd->add_option("-m,--fixed-m", config.fixed_m, "subdivision for --scale fixed");
    cmd->add_option("--seed", config.seed, "seed for all randomized steps");
    cmd->add_option("--cap", config.cap, "crossing cap for the state-sum polynomial");
    cmd->add_option("-j,--threads", config.threads, "worker threads (0 = hardware)");
    cmd->add_option("-o,--out", config.out_dir, "output directory");
}

// Re-parse so explicit flags win over the config file.
RunConfig merge_config(const CLI::App* cmd, RunConfig flags_config, const std::string& config_file) {
    if (config_file.empty()) return flags_config;
    RunConfig merged = RunConfig::from_file(config_file);
    auto take = [&](const std::string& flag, auto member) {
        if (cmd->count(flag) > 0) merged.*member = flags_config.*member;
    };
    take("--preset", &RunConfig::preset);
    take("--input", &RunConfig::input_path);
    take("--p", &RunConfig::p);
    take("--q", &RunConfig::q);
    take("--torus-R", &RunConfig::torus_R);
    take("--torus-r", &RunConfig::torus_r);
    take("--unknot-radius", &RunConfig::unknot_radius);
    take("--figure8-scale", &RunConfig::figure8_scale);
    take("--radius", &RunConfig::radius);
    take("--h-max", &RunConfig::h_max);
    take("--n-theta", &RunConfig::n_theta);
    take("--scale", &RunConfig::scale_policy);
    take("--fixed-m", &RunConfig::fixed_m);
    take("--seed", &RunConfig::seed);
    take("--cap", &RunConfig::cap);
    take("--threads", &RunConfig::threads);
    take("--out", &RunConfig::out_dir);
    return merged;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubeknot: deform a smooth knot into a lattice cycle in the 1-skeleton of a cubulation"};
    app.require_subcommand(1);

    RunConfig config;
    std::string config_file;

    auto* cubulate = app.add_subcommand("cubulate", "run the full construction and verify invariants");
    add_config_flags(cubulate, config, config_file);

    PlaneDemoArgs plane;
    auto* plane_demo = app.add_subcommand("plane-demo", "push the line P1 n P2 of an orthogonal plane pair"
                                                        " into the 1-skeleton");
    plane_demo->add_option("--p1", plane.p1, "first plane: nx ny nz offset")->expected(4);
    plane_demo->add_option("--p2", plane.p2, "second plane: nx ny nz offset")->expected(4);
    plane_demo->add_option("-m", plane.m, "subdivision");
    plane_demo->add_option("--window", plane.window_half, "window half-width in cubes");
    plane_demo->add_option("-o,--out", plane.out_dir, "output directory");

    std::string cycle_file;
    auto* verify = app.add_subcommand("verify", "compare a saved cycle against a reference knot");
    add_config_flags(verify, config, config_file);
    verify->add_option("--cycle", cycle_file, "cycle JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (cubulate->parsed()) {
            const RunConfig merged = merge_config(cubulate, config, config_file);
            const CubulateResult result = run_cubulate(merged);
            if (result.exit_code == kExitPass || result.exit_code == kExitVerifyFail) {
                std::cout << result.manifest.report.text();
                std::cout << "m = " << result.manifest.chosen_m
                          << ", retries = " << result.manifest.retries
                          << ", cycle length = " << result.manifest.cycle_length << "\n";
                std::cout << "artifacts in " << merged.out_dir << "\n";
            } else {
                std::cerr << "error [" << result.failed_stage << "]: " << result.error << "\n";
            }
            return result.exit_code;
        }
        if (plane_demo->parsed()) {
            std::string error;
            const int code = run_plane_demo(plane, &error);
            if (code != kExitPass)
                std::cerr << "error: " << error << "\n";
            else
                std::cout << "artifacts in " << plane.out_dir << "\n";
            return code;
        }
        if (verify->parsed()) {
            const RunConfig merged = merge_config(verify, config, config_file);
            VerifyReport report;
            std::string error;
            const int code = run_verify(cycle_file, merged, &report, &error);
            if (code == kExitPass || code == kExitVerifyFail)
                std::cout << report.text();
            else
                std::cerr << "error: " << error << "\n";
            return code;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const InvariantError& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return kExitInvariantError;
    }
    return kExitInputError;
}
