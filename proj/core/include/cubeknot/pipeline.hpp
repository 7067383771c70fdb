#ifndef CUBEKNOT_PIPELINE_HPP
#define CUBEKNOT_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cubeknot/hyperplane.hpp"
#include "cubeknot/invariants.hpp"
#include "cubeknot/knot.hpp"
#include "cubeknot/project.hpp"
#include "cubeknot/voxel.hpp"

namespace cubeknot {

/// Process exit codes: scriptable contract of the CLI.
enum ExitCode : int {
    kExitPass = 0,
    kExitVerifyFail = 1,
    kExitInputError = 2,
    kExitInvariantError = 3,
};

struct RunConfig {
    std::string preset;       // unknot | trefoil | torus | figure8 | file
    std::string input_path;   // polyline file for preset == file
    int p = 2, q = 3;
    double torus_R = 2.0, torus_r = 0.8;
    double unknot_radius = 2.0;
    double figure8_scale = 1.0;
    double radius = 0.0;      // tube radius; 0 picks the preset default
    double h_max = 0.1;
    int n_theta = 24;
    std::string scale_policy = "auto";  // auto | fixed
    int fixed_m = 4;
    std::uint64_t seed = 1;
    int cap = 22;
    int threads = 0;          // 0 = available parallelism
    std::string out_dir = "out";

    void validate() const;
    double effective_radius() const;
    KnotPreset knot_preset() const;
    ScalePolicy policy() const;

    /// Flat "key = value" round trip.
    std::string to_key_values() const;
    static RunConfig from_key_values(const std::string& text);
    static RunConfig from_file(const std::string& path);

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ComponentStats {
    int side = 0;  // -1 inner, +1 outer
    int squares = 0;
    int chi = 0;
};

struct RunManifest {
    RunConfig config;
    int chosen_m = 0;
    int retries = 0;
    std::vector<ComponentStats> components;
    int cycle_length = 0;
    int warts_discarded = 0;
    std::uint64_t other_boundary_determinant = 0;
    VerifyReport report;
    std::vector<std::pair<std::string, double>> timings_ms;
    std::string version;

    /// Timings vary run to run; the golden/determinism comparisons drop
    /// them.
    std::string to_json(bool include_timings = true) const;
};

struct CubulateResult {
    int exit_code = kExitInvariantError;
    std::string error;        // empty on success
    std::string failed_stage; // named stage on failure
    RunManifest manifest;
    LatticeCycle cycle;
};

/// The full construction: knot -> frame -> tube -> scale -> cube tube ->
/// boundary components -> side labels -> surface path -> face tube ->
/// skeleton cycle -> invariant verification. Retriable scale failures double
/// m up to 3 times under the auto policy. Artifacts (cycle JSON/OBJ, tube
/// and boundary OBJ, manifest, report) land in config.out_dir.
CubulateResult run_cubulate(const RunConfig& config, bool write_artifacts = true);

struct PlaneDemoArgs {
    std::array<double, 4> p1{0, 0, 1, 0.5};  // nx ny nz offset
    std::array<double, 4> p2{1, 0, 0, 0.5};
    int m = 1;
    int window_half = 8;
    std::string out_dir = "out";
};

/// Lemma demo: writes path.json plus OBJ exports of E and the band B.
int run_plane_demo(const PlaneDemoArgs& args, std::string* error = nullptr);

/// Re-runs the invariant comparison of a saved cycle against a reference
/// preset. Returns an exit code; fills report when it got that far.
int run_verify(const std::string& cycle_file, const RunConfig& reference, VerifyReport* report,
               std::string* error = nullptr);

} // namespace cubeknot

#endif
