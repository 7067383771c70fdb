#include "cubeknot/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cubeknot/io.hpp"

#ifndef CUBEKNOT_VERSION
#define CUBEKNOT_VERSION "dev"
#endif

namespace cubeknot {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::map<std::string, double> kPresetRadius = {
    {"unknot", 0.5}, {"trefoil", 0.3}, {"torus", 0.3}, {"figure8", 0.18}, {"file", 0.25},
};

} // namespace

void RunConfig::validate() const {
    if (preset.empty()) throw InputError("config: preset (or input file) required");
    if (kPresetRadius.find(preset) == kPresetRadius.end())
        throw InputError("config: unknown preset '" + preset + "'");
    if (preset == "file" && input_path.empty()) throw InputError("config: preset 'file' needs a path");
    if (radius < 0) throw InputError("config: radius must be positive");
    if (!(h_max > 0)) throw InputError("config: h_max must be positive");
    if (n_theta < 3) throw InputError("config: n_theta must be >= 3");
    if (scale_policy != "auto" && scale_policy != "fixed")
        throw InputError("config: scale_policy must be auto or fixed");
    if (scale_policy == "fixed" && fixed_m < 1) throw InputError("config: fixed m must be >= 1");
    if (cap < 0) throw InputError("config: cap must be >= 0");
    if (threads < 0) throw InputError("config: threads must be >= 0");
}

double RunConfig::effective_radius() const {
    if (radius > 0) return radius;
    auto it = kPresetRadius.find(preset);
    return it == kPresetRadius.end() ? 0.25 : it->second;
}

KnotPreset RunConfig::knot_preset() const {
    KnotPreset kp;
    kp.name = preset;
    kp.p = p;
    kp.q = q;
    kp.torus_R = torus_R;
    kp.torus_r = torus_r;
    kp.unknot_radius = unknot_radius;
    kp.figure8_scale = figure8_scale;
    kp.path = input_path;
    return kp;
}

ScalePolicy RunConfig::policy() const {
    return scale_policy == "fixed" ? ScalePolicy::fixed(fixed_m) : ScalePolicy::auto_scale();
}

std::string RunConfig::to_key_values() const {
    std::ostringstream out;
    out.precision(17);
    out << "preset = " << preset << "\n";
    out << "input_path = " << input_path << "\n";
    out << "p = " << p << "\n";
    out << "q = " << q << "\n";
    out << "torus_R = " << torus_R << "\n";
    out << "torus_r = " << torus_r << "\n";
    out << "unknot_radius = " << unknot_radius << "\n";
    out << "figure8_scale = " << figure8_scale << "\n";
    out << "radius = " << radius << "\n";
    out << "h_max = " << h_max << "\n";
    out << "n_theta = " << n_theta << "\n";
    out << "scale_policy = " << scale_policy << "\n";
    out << "fixed_m = " << fixed_m << "\n";
    out << "seed = " << seed << "\n";
    out << "cap = " << cap << "\n";
    out << "threads = " << threads << "\n";
    out << "out_dir = " << out_dir << "\n";
    return out.str();
}

RunConfig RunConfig::from_key_values(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw InputError("config line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "preset") c.preset = value;
            else if (key == "input_path") c.input_path = value;
            else if (key == "p") c.p = std::stoi(value);
            else if (key == "q") c.q = std::stoi(value);
            else if (key == "torus_R") c.torus_R = std::stod(value);
            else if (key == "torus_r") c.torus_r = std::stod(value);
            else if (key == "unknot_radius") c.unknot_radius = std::stod(value);
            else if (key == "figure8_scale") c.figure8_scale = std::stod(value);
            else if (key == "radius") c.radius = std::stod(value);
            else if (key == "h_max") c.h_max = std::stod(value);
            else if (key == "n_theta") c.n_theta = std::stoi(value);
            else if (key == "scale_policy") c.scale_policy = value;
            else if (key == "fixed_m") c.fixed_m = std::stoi(value);
            else if (key == "seed") c.seed = std::stoull(value);
            else if (key == "cap") c.cap = std::stoi(value);
            else if (key == "threads") c.threads = std::stoi(value);
            else if (key == "out_dir") c.out_dir = value;
            else throw InputError("config: unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw InputError("config: bad value for '" + key + "'");
        } catch (const std::out_of_range&) {
            throw InputError("config: value out of range for '" + key + "'");
        }
    }
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_key_values(buf.str());
}

namespace {

json summary_json(const InvariantSummary& s) {
    json j;
    j["determinant"] = s.determinant;
    j["raw_crossings"] = s.raw_crossings;
    j["crossings"] = s.crossings;
    j["writhe"] = s.writhe;
    j["gauss"] = s.gauss;
    j["jones"] = s.jones ? json(s.jones->to_string()) : json(nullptr);
    return j;
}

json report_json(const VerifyReport& r) {
    json j;
    j["input"] = summary_json(r.input);
    j["output"] = summary_json(r.output);
    j["determinant_match"] = r.determinant_match;
    j["jones_match"] = r.jones_match ? json(*r.jones_match) : json(nullptr);
    j["pass"] = r.pass;
    return j;
}

} // namespace

std::string RunManifest::to_json(bool include_timings) const {
    json j;
    j["tool"] = {{"name", "cubeknot"}, {"version", version}};
    j["config"] = {
        {"preset", config.preset},
        {"input_path", config.input_path},
        {"p", config.p},
        {"q", config.q},
        {"torus_R", config.torus_R},
        {"torus_r", config.torus_r},
        {"unknot_radius", config.unknot_radius},
        {"figure8_scale", config.figure8_scale},
        {"radius", config.radius},
        {"effective_radius", config.effective_radius()},
        {"h_max", config.h_max},
        {"n_theta", config.n_theta},
        {"scale_policy", config.scale_policy},
        {"fixed_m", config.fixed_m},
        {"seed", config.seed},
        {"cap", config.cap},
        {"out_dir", config.out_dir},
    };
    j["scale"] = {{"chosen_m", chosen_m}, {"retries", retries}};
    json comps = json::array();
    for (const auto& c : components)
        comps.push_back({{"side", c.side}, {"squares", c.squares}, {"chi", c.chi}});
    j["components"] = std::move(comps);
    j["cycle"] = {{"length", cycle_length}, {"warts_discarded", warts_discarded}};
    j["other_boundary_determinant"] = other_boundary_determinant;
    j["verification"] = report_json(report);
    if (include_timings) {
        json t = json::object();
        for (const auto& [stage, ms] : timings_ms) t[stage] = ms;
        j["timings_ms"] = std::move(t);
    }
    return j.dump(2) + "\n";
}

namespace {

class StageClock {
public:
    explicit StageClock(RunManifest& manifest) : manifest_(manifest) {}

    template <typename Fn>
    auto run(const std::string& stage, Fn&& fn) {
        current_ = stage;
        const auto t0 = std::chrono::steady_clock::now();
        auto finish = [&] {
            const auto t1 = std::chrono::steady_clock::now();
            manifest_.timings_ms.emplace_back(stage,
                                              std::chrono::duration<double, std::milli>(t1 - t0).count());
        };
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            finish();
        } else {
            auto out = fn();
            finish();
            return out;
        }
    }

    const std::string& current() const { return current_; }

private:
    RunManifest& manifest_;
    std::string current_ = "setup";
};

} // namespace

CubulateResult run_cubulate(const RunConfig& config, bool write_artifacts) {
    CubulateResult result;
    RunManifest& manifest = result.manifest;
    manifest.config = config;
    manifest.version = CUBEKNOT_VERSION;
    StageClock clock(manifest);

    try {
        config.validate();
        const double r = config.effective_radius();
        const int threads = config.threads;

        const KnotCurve knot = clock.run("make_knot", [&] { return make_knot(config.knot_preset(), config.h_max); });
        const Framing frame = clock.run("rm_frame", [&] { return rm_frame(knot); });
        const TubeSurface tube = clock.run("tube_surface", [&] { return tube_surface(knot, frame, r, config.n_theta); });

        Scale scale = clock.run("choose_scale", [&] { return choose_scale(knot, r, config.policy()); });
        const bool can_retry = config.scale_policy == "auto";

        CubeSet solid;
        std::vector<CubicalSurface> components;
        TubeBoundary boundary;
        for (;;) {
            try {
                solid = clock.run("cubes_meeting", [&] { return cubes_meeting(tube.mesh, scale, threads); });
                components = clock.run("boundary_components", [&] { return boundary_components(solid); });
                clock.run("classify_sides", [&] { classify_sides(components, knot, r); });
                const CubicalSurface& plus = components[components[0].side > 0 ? 0 : 1];

                const SurfacePath path = clock.run("push_to_surface", [&] {
                    return push_to_surface(tube.section, tube.section_normals, plus, scale, config.seed);
                });
                const auto tube_squares = clock.run("face_tube", [&] { return face_tube(path, plus); });
                boundary = clock.run("skeleton_cycle", [&] { return skeleton_cycle(tube_squares, plus, path); });

                if (!cycle_edges_on_cube_boundary(boundary.chosen, solid))
                    throw InvariantError("cycle leaves the boundary of the cube tube", true);
                break;
            } catch (const InvariantError& e) {
                if (!e.retriable || !can_retry || manifest.retries >= 3) throw;
                ++manifest.retries;
                scale.m *= 2;
            }
        }
        manifest.chosen_m = scale.m;
        result.cycle = boundary.chosen;
        manifest.cycle_length = boundary.chosen.size();
        manifest.warts_discarded = boundary.warts_discarded;
        for (const auto& c : components)
            manifest.components.push_back({c.side, c.size(), c.chi});

        VerifyOptions vopts;
        vopts.seed = config.seed;
        vopts.cap = config.cap;
        vopts.threads = threads;
        manifest.report = clock.run("verify_pair", [&] { return verify_pair(knot.samples, boundary.chosen, vopts); });

        // Both boundary cycles of the face tube carry the same knot type;
        // record the other side's determinant as a cross-check.
        manifest.other_boundary_determinant =
            clock.run("other_boundary", [&] { return summarize_invariants(boundary.other, vopts).determinant; });

        if (write_artifacts) {
            clock.run("write_artifacts", [&] {
                fs::create_directories(config.out_dir);
                const fs::path dir(config.out_dir);
                write_cycle_json((dir / "cycle.json").string(), boundary.chosen);
                std::vector<Eigen::Vector3d> cycle_pts;
                for (const auto& v : boundary.chosen.vertices)
                    cycle_pts.push_back(Eigen::Vector3d(v[0], v[1], v[2]) / scale.m);
                write_obj_polyline((dir / "cycle.obj").string(), cycle_pts, true);
                write_obj_mesh((dir / "tube.obj").string(), tube.mesh);
                for (const auto& c : components)
                    write_obj_cells((dir / (c.side > 0 ? "boundary_plus.obj" : "boundary_minus.obj")).string(),
                                    c.squares, scale);
                write_text_atomic((dir / "report.txt").string(), manifest.report.text());
                write_text_atomic((dir / "report.json").string(), report_json(manifest.report).dump(2) + "\n");
                write_text_atomic((dir / "manifest.json").string(), manifest.to_json());
            });
        }

        result.exit_code = manifest.report.pass ? kExitPass : kExitVerifyFail;
        if (!manifest.report.pass) result.error = "invariant verification failed";
        return result;
    } catch (const InputError& e) {
        result.exit_code = kExitInputError;
        result.error = e.what();
        result.failed_stage = clock.current();
        return result;
    } catch (const InvariantError& e) {
        result.exit_code = kExitInvariantError;
        result.error = e.what();
        result.failed_stage = clock.current();
        return result;
    }
}

int run_plane_demo(const PlaneDemoArgs& args, std::string* error) {
    try {
        const Hyperplane p1 = make_plane({args.p1[0], args.p1[1], args.p1[2]}, args.p1[3]);
        const Hyperplane p2 = make_plane({args.p2[0], args.p2[1], args.p2[2]}, args.p2[3]);
        const Scale s{args.m};
        if (args.m < 1) throw InputError("plane-demo: m must be >= 1");
        if (args.window_half < 2) throw InputError("plane-demo: window too small");

        const auto artifacts =
            plane_pair_cycle_artifacts(p1, p2, s, symmetric_window(args.window_half));

        fs::create_directories(args.out_dir);
        const fs::path dir(args.out_dir);
        json j;
        j["m"] = s.m;
        json verts = json::array();
        for (const auto& v : artifacts.path.vertices) verts.push_back({v[0], v[1], v[2]});
        j["vertices"] = std::move(verts);
        j["closed"] = false;
        write_text_atomic((dir / "path.json").string(), j.dump() + "\n");
        write_obj_cells((dir / "e_component.obj").string(), artifacts.e_component, s);
        write_obj_cells((dir / "band.obj").string(), artifacts.band, s);
        write_obj_cells((dir / "path.obj").string(), artifacts.path.edges, s);
        return kExitPass;
    } catch (const InputError& e) {
        if (error) *error = e.what();
        return kExitInputError;
    } catch (const InvariantError& e) {
        if (error) *error = e.what();
        return kExitInvariantError;
    }
}

int run_verify(const std::string& cycle_file, const RunConfig& reference, VerifyReport* report,
               std::string* error) {
    try {
        const LatticeCycle cycle = read_cycle_json(cycle_file);
        reference.validate();
        const KnotCurve knot = make_knot(reference.knot_preset(), reference.h_max);
        VerifyOptions vopts;
        vopts.seed = reference.seed;
        vopts.cap = reference.cap;
        vopts.threads = reference.threads;
        const VerifyReport r = verify_pair(knot.samples, cycle, vopts);
        if (report) *report = r;
        return r.pass ? kExitPass : kExitVerifyFail;
    } catch (const InputError& e) {
        if (error) *error = e.what();
        return kExitInputError;
    } catch (const InvariantError& e) {
        if (error) *error = e.what();
        return kExitInvariantError;
    }
}

} // namespace cubeknot
