#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "manifest.hpp"
#include "se3h/fields/packing.hpp"
#include "se3h/fields/shv_io.hpp"
#include "se3h/io/experiments.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace se3h;
using se3h::cli::RunManifest;

namespace {

enum Exit { ok = 0, io_error = 1, usage_error = 2, config_error = 3, divergence = 4 };

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---- config plumbing ----

bool same_kind(const json& a, const json& b) {
    if (a.is_number() && b.is_number()) return !(a.is_number_integer() && b.is_number_float());
    return a.type() == b.type();
}

// Copies user values over the defaults; unknown keys and type changes are rejected.
void merge_checked(json& base, const json& user, const std::string& where) {
    if (!user.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string key = where.empty() ? it.key() : where + "." + it.key();
        if (!base.contains(it.key())) throw ConfigError("unknown config key '" + key + "'");
        json& dst = base[it.key()];
        if (dst.is_object()) {
            merge_checked(dst, it.value(), key);
        } else if (dst.is_array() && it.value().is_array()) {
            dst = it.value();
        } else if (!same_kind(dst, it.value())) {
            throw ConfigError("config key '" + key + "' has the wrong type");
        } else {
            dst = it.value();
        }
    }
}

json read_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

struct Command {
    std::string name;
    CLI::App* app = nullptr;
    json defaults;
    std::string config_path;
    std::string out = ".";
    std::vector<std::function<void(json&)>> overrides;

    template <class T>
    void flag(const std::string& opt, const std::string& key, const std::string& desc) {
        auto v = std::make_shared<std::optional<T>>();
        app->add_option(opt, *v, desc);
        overrides.push_back([v, key](json& j) {
            if (*v) j[json::json_pointer("/" + key)] = **v;
        });
    }

    json resolve() const {
        json cfg = defaults;
        if (!config_path.empty()) {
            json user = read_json(config_path);
            // a run manifest replays its config snapshot
            if (user.contains("command") && user.contains("config")) {
                if (user["command"] != name)
                    throw ConfigError("manifest is for '" + user["command"].get<std::string>() + "', not '" + name + "'");
                user = user["config"];
            }
            merge_checked(cfg, user, "");
        }
        for (const auto& o : overrides) o(cfg);
        return cfg;
    }
};

std::string num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.12g", v);
    return b;
}

std::string out_path(const Command& c, const std::string& file) {
    fs::create_directories(c.out);
    return (fs::path(c.out) / file).string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    return os;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    try {
        if (s.find(':') != std::string::npos) {
            std::stringstream ss(s);
            std::string a, st, b;
            std::getline(ss, a, ':');
            std::getline(ss, st, ':');
            std::getline(ss, b, ':');
            const double lo = std::stod(a), step = std::stod(st), hi = std::stod(b);
            if (!(step > 0.0) || hi < lo) throw ConfigError("bad range '" + s + "'");
            for (int i = 0; lo + i * step <= hi + 1e-9; ++i) v.push_back(lo + i * step);
        } else {
            std::stringstream ss(s);
            std::string t;
            while (std::getline(ss, t, ','))
                if (!t.empty()) v.push_back(std::stod(t));
        }
    } catch (const std::logic_error&) {
        throw ConfigError("cannot parse list '" + s + "'");
    }
    if (v.empty()) throw ConfigError("empty list '" + s + "'");
    return v;
}

SolverConfig solver_config(const json& j) {
    SolverConfig s;
    s.lambda = j["lambda"];
    s.lambda_mask = j["lambda_mask"];
    s.L = j["L"];
    s.cg_iterations = j["cg_iterations"];
    const std::string m = j["method"];
    if (m == "cr")
        s.method = KrylovMethod::conjugate_residual;
    else if (m == "cg")
        s.method = KrylovMethod::conjugate_gradient;
    else
        throw ConfigError("method must be 'cr' or 'cg'");
    if (j["response"]["model"] != "exp_bd") throw ConfigError("response.model must be 'exp_bd'");
    validate(s);
    return s;
}

json solver_defaults() {
    return {{"lambda", 0.005},
            {"lambda_mask", 1.0},
            {"L", 8},
            {"cg_iterations", 100},
            {"method", "cr"},
            {"response", {{"model", "exp_bd"}, {"bD", 1.0}}}};
}

CrossingConfig crossing_config(const json& j) {
    CrossingConfig c;
    c.nx = j["nx"];
    c.ny = j["ny"];
    c.gradients = j["gradients"];
    c.fod_dirs = j["fod_dirs"];
    c.snr = j["snr"];
    c.bD = j["solver"]["response"]["bD"];
    c.thickness = j["thickness"];
    c.isotropic_background = j["isotropic_background"];
    c.solver = solver_config(j["solver"]);
    c.match_tol_deg = j["match_tol_deg"];
    c.rel_threshold = j["rel_threshold"];
    validate(c);
    return c;
}

json crossing_defaults() {
    return {{"nx", 24},
            {"ny", 24},
            {"gradients", 64},
            {"fod_dirs", 512},
            {"snr", 50.0},
            {"thickness", 5.0},
            {"isotropic_background", true},
            {"match_tol_deg", 10.0},
            {"rel_threshold", 0.1},
            {"solver", solver_defaults()}};
}

void write_gradients(const std::string& path, const DirectionSet& d) {
    auto os = open_out(path);
    os << "index,x,y,z\n";
    for (std::size_t i = 0; i < d.size(); ++i)
        os << i << "," << num(d.directions[i].x()) << "," << num(d.directions[i].y()) << "," << num(d.directions[i].z())
           << "\n";
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

double cell(const std::vector<std::string>& row, std::size_t i, const std::string& path) {
    try {
        return std::stod(row.at(i));
    } catch (const std::exception&) {
        throw IoError(path + ": malformed row");
    }
}

DirectionSet read_gradients(const std::string& path) {
    std::vector<Vec3> v;
    for (const auto& r : read_csv(path)) v.push_back(Vec3(cell(r, 1, path), cell(r, 2, path), cell(r, 3, path)));
    if (v.size() < 4) throw IoError(path + ": need at least 4 gradient directions");
    return make_direction_set(v);
}

// ---- commands ----

int translate_test(const Command& c) {
    const json cfg = c.resolve();
    TranslationConfig t;
    t.L = cfg["L"];
    t.dt = cfg["dt"];
    t.steps = cfg["steps"];
    t.diffusion = cfg["diffusion"];
    t.grid = cfg["grid"];
    t.sample_dirs = cfg["sample_dirs"];
    RunManifest m(c.name, cfg, 0);
    const TranslationResult r = run_translation(t);
    const std::string p = out_path(c, "profile.csv");
    {
        auto os = open_out(p);
        os << "z,max_phi,f0,reference_1d\n";
        for (std::size_t z = 0; z < r.f0.size(); ++z)
            os << z << "," << num(r.max_phi[z]) << "," << num(r.f0[z]) << "," << num(r.reference[z]) << "\n";
    }
    m.output(p);
    m.write(c.out);
    std::cout << "peak z " << r.peak_z << " (start " << r.start_z << ", displacement " << r.start_z - r.peak_z
              << "), f0 amplitude " << num(r.amplitude) << ", max deviation from 1-D reference " << num(r.deviation)
              << "\n";
    return ok;
}

ShellSpec shell_spec(const json& cfg) {
    ShellSpec s;
    const int n = cfg["size"];
    s.dims = {n, n, n};
    const auto ctr = cfg["center"];
    if (!ctr.is_array() || ctr.size() != 3) throw ConfigError("center must be [x, y, z]");
    s.center = Vec3(ctr[0].get<double>(), ctr[1].get<double>(), ctr[2].get<double>());
    s.radius = cfg["radius"];
    s.noise_sigma = cfg["noise_sigma"];
    s.delete_fraction = cfg["delete_fraction"];
    s.solid = cfg["solid"];
    const auto ax = cfg["rotation_axis"];
    if (!ax.is_array() || ax.size() != 3) throw ConfigError("rotation_axis must be [x, y, z]");
    const Vec3 axis(ax[0].get<double>(), ax[1].get<double>(), ax[2].get<double>());
    if (!(axis.norm() > 0)) throw ConfigError("rotation_axis must be non-zero");
    s.rotation = Eigen::AngleAxisd(cfg["rotation_deg"].get<double>() * kPi / 180.0, axis.normalized()).toRotationMatrix();
    if (n < 3 || !(s.radius > 0) || s.noise_sigma < 0 || s.delete_fraction < 0 || s.delete_fraction > 1)
        throw ConfigError("invalid shell parameters");
    return s;
}

int render_toy(const Command& c) {
    const json cfg = c.resolve();
    const ShellSpec s = shell_spec(cfg);
    const std::uint64_t seed = cfg["seed"];
    RunManifest m(c.name, cfg, seed);
    const std::string p = out_path(c, "volume.shv");
    write_shv_file(p, render_shell(s, seed));
    m.output(p);
    m.write(c.out);
    return ok;
}

HoughConfig hough_config(const json& j) {
    HoughConfig h;
    h.L = j["L"];
    h.drho = j["drho"];
    h.rho_max = j["rho_max"];
    const std::string o = j["orientation"];
    if (o == "inward")
        h.orientation = HoughOrientation::inward;
    else if (o == "outward")
        h.orientation = HoughOrientation::outward;
    else
        throw ConfigError("orientation must be 'inward' or 'outward'");
    h.diffusion_eps = j["diffusion_eps"];
    h.sigma = j["sigma"];
    h.snapshot_spacing = j["snapshot_spacing"];
    h.min_score = j["min_score"];
    h.nms_radius = j["nms_radius"];
    validate(h);
    return h;
}

int hough(const Command& c, const std::string& input) {
    const json cfg = c.resolve();
    const HoughConfig h = hough_config(cfg);
    RunManifest m(c.name, cfg, 0);
    m.input(input);
    const HoughRun r = run_hough(read_scalar_volume(input), h);
    const std::string vp = out_path(c, "voting.shv"), dp = out_path(c, "detections.csv");
    {
        auto os = open_out(vp);
        for (const auto& map : r.stack.maps) write_shv(os, map);
    }
    {
        auto os = open_out(dp);
        os << "x,y,z,rho,score\n";
        for (const auto& s : r.centers)
            os << s.center[0] << "," << s.center[1] << "," << s.center[2] << "," << num(s.rho) << "," << num(s.score)
               << "\n";
    }
    m.output(vp);
    m.output(dp);
    m.write(c.out);
    std::cout << "global max at (" << r.best_center[0] << ", " << r.best_center[1] << ", " << r.best_center[2]
              << ") rho " << num(r.best_rho) << "; " << r.centers.size() << " center(s)\n";
    return ok;
}

int phantom(const Command& c) {
    const json cfg = c.resolve();
    const CrossingExperiment ex(crossing_config(cfg));
    const std::uint64_t seed = cfg["seed"];
    RunManifest m(c.name, cfg, seed);
    const Phantom ph = ex.phantom(cfg["crossing_angle"], cfg["alpha"], seed);
    const std::string sp = out_path(c, "signal.shv"), gp = out_path(c, "gradients.csv"), mp = out_path(c, "mask.shv"),
                      tp = out_path(c, "truth.csv");
    {
        // one scalar record per gradient direction
        auto os = open_out(sp);
        for (std::size_t d = 0; d < ph.signal.ndirs; ++d) {
            Volume<double> v(ph.grid);
            std::copy(ph.signal.direction(d).begin(), ph.signal.direction(d).end(), v.data.begin());
            write_shv(os, v);
        }
    }
    write_gradients(gp, ex.gradients());
    write_shv_file(mp, ph.mask);
    {
        auto os = open_out(tp);
        os << "x,y,z,dx,dy,dz\n";
        const auto& d = ph.grid.dims;
        for (int z = 0; z < d[2]; ++z)
            for (int y = 0; y < d[1]; ++y)
                for (int x = 0; x < d[0]; ++x)
                    for (const Vec3& u : ph.truth[ph.grid.index(x, y, z)])
                        os << x << "," << y << "," << z << "," << num(u.x()) << "," << num(u.y()) << "," << num(u.z())
                           << "\n";
    }
    for (const auto& p : {sp, gp, mp, tp}) m.output(p);
    m.write(c.out);
    return ok;
}

int deconvolve(const Command& c, const std::string& signal_path, const std::string& grad_path,
               const std::string& mask_path) {
    const json cfg = c.resolve();
    const SolverConfig s = solver_config(cfg);
    RunManifest m(c.name, cfg, 0);
    const DirectionSet grads = read_gradients(grad_path);
    const auto recs = read_shv_file(signal_path);
    if (recs.size() != grads.size()) throw IoError(signal_path + ": record count differs from gradient count");
    SampledField<double> sig;
    for (std::size_t d = 0; d < recs.size(); ++d) {
        const auto* f = std::get_if<SphericalField>(&recs[d]);
        if (!f || f->L() != 0) throw IoError(signal_path + ": expected scalar records");
        if (d == 0) sig = SampledField<double>(f->grid(), grads.size());
        if (!(f->grid() == sig.grid)) throw IoError(signal_path + ": records differ in grid");
        for (std::size_t v = 0; v < sig.voxels(); ++v) sig.at(d, v) = f->data()[v].real();
    }
    Volume<double> mask(sig.grid, 1.0);
    if (!mask_path.empty()) {
        mask = read_scalar_volume(mask_path);
        if (!(mask.grid == sig.grid)) throw IoError(mask_path + ": grid differs from the signal");
        m.input(mask_path);
    }
    m.input(signal_path);
    m.input(grad_path);
    const FodResult r = solve_fod(sig, grads, exp_bd_response(cfg["response"]["bD"], s.L), mask, s);
    const std::string fp = out_path(c, "fod.shv"), rp = out_path(c, "residuals.csv");
    write_shv_file(fp, pack_real_even(r.fod));
    {
        auto os = open_out(rp);
        os << "iteration,residual\n";
        for (std::size_t k = 0; k < r.residuals.size(); ++k) os << k << "," << num(r.residuals[k]) << "\n";
    }
    m.output(fp);
    m.output(rp);
    m.write(c.out);
    std::cout << "residual " << num(r.residuals.front()) << " -> " << num(r.residuals.back()) << " after "
              << r.residuals.size() - 1 << " iterations\n";
    return ok;
}

int score(const Command& c, const std::string& fod_path, const std::string& truth_path) {
    const json cfg = c.resolve();
    const int ndirs = cfg["fod_dirs"];
    const double rel = cfg["rel_threshold"], tol = cfg["match_tol_deg"];
    if (ndirs < 4 || rel < 0 || rel > 1 || !(tol > 0)) throw ConfigError("invalid scoring parameters");
    RunManifest m(c.name, cfg, 0);
    m.input(fod_path);
    m.input(truth_path);
    const SphericalField fod = read_spherical_field(fod_path);
    std::map<std::size_t, std::vector<Vec3>> truth;
    for (const auto& r : read_csv(truth_path)) {
        const int x = int(cell(r, 0, truth_path)), y = int(cell(r, 1, truth_path)), z = int(cell(r, 2, truth_path));
        if (!fod.grid().contains(x, y, z)) throw IoError(truth_path + ": voxel outside the FOD grid");
        truth[fod.grid().index(x, y, z)].push_back(
            Vec3(cell(r, 3, truth_path), cell(r, 4, truth_path), cell(r, 5, truth_path)).normalized());
    }
    std::vector<std::size_t> vox;
    for (const auto& [v, _] : truth) vox.push_back(v);
    const DirectionSet dirs = electrostatic_directions(ndirs, 300, 1);
    const auto det = detect_maxima_field(fod, dirs, vox, rel);
    const std::string sp = out_path(c, "scores.csv"), dp = out_path(c, "detections.csv");
    auto so = open_out(sp), dout = open_out(dp);
    so << "x,y,z,TP,FP,FN,precision,recall,fscore\n";
    dout << "x,y,z,phi_deg,theta_deg,value\n";
    const auto& d = fod.grid().dims;
    ScoreReport total;
    for (std::size_t i = 0; i < vox.size(); ++i) {
        const std::size_t v = vox[i];
        const int x = int(v % std::size_t(d[0])), y = int(v / std::size_t(d[0]) % std::size_t(d[1])),
                  z = int(v / (std::size_t(d[0]) * std::size_t(d[1])));
        const ScoreReport s = match_and_score(directions_of(det[i]), truth[v], tol);
        total += s;
        so << x << "," << y << "," << z << "," << s.TP << "," << s.FP << "," << s.FN << "," << num(s.precision) << ","
           << num(s.recall) << "," << num(s.fscore) << "\n";
        for (const auto& e : det[i]) {
            // report the upper-hemisphere representative for antipodal FODs
            const Vec3 u = e.direction.z() < 0 ? Vec3(-e.direction) : e.direction;
            dout << x << "," << y << "," << z << "," << num(std::atan2(u.y(), u.x()) * 180 / kPi) << ","
                 << num(std::acos(std::clamp(u.z(), -1.0, 1.0)) * 180 / kPi) << "," << num(e.value) << "\n";
        }
    }
    total.finalize();
    so << "all,,," << total.TP << "," << total.FP << "," << total.FN << "," << num(total.precision) << ","
       << num(total.recall) << "," << num(total.fscore) << "\n";
    so.close();
    dout.close();
    m.output(sp);
    m.output(dp);
    m.write(c.out);
    std::cout << "precision " << num(total.precision) << " recall " << num(total.recall) << " f-score "
              << num(total.fscore) << "\n";
    return ok;
}

int experiment_crossing(const Command& c) {
    const json cfg = c.resolve();
    const CrossingExperiment ex(crossing_config(cfg));
    const std::vector<double> angles = parse_list(cfg["angles"]), alphas = parse_list(cfg["alphas"]);
    for (double a : angles)
        if (!(a > 0 && a <= 90)) throw ConfigError("crossing angles must be in (0, 90]");
    const int reps = cfg["reps"];
    if (reps < 1) throw ConfigError("reps must be >= 1");
    const std::uint64_t seed = cfg["seed"];
    RunManifest m(c.name, cfg, seed);
    const auto cells = run_sweep(ex, angles, alphas, reps, seed);
    const std::string tp = out_path(c, "results.csv");
    {
        auto os = open_out(tp);
        os << "angle,alpha,reps,TP,FP,FN,precision,recall,fscore,mean_fscore,mean_tract1_dev_deg\n";
        for (const auto& s : cells)
            os << num(s.angle) << "," << num(s.alpha) << "," << reps << "," << s.total.TP << "," << s.total.FP << ","
               << s.total.FN << "," << num(s.total.precision) << "," << num(s.total.recall) << ","
               << num(s.total.fscore) << "," << num(s.mean_fscore) << "," << num(s.mean_x_axis_dev) << "\n";
    }
    m.output(tp);
    m.write(c.out);
    for (const auto& s : cells)
        std::cout << "angle " << num(s.angle) << " alpha " << num(s.alpha) << " mean f-score " << num(s.mean_fscore)
                  << "\n";
    return ok;
}

int info(const std::vector<std::string>& files) {
    for (const auto& path : files) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw IoError("cannot open " + path);
        ShvHeader h;
        int k = 0;
        while (read_shv_header(is, h)) {
            std::string flags;
            if (h.flags & shv_flags::even_only) flags += " even_only";
            if (h.flags & shv_flags::real_packed) flags += " real_packed";
            if (h.flags & shv_flags::wigner_full) flags += " wigner_full";
            std::cout << path << " [" << k++ << "] dims " << h.dims[0] << "x" << h.dims[1] << "x" << h.dims[2]
                      << " voxel " << num(h.voxel_size) << " L " << h.L << " flags" << (flags.empty() ? " none" : flags)
                      << " channels " << h.channel_count() << " payload " << h.payload_bytes() << " bytes\n";
            is.seekg(std::streamoff(h.payload_bytes()), std::ios::cur);
            if (!is) throw IoError(path + ": truncated payload");
        }
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spherical-harmonic PDE toolkit on R3 x S2: translation test, crossing-fiber deconvolution, Hough"};
    app.require_subcommand(1);
    app.set_version_flag("--version", se3h::cli::kVersion);

    std::vector<std::unique_ptr<Command>> cmds;
    auto add = [&](const std::string& name, const std::string& desc, json defaults) -> Command& {
        auto c = std::make_unique<Command>();
        c->name = name;
        c->app = app.add_subcommand(name, desc);
        c->defaults = std::move(defaults);
        c->app->add_option("--config", c->config_path, "JSON config (or a run manifest to replay)")->check(CLI::ExistingFile);
        c->app->add_option("--out", c->out, "output directory")->capture_default_str();
        cmds.push_back(std::move(c));
        return *cmds.back();
    };

    Command& tt = add("translate-test", "pure transport of a Gaussian times a delta along z",
                      {{"L", 8}, {"dt", 0.05}, {"steps", 150}, {"diffusion", 0.0}, {"grid", 32}, {"sample_dirs", 512}});
    tt.flag<int>("--L", "L", "band limit");
    tt.flag<double>("--dt", "dt", "time step");
    tt.flag<int>("--steps", "steps", "number of Euler steps");
    tt.flag<double>("--diffusion", "diffusion", "weight of T0^2");
    tt.flag<int>("--grid", "grid", "cube edge in voxels");

    json shell{{"size", 32},          {"center", {16.0, 16.0, 16.0}}, {"radius", 7.0},
               {"noise_sigma", 0.3},  {"delete_fraction", 0.5},        {"solid", false},
               {"rotation_deg", 0.0}, {"rotation_axis", {1.0, 1.0, 0.0}}, {"seed", 1}};
    Command& rt = add("render-toy", "render the noisy half-deleted shell phantom", shell);
    rt.flag<int>("--size", "size", "cube edge in voxels");
    rt.flag<double>("--radius", "radius", "shell radius");
    rt.flag<double>("--noise", "noise_sigma", "Gaussian noise sigma");
    rt.flag<double>("--delete", "delete_fraction", "fraction of surface voxels removed");
    rt.flag<double>("--rotation", "rotation_deg", "rotation about rotation_axis in degrees");
    rt.flag<std::uint64_t>("--seed", "seed", "RNG seed");

    Command& hg = add("hough", "spherical Hough transform of a scalar SHV volume",
                      {{"L", 4}, {"drho", 0.1}, {"rho_max", 10.0}, {"orientation", "inward"}, {"diffusion_eps", 0.1},
                       {"sigma", 1.0}, {"snapshot_spacing", 0.5}, {"min_score", 0.5}, {"nms_radius", 3.0}});
    std::string hough_in;
    hg.app->add_option("input", hough_in, "scalar SHV volume")->required()->check(CLI::ExistingFile);
    hg.flag<int>("--L", "L", "band limit");
    hg.flag<double>("--drho", "drho", "radius step");
    hg.flag<double>("--rho-max", "rho_max", "largest radius");
    hg.flag<std::string>("--orientation", "orientation", "inward or outward");
    hg.flag<double>("--sigma", "sigma", "pre-smoothing sigma");
    hg.flag<double>("--min-score", "min_score", "candidate threshold as a fraction of the stack maximum");

    json ph = crossing_defaults();
    ph["crossing_angle"] = 90.0;
    ph["alpha"] = 0.0;
    ph["seed"] = 1;
    Command& pc = add("phantom", "simulate the two-tract crossing phantom", ph);
    pc.flag<double>("--angle", "crossing_angle", "crossing angle in degrees");
    pc.flag<double>("--alpha", "alpha", "pose angle in degrees");
    pc.flag<double>("--snr", "snr", "signal to noise ratio");
    pc.flag<std::uint64_t>("--seed", "seed", "RNG seed");

    Command& dc = add("deconvolve", "regularized SH deconvolution to an even-order FOD", solver_defaults());
    std::string sig_in, grad_in, mask_in;
    dc.app->add_option("--signal", sig_in, "signal SHV (one scalar record per gradient)")->required()->check(CLI::ExistingFile);
    dc.app->add_option("--gradients", grad_in, "gradient CSV (index,x,y,z)")->required()->check(CLI::ExistingFile);
    dc.app->add_option("--mask", mask_in, "tract mask SHV (default: all ones)")->check(CLI::ExistingFile);
    dc.flag<double>("--lambda", "lambda", "contour regularization weight");
    dc.flag<double>("--lambda-mask", "lambda_mask", "background suppression weight");
    dc.flag<int>("--L", "L", "even band limit");
    dc.flag<int>("--iterations", "cg_iterations", "Krylov iterations");
    dc.flag<std::string>("--method", "method", "cr or cg");
    dc.flag<double>("--bD", "response/bD", "response b-value times diffusivity");

    Command& sc = add("score", "detect FOD maxima and score them against ground truth",
                      {{"fod_dirs", 512}, {"rel_threshold", 0.1}, {"match_tol_deg", 10.0}});
    std::string fod_in, truth_in;
    sc.app->add_option("--fod", fod_in, "FOD SHV")->required()->check(CLI::ExistingFile);
    sc.app->add_option("--truth", truth_in, "ground-truth CSV (x,y,z,dx,dy,dz)")->required()->check(CLI::ExistingFile);
    sc.flag<double>("--threshold", "rel_threshold", "maxima threshold relative to the voxel maximum");

    json ex = crossing_defaults();
    ex["angles"] = "30:5:90";
    ex["alphas"] = "0,15,30,45,60";
    ex["reps"] = 100;
    ex["seed"] = 1;
    Command& ec = add("experiment-crossing", "sweep crossing angles and poses, report f-scores", ex);
    ec.flag<std::string>("--angles", "angles", "lo:step:hi or comma list, degrees");
    ec.flag<std::string>("--alphas", "alphas", "comma list or range, degrees");
    ec.flag<int>("--reps", "reps", "repetitions per cell");
    ec.flag<double>("--snr", "snr", "signal to noise ratio");
    ec.flag<std::uint64_t>("--seed", "seed", "master RNG seed");

    CLI::App* inf = app.add_subcommand("info", "print SHV headers");
    std::vector<std::string> info_files;
    inf->add_option("files", info_files, "SHV files")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage_error;
    }

    try {
        if (inf->parsed()) return info(info_files);
        if (tt.app->parsed()) return translate_test(tt);
        if (rt.app->parsed()) return render_toy(rt);
        if (hg.app->parsed()) return hough(hg, hough_in);
        if (pc.app->parsed()) return phantom(pc);
        if (dc.app->parsed()) return deconvolve(dc, sig_in, grad_in, mask_in);
        if (sc.app->parsed()) return score(sc, fod_in, truth_in);
        if (ec.app->parsed()) return experiment_crossing(ec);
    } catch (const DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return divergence;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return io_error;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return io_error;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return io_error;
    }
    return usage_error;
}
