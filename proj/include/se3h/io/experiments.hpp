#pragma once

// Drivers for the three experiments: translation test, crossing-fiber deconvolution, Hough toy.
// Shared by the CLI and the acceptance checks.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "se3h/core/parallel.hpp"
#include "se3h/deconvolution/phantom.hpp"
#include "se3h/deconvolution/solver.hpp"
#include "se3h/evolution/evolution.hpp"
#include "se3h/hough/hough.hpp"
#include "se3h/maxima/directions.hpp"
#include "se3h/maxima/score.hpp"

namespace se3h {

// ---- translation ----

struct TranslationConfig {
    int L = 8;
    double dt = 0.05;
    int steps = 150;
    double diffusion = 0.0;  // weight of T0^2
    int grid = 32;
    int sample_dirs = 512;
};

struct TranslationResult {
    std::vector<double> max_phi, f0, reference;  // f0 and reference in units of the pulse height
    int peak_z = 0;          // argmax of max_phi
    double start_z = 0.0;
    double amplitude = 0.0;  // max - min of the f0 profile
    double deviation = 0.0;  // max |f0 - reference|
};

inline TranslationResult run_translation(const TranslationConfig& c) {
    require(c.grid >= 3 && c.L >= 0 && c.steps >= 0, "translation: invalid configuration");
    const GridSpec g{{c.grid, c.grid, c.grid}, 1.0};
    const double mid = double(c.grid / 2);
    const SphericalField f0 = gaussian_delta_field(g, c.L, Vec3(mid, mid, mid), Vec3::UnitZ());
    GeneratorSpec gen{{{"T0", 1.0}}, {}};
    if (c.diffusion != 0.0) gen.terms.push_back({"T0_sq", c.diffusion});
    const SphericalField f = euler_integrate(f0, EvolutionConfig{c.dt, c.steps, gen, 0}).final_field;
    const TranslationProfile p = translation_profile(f, electrostatic_directions(c.sample_dirs, 300, 1), c.grid / 2,
                                                     c.grid / 2);
    TranslationResult r;
    r.start_z = mid;
    r.max_phi = p.max_phi;
    // a band-limited delta has f^0 = 2 pi
    for (double v : p.f0) r.f0.push_back(v / (2.0 * kPi));
    r.reference = reference_advection_1d(c.grid, mid, c.dt, c.steps);
    r.peak_z = int(std::max_element(r.max_phi.begin(), r.max_phi.end()) - r.max_phi.begin());
    const auto [lo, hi] = std::minmax_element(r.f0.begin(), r.f0.end());
    r.amplitude = *hi - *lo;
    for (std::size_t z = 0; z < r.f0.size(); ++z) r.deviation = std::max(r.deviation, std::abs(r.f0[z] - r.reference[z]));
    return r;
}

// ---- crossing-fiber deconvolution ----

struct CrossingConfig {
    int nx = 24, ny = 24;
    int gradients = 64;
    int fod_dirs = 512;
    double snr = 50.0;
    double bD = 1.0;
    double thickness = 5.0;
    bool isotropic_background = true;
    SolverConfig solver;
    double match_tol_deg = 10.0;
    double rel_threshold = 0.1;
};

inline void validate(const CrossingConfig& c) {
    require(c.nx >= 3 && c.ny >= 3, "crossing: grid must be at least 3x3");
    require(c.gradients >= 4 && c.fod_dirs >= 4, "crossing: need at least 4 directions");
    require(c.snr > 0.0, "crossing: snr must be positive");
    require(c.rel_threshold >= 0.0 && c.rel_threshold <= 1.0, "crossing: rel_threshold in [0, 1]");
    validate(c.solver);
}

struct CrossingRun {
    ScoreReport score;     // summed over tract voxels
    double x_axis_dev = 0.0;  // mean angle (deg) of the detection closest to tract 1, over tract-1 voxels
    int x_axis_voxels = 0;
};

// Per-repetition seed from the master seed and the sweep position.
inline std::uint64_t rep_seed(std::uint64_t master, int angle_idx, int alpha_idx, int rep) {
    std::seed_seq sq{std::uint32_t(master), std::uint32_t(master >> 32), std::uint32_t(angle_idx),
                     std::uint32_t(alpha_idx), std::uint32_t(rep)};
    std::array<std::uint32_t, 2> w{};
    sq.generate(w.begin(), w.end());
    return (std::uint64_t(w[0]) << 32) | w[1];
}

class CrossingExperiment {
public:
    explicit CrossingExperiment(const CrossingConfig& c)
        : cfg_(c),
          grads_((validate(c), electrostatic_directions(c.gradients, 500, 1))),
          dirs_(electrostatic_directions(c.fod_dirs, 300, 1)),
          resp_(exp_bd_response(c.bD, c.solver.L)) {}

    const DirectionSet& gradients() const { return grads_; }
    const DirectionSet& fod_directions() const { return dirs_; }
    const FiberResponse& response() const { return resp_; }

    PhantomSpec phantom_spec(double angle, double alpha) const {
        PhantomSpec s;
        s.dims = {cfg_.nx, cfg_.ny, 1};
        s.crossing_angle = angle;
        s.alpha = alpha;
        s.bD = cfg_.bD;
        s.thickness = cfg_.thickness;
        s.isotropic_background = cfg_.isotropic_background;
        return s;
    }

    // Noisy phantom; sigma = 1 / snr relative to the unit b = 0 signal.
    Phantom phantom(double angle, double alpha, std::uint64_t seed) const {
        Phantom ph = simulate_crossing(phantom_spec(angle, alpha), grads_);
        std::mt19937_64 rng(seed);
        add_rician(ph.signal, 1.0 / cfg_.snr, rng);
        return ph;
    }

    CrossingRun score(const Phantom& ph, const SphericalField& fod) const {
        std::vector<std::size_t> vox;
        for (std::size_t v = 0; v < ph.grid.voxels(); ++v)
            if (ph.mask.data[v] > 0.0) vox.push_back(v);
        const auto det = detect_maxima_field(fod, dirs_, vox, cfg_.rel_threshold);
        CrossingRun r;
        double dev = 0.0;
        for (std::size_t i = 0; i < vox.size(); ++i) {
            r.score += match_and_score(directions_of(det[i]), ph.truth[vox[i]], cfg_.match_tol_deg);
            const auto& t = ph.truth[vox[i]];
            if (det[i].empty() || std::find(t.begin(), t.end(), ph.tract1) == t.end()) continue;
            double best = kPi;
            for (const auto& d : det[i]) best = std::min(best, axial_angle(d.direction, ph.tract1));
            dev += best * 180.0 / kPi;
            ++r.x_axis_voxels;
        }
        r.score.finalize();
        r.x_axis_dev = r.x_axis_voxels ? dev / r.x_axis_voxels : 0.0;
        return r;
    }

    CrossingRun run(double angle, double alpha, std::uint64_t seed) const {
        const Phantom ph = phantom(angle, alpha, seed);
        const FodResult res = solve_fod(ph.signal, grads_, resp_, ph.mask, cfg_.solver);
        return score(ph, res.fod);
    }

private:
    CrossingConfig cfg_;
    DirectionSet grads_, dirs_;
    FiberResponse resp_;
};

struct SweepCell {
    double angle, alpha;
    ScoreReport total;
    double mean_fscore = 0.0;  // mean of per-repetition f-scores
    double mean_x_axis_dev = 0.0;
};

// Repetitions run in parallel; each writes its own slot so the result is schedule-independent.
inline std::vector<SweepCell> run_sweep(const CrossingExperiment& ex, const std::vector<double>& angles,
                                        const std::vector<double>& alphas, int reps, std::uint64_t seed) {
    require(reps >= 1, "sweep: reps must be >= 1");
    const std::size_t na = angles.size(), nb = alphas.size(), nr = std::size_t(reps);
    std::vector<CrossingRun> runs(na * nb * nr);
    parallel_for(runs.size(), [&](std::size_t i) {
        const std::size_t r = i % nr, b = i / nr % nb, a = i / (nr * nb);
        runs[i] = ex.run(angles[a], alphas[b], rep_seed(seed, int(a), int(b), int(r)));
    });
    std::vector<SweepCell> out;
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b) {
            SweepCell c{angles[a], alphas[b], {}, 0.0, 0.0};
            for (std::size_t r = 0; r < nr; ++r) {
                const CrossingRun& run = runs[(a * nb + b) * nr + r];
                c.total += run.score;
                c.mean_fscore += run.score.fscore / double(nr);
                c.mean_x_axis_dev += run.x_axis_dev / double(nr);
            }
            out.push_back(c);
        }
    return out;
}

// ---- Hough toy ----

struct HoughRun {
    VotingStack stack;
    std::vector<SphereCandidate> centers;
    std::array<int, 3> best_center{};
    double best_rho = 0.0, best_score = 0.0;
};

inline HoughRun run_hough(const Volume<double>& vol, const HoughConfig& cfg) {
    validate(cfg);
    HoughRun r;
    r.stack = hough_transform(init_hough(gradient_field(gaussian_smooth(vol, cfg.sigma)), cfg.L), cfg);
    r.centers = find_centers(r.stack, cfg.min_score, cfg.nms_radius);
    // global maximum over the whole stack
    r.best_score = -std::numeric_limits<double>::infinity();
    const auto& d = vol.grid.dims;
    for (std::size_t k = 0; k < r.stack.maps.size(); ++k) {
        const auto& m = r.stack.maps[k].data;
        const auto it = std::max_element(m.begin(), m.end());
        if (*it > r.best_score) {
            const std::size_t i = std::size_t(it - m.begin());
            r.best_score = *it;
            r.best_rho = r.stack.rho[k];
            r.best_center = {int(i % std::size_t(d[0])), int(i / std::size_t(d[0]) % std::size_t(d[1])),
                             int(i / (std::size_t(d[0]) * std::size_t(d[1])))};
        }
    }
    return r;
}

}  // namespace se3h
