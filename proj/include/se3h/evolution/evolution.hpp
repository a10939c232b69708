#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "se3h/core/spherical_harmonics.hpp"
#include "se3h/fields/direction_set.hpp"
#include "se3h/fields/projection.hpp"
#include "se3h/operators/generator.hpp"

namespace se3h {

struct EvolutionConfig {
    double dt = 0.05;
    int steps = 150;
    GeneratorSpec generator;
    int snapshot_stride = 0;  // 0: no snapshots
};

struct Snapshot {
    int step;
    SphericalField field;
};

struct EvolutionResult {
    SphericalField final_field;
    std::vector<Snapshot> snapshots;
};

// Forward Euler f <- f + dt A f. on_step (optional) sees the field after each step.
inline EvolutionResult euler_integrate(const SphericalField& f0, const EvolutionConfig& cfg,
                                       const std::function<void(int, const SphericalField&)>& on_step = {}) {
    require(cfg.dt > 0 && std::isfinite(cfg.dt), "euler_integrate: dt must be positive");
    require(cfg.steps >= 0, "euler_integrate: negative step count");
    require(cfg.snapshot_stride >= 0, "euler_integrate: negative snapshot stride");
    const Generator A(cfg.generator);
    EvolutionResult r;
    r.final_field = A.mixes_parity() ? with_parity(f0, Parity::all) : f0;
    if (cfg.snapshot_stride > 0) r.snapshots.push_back({0, r.final_field});
    for (int s = 1; s <= cfg.steps; ++s) {
        if (!A.empty()) axpy(r.final_field, cfg.dt, A.apply(r.final_field));
        if (!all_finite(r.final_field))
            throw DivergenceError("euler_integrate: non-finite coefficients at step " + std::to_string(s), s);
        if (cfg.snapshot_stride > 0 && s % cfg.snapshot_stride == 0) r.snapshots.push_back({s, r.final_field});
        if (on_step) on_step(s, r.final_field);
    }
    return r;
}

// Gaussian pulse exp(-|r - c|^2 / 2) times the band-limited delta at direction v.
inline SphericalField gaussian_delta_field(const GridSpec& g, int L, const Vec3& center, const Vec3& v) {
    SphericalField f(g, L, Parity::all, true);
    const std::vector<cplx> y = sh_all(L, v.normalized());
    for (int z = 0; z < g.dims[2]; ++z)
        for (int yy = 0; yy < g.dims[1]; ++yy)
            for (int x = 0; x < g.dims[0]; ++x) {
                const Vec3 r = Vec3(x, yy, z) * g.voxel_size - center;
                const double a = std::exp(-0.5 * r.squaredNorm());
                const std::size_t vox = g.index(x, yy, z);
                f.for_each_channel([&](int j, int n) {
                    f.at(j, n, vox) = a * 2.0 * kPi * std::conj(y[std::size_t(j * j + j + n)]);
                });
            }
    return f;
}

struct TranslationProfile {
    std::vector<double> max_phi;  // max over directions of Re phi
    std::vector<double> f0;       // Re f^0
};

// Profiles along the z line through (x, y).
inline TranslationProfile translation_profile(const SphericalField& f, const DirectionSet& dirs, int x, int y) {
    const GridSpec& g = f.grid();
    require(g.contains(x, y, 0), "translation_profile: line outside the grid");
    const Eigen::MatrixXcd A = synthesis_matrix(dirs.directions, f.L(), f.parity());
    TranslationProfile p;
    Eigen::VectorXcd c(A.cols());
    for (int z = 0; z < g.dims[2]; ++z) {
        const std::size_t vox = g.index(x, y, z);
        for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = f.channel_at(std::size_t(k))[vox];
        p.max_phi.push_back((A * c).real().maxCoeff());
        p.f0.push_back(f.at(0, 0, vox).real());
    }
    return p;
}

// 1-D reference: u <- u + dt (u[z+1] - u[z-1]) / 2, zero padded, from exp(-(z - c)^2 / 2).
inline std::vector<double> reference_advection_1d(int n, double center, double dt, int steps) {
    std::vector<double> u(n), d(n);
    for (int z = 0; z < n; ++z) u[z] = std::exp(-0.5 * (z - center) * (z - center));
    for (int s = 0; s < steps; ++s) {
        for (int z = 0; z < n; ++z) d[z] = 0.5 * ((z + 1 < n ? u[z + 1] : 0.0) - (z > 0 ? u[z - 1] : 0.0));
        for (int z = 0; z < n; ++z) u[z] += dt * d[z];
    }
    return u;
}

}  // namespace se3h
