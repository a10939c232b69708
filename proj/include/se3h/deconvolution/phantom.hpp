#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "se3h/fields/direction_set.hpp"
#include "se3h/fields/grid.hpp"
#include "se3h/fields/spherical_field.hpp"

namespace se3h {

struct PhantomSpec {
    std::array<int, 3> dims{24, 24, 1};
    double crossing_angle = 90.0;  // degrees, in (0, 90]
    double alpha = 0.0;            // absolute pose, degrees, clockwise from the x axis
    double bD = 1.0;
    double thickness = 5.0;        // tract width in voxels
    // Signal outside the tracts: the sphere average of exp(-bD t^2), i.e. an isotropic FOD.
    bool isotropic_background = true;
};

struct Phantom {
    GridSpec grid;
    SampledField<double> signal;         // on the gradient directions
    Volume<double> mask;                 // 1 on tract voxels
    std::vector<std::vector<Vec3>> truth;  // fiber directions per voxel
    Vec3 tract1, tract2;
};

// Unit in-plane directions of the two tracts. Tract 1 lies along the x axis for alpha = 0;
// both rotate clockwise with alpha; tract 2 is tract 1 turned counter-clockwise by the crossing angle.
inline std::pair<Vec3, Vec3> tract_directions(double crossing_deg, double alpha_deg) {
    const double a = -alpha_deg * kPi / 180.0, b = a + crossing_deg * kPi / 180.0;
    return {Vec3(std::cos(a), std::sin(a), 0.0), Vec3(std::cos(b), std::sin(b), 0.0)};
}

// Mean of exp(-bD (n.u)^2) over the sphere.
inline double isotropic_signal(double bD) {
    // int_0^1 exp(-bD t^2) dt = sqrt(pi / bD) erf(sqrt bD) / 2
    return bD == 0.0 ? 1.0 : 0.5 * std::sqrt(kPi / bD) * std::erf(std::sqrt(bD));
}

// Two straight tracts crossing at the grid center (dims / 2, integer voxel). A voxel belongs to
// a tract when its center is within thickness / 2 of the tract axis in the xy plane.
inline Phantom simulate_crossing(const PhantomSpec& spec, const DirectionSet& gradients) {
    require(spec.crossing_angle > 0.0 && spec.crossing_angle <= 90.0, "phantom: crossing angle must be in (0, 90]");
    require(spec.thickness > 0.0 && spec.bD >= 0.0, "phantom: invalid thickness or bD");
    Phantom ph;
    ph.grid = GridSpec{spec.dims, 1.0};
    validate(ph.grid);
    std::tie(ph.tract1, ph.tract2) = tract_directions(spec.crossing_angle, spec.alpha);
    ph.signal = SampledField<double>(ph.grid, gradients.size());
    ph.mask = Volume<double>(ph.grid);
    ph.truth.assign(ph.grid.voxels(), {});
    const Vec3 c(spec.dims[0] / 2, spec.dims[1] / 2, 0.0);
    const double iso = isotropic_signal(spec.bD);
    for (int z = 0; z < spec.dims[2]; ++z)
        for (int y = 0; y < spec.dims[1]; ++y)
            for (int x = 0; x < spec.dims[0]; ++x) {
                const std::size_t v = ph.grid.index(x, y, z);
                const Vec3 p = Vec3(x, y, 0.0) - c;
                for (const Vec3& u : {ph.tract1, ph.tract2})
                    if ((p - p.dot(u) * u).norm() <= 0.5 * spec.thickness) ph.truth[v].push_back(u);
                if (!ph.truth[v].empty()) ph.mask.data[v] = 1.0;
                for (std::size_t d = 0; d < gradients.size(); ++d) {
                    double s = 0.0;
                    if (ph.truth[v].empty()) {
                        s = spec.isotropic_background ? iso : 0.0;
                    } else {
                        for (const Vec3& u : ph.truth[v]) {
                            const double t = gradients.directions[d].dot(u);
                            s += std::exp(-spec.bD * t * t);
                        }
                        s /= double(ph.truth[v].size());
                    }
                    ph.signal.at(d, v) = s;
                }
            }
    return ph;
}

// sqrt((S + n_re)^2 + n_im^2) with independent N(0, sigma) draws, in storage order.
inline void add_rician(SampledField<double>& s, double sigma, std::mt19937_64& rng) {
    require(sigma >= 0.0, "add_rician: sigma must be non-negative");
    if (sigma == 0.0) {
        for (auto& x : s.values) x = std::abs(x);
        return;
    }
    std::normal_distribution<double> n(0.0, sigma);
    for (auto& x : s.values) {
        const double re = x + n(rng), im = n(rng);
        x = std::sqrt(re * re + im * im);
    }
}

}  // namespace se3h
