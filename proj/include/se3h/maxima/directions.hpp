#pragma once

#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <vector>

#include "se3h/fields/direction_set.hpp"

namespace se3h {

inline std::vector<Vec3> fibonacci_sphere(int n) {
    std::vector<Vec3> p(static_cast<size_t>(n));
    const double ga = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        double z = 1.0 - (2.0 * i + 1.0) / n;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        p[i] = Vec3(r * std::cos(ga * i), r * std::sin(ga * i), z);
    }
    return p;
}

inline double coulomb_energy(const std::vector<Vec3>& p) {
    double e = 0.0;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t k = i + 1; k < p.size(); ++k) e += 1.0 / (p[i] - p[k]).norm();
    return e;
}

struct ElectrostaticResult {
    DirectionSet set;
    double energy = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Projected gradient descent on the Coulomb energy with a backtracking step.
// Deterministic for a given (n, iters, seed).
inline ElectrostaticResult electrostatic_directions_ex(int n, int iters = 500, std::uint64_t seed = 1,
                                                       double tol = 1e-10) {
    require(n >= 2, "electrostatic_directions: need n >= 2");
    std::vector<Vec3> p = fibonacci_sphere(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.05);
    for (auto& v : p) v = (v + Vec3(g(rng), g(rng), g(rng))).normalized();

    double energy = coulomb_energy(p);
    double step = 0.1 / std::sqrt(double(n));
    ElectrostaticResult res;
    std::vector<Vec3> force(p.size()), trial(p.size());
    for (int it = 0; it < iters; ++it) {
        for (auto& f : force) f.setZero();
        for (size_t i = 0; i < p.size(); ++i)
            for (size_t k = i + 1; k < p.size(); ++k) {
                Vec3 d = p[i] - p[k];
                double r = d.norm();
                Vec3 f = d / (r * r * r);
                force[i] += f;
                force[k] -= f;
            }
        double fmax = 0.0;
        for (size_t i = 0; i < p.size(); ++i) {
            force[i] -= force[i].dot(p[i]) * p[i];
            fmax = std::max(fmax, force[i].norm());
        }
        if (fmax < 1e-12) {
            res.converged = true;
            res.iterations = it;
            break;
        }
        const double scale = step / fmax;
        bool accepted = false;
        for (int b = 0; b < 30 && !accepted; ++b) {
            for (size_t i = 0; i < p.size(); ++i) trial[i] = (p[i] + scale * std::pow(0.5, b) * force[i]).normalized();
            double e = coulomb_energy(trial);
            if (e < energy) {
                const double rel = (energy - e) / energy;
                p.swap(trial);
                energy = e;
                accepted = true;
                if (b == 0) step *= 1.2;
                else step *= std::pow(0.5, b);
                if (rel < tol) res.converged = true;
            }
        }
        res.iterations = it + 1;
        if (!accepted || res.converged) {
            res.converged = true;
            break;
        }
    }
    res.energy = energy;
    res.set = make_direction_set(std::move(p));
    return res;
}

inline DirectionSet electrostatic_directions(int n, int iters = 500, std::uint64_t seed = 1) {
    ElectrostaticResult r = electrostatic_directions_ex(n, iters, seed);
    if (!r.converged)
        std::cerr << "warning: electrostatic_directions(" << n << ") stopped after " << r.iterations
                  << " iterations without converging\n";
    return std::move(r.set);
}

}  // namespace se3h
