#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include <gsl/gsl_integration.h>

#include "se3h/core/types.hpp"

namespace se3h {

struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2n - 1.
inline GaussLegendre gauss_legendre(int n) {
    require(n >= 1, "gauss_legendre: need at least one node");
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(static_cast<size_t>(n)), &gsl_integration_glfixed_table_free);
    if (!table) throw std::runtime_error("gauss_legendre: table allocation failed");
    GaussLegendre gl;
    gl.nodes.resize(static_cast<size_t>(n));
    gl.weights.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &gl.nodes[i], &gl.weights[i], table.get());
    return gl;
}

struct SO3Node {
    EulerZYZ g;
    double weight;
};

// Product rule: `resolution` Gauss-Legendre nodes in cos(beta), 2*resolution uniform nodes in
// gamma and alpha. Weights sum to 8 pi^2. Integrates D^j entries exactly for j < resolution.
inline std::vector<SO3Node> so3_quadrature(int resolution) {
    require(resolution >= 2, "so3_quadrature: resolution must be >= 2");
    const GaussLegendre gl = gauss_legendre(resolution);
    const int na = 2 * resolution;
    const double h = 2.0 * kPi / na;
    std::vector<SO3Node> out;
    out.reserve(static_cast<size_t>(resolution) * na * na);
    for (int b = 0; b < resolution; ++b) {
        double beta = std::acos(gl.nodes[b]);
        for (int c = 0; c < na; ++c)
            for (int a = 0; a < na; ++a) out.push_back({{c * h, beta, a * h}, gl.weights[b] * h * h});
    }
    return out;
}

}  // namespace se3h
