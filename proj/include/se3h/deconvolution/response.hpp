#pragma once

#include <functional>
#include <vector>

#include "se3h/core/legendre.hpp"
#include "se3h/core/quadrature.hpp"
#include "se3h/fields/spherical_field.hpp"
#include "se3h/operators/convolved.hpp"

namespace se3h {

// c_j = int_{-1}^{1} h(t) P_j(t) dt for j <= L.
struct FiberResponse {
    std::vector<double> c;
    int L() const { return int(c.size()) - 1; }
};

// Gauss-Legendre with `nodes` points; exact for polynomial h of degree < 2 nodes - L.
inline FiberResponse response_coeffs(const std::function<double(double)>& h, int L, int nodes = 96) {
    require(L >= 0, "response_coeffs: negative band limit");
    const GaussLegendre gl = gauss_legendre(nodes);
    FiberResponse r;
    r.c.assign(std::size_t(L) + 1, 0.0);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double hv = h(gl.nodes[i]);
        const std::vector<double> p = legendre_all(L, gl.nodes[i]);
        for (int j = 0; j <= L; ++j) r.c[j] += gl.weights[i] * hv * p[j];
    }
    return r;
}

// Single-fiber model exp(-bD t^2).
inline FiberResponse exp_bd_response(double bD, int L) {
    return response_coeffs([bD](double t) { return std::exp(-bD * t * t); }, L);
}

// Diagonal fiber-response operator, out^j = c_j f^j.
inline SphericalField apply_H(const SphericalField& f, const FiberResponse& r) {
    if (r.L() < f.L())
        throw MissingCoefficient("apply_H: response covers orders up to " + std::to_string(r.L()) + ", field needs " +
                                 std::to_string(f.L()));
    return apply_diagonal(f, r.c);
}

}  // namespace se3h
