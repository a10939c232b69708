#pragma once

#include <array>
#include <vector>

#include "se3h/core/spherical_harmonics.hpp"
#include "se3h/core/types.hpp"

namespace se3h {

// Coefficients of R^J_q(grad) on Cartesian derivatives: J = 1 over (x, y, z),
// J = 2 over (xx, yy, zz, xy, xz, yz). With conjugate = true the coefficients of
// conj(R^J_q)(grad) are returned.
inline std::vector<cplx> spherical_derivative_coeffs(int J, int q, bool conjugate = false) {
    require(J == 1 || J == 2, "spherical derivative: order must be 1 or 2");
    require(std::abs(q) <= J, "spherical derivative: |q| > J");
    const Polynomial p = solid_harmonic_polynomial(J, q);
    static const std::array<Monomial, 3> lin{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    static const std::array<Monomial, 6> quad{{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}}};
    std::vector<cplx> c;
    auto pick = [&](const Monomial& m) {
        auto it = p.find(m);
        cplx v = it == p.end() ? cplx{} : it->second;
        c.push_back(conjugate ? std::conj(v) : v);
    };
    if (J == 1)
        for (const auto& m : lin) pick(m);
    else
        for (const auto& m : quad) pick(m);
    return c;
}

}  // namespace se3h
