#pragma once

#include "se3h/core/wigner.hpp"
#include "se3h/fields/spherical_field.hpp"

namespace se3h {

// f'^j = D^j(g) f^j, so that the rotated angular function at R_g n equals the original at n.
inline SphericalField rotate_coeffs(const SphericalField& f, const EulerZYZ& g) {
    SphericalField out(f.grid(), f.L(), f.parity(), f.real_valued());
    const std::size_t nv = f.voxels();
    for (int j = 0; j <= f.L(); ++j) {
        if (!order_present(f.parity(), j)) continue;
        const MatC D = wigner_D(j, g);
        for (int n = -j; n <= j; ++n) {
            auto dst = out.channel(j, n);
            for (int m = -j; m <= j; ++m) {
                const cplx w = D(n + j, m + j);
                auto src = f.channel(j, m);
                for (std::size_t v = 0; v < nv; ++v) dst[v] += w * src[v];
            }
        }
    }
    return out;
}

}  // namespace se3h
