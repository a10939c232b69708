#pragma once

// Discrete-sphere reference for S2 operators: evaluate on a direction set, apply the
// directional stencils per direction, re-project.

#include "se3h/fields/projection.hpp"
#include "se3h/operators/stencil.hpp"

namespace se3h::oracle {

inline SphericalField s2_directional(const SphericalField& f, const std::vector<Vec3>& dirs, int order) {
    SHProjector proj(dirs, f.L(), f.parity() == Parity::even_only && order == 2 ? Parity::even_only : Parity::all);
    SHProjector in(dirs, f.L(), f.parity());
    SampledField<cplx> s = in.evaluate(f);
    SampledField<cplx> out(f.grid(), dirs.size());
    const std::size_t nv = f.voxels();
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        const Vec3& n = dirs[d];
        const cplx* src = s.values.data() + d * nv;
        cplx* dst = out.values.data() + d * nv;
        if (order == 1) {
            for (int a = 0; a < 3; ++a) fd_accumulate(kGradientKernels[a], f.grid(), src, dst, n(a));
        } else {
            const double c[6] = {n.x() * n.x(), n.y() * n.y(), n.z() * n.z(), 2 * n.x() * n.y(), 2 * n.x() * n.z(),
                                 2 * n.y() * n.z()};
            for (int k = 0; k < 6; ++k) fd_accumulate(kHessianKernels[k], f.grid(), src, dst, c[k]);
        }
    }
    return proj.project(out);
}

}  // namespace se3h::oracle
