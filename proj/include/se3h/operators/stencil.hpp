#pragma once

#include <algorithm>
#include <array>
#include <span>
#include <string>

#include "se3h/fields/grid.hpp"

namespace se3h {

struct GridTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class FdKernel { central_x, central_y, central_z, d_xx, d_yy, d_zz, d_xy, d_xz, d_yz };

// Extent-1 axes are planar (all derivatives along them vanish); extent 2 cannot host the stencils.
inline void check_stencil_grid(const GridSpec& g) {
    for (int a = 0; a < 3; ++a)
        if (g.dims[a] == 2)
            throw GridTooSmall("grid axis " + std::to_string(a) + " has extent 2; stencils need >= 3 or exactly 1");
}

namespace detail {

// out[v] += c * in[v + (dx, dy, dz)], zero outside the grid.
template <class T, class S>
void shift_accumulate(const GridSpec& g, const T* in, T* out, int dx, int dy, int dz, S c) {
    const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];
    const int x0 = std::max(0, -dx), x1 = std::min(nx, nx - dx);
    const int y0 = std::max(0, -dy), y1 = std::min(ny, ny - dy);
    const int z0 = std::max(0, -dz), z1 = std::min(nz, nz - dz);
    if (x0 >= x1) return;
    const std::ptrdiff_t off = (std::ptrdiff_t(dz) * ny + dy) * nx + dx;
    for (int z = z0; z < z1; ++z)
        for (int y = y0; y < y1; ++y) {
            const std::size_t base = g.index(0, y, z);
            T* o = out + base;
            const T* s = in + std::ptrdiff_t(base) + off;
            for (int x = x0; x < x1; ++x) o[x] += c * s[x];
        }
}

}  // namespace detail

// out += scale * K(in). Kernels: central [-1 0 1]/2, d_aa [1 -2 1], mixed corners +-1/4; divided by h or h^2.
template <class T>
void fd_accumulate(FdKernel k, const GridSpec& g, const T* in, T* out, double scale = 1.0) {
    const double h = g.voxel_size;
    auto axis_active = [&](int a) { return g.dims[a] >= 3; };
    auto shift = [&](int dx, int dy, int dz, double c) { detail::shift_accumulate(g, in, out, dx, dy, dz, c); };
    switch (k) {
        case FdKernel::central_x:
        case FdKernel::central_y:
        case FdKernel::central_z: {
            const int a = int(k) - int(FdKernel::central_x);
            if (!axis_active(a)) return;
            const double c = 0.5 * scale / h;
            std::array<int, 3> d{0, 0, 0};
            d[a] = 1;
            shift(d[0], d[1], d[2], c);
            shift(-d[0], -d[1], -d[2], -c);
            return;
        }
        case FdKernel::d_xx:
        case FdKernel::d_yy:
        case FdKernel::d_zz: {
            const int a = int(k) - int(FdKernel::d_xx);
            if (!axis_active(a)) return;
            const double c = scale / (h * h);
            std::array<int, 3> d{0, 0, 0};
            d[a] = 1;
            shift(d[0], d[1], d[2], c);
            shift(-d[0], -d[1], -d[2], c);
            shift(0, 0, 0, -2.0 * c);
            return;
        }
        case FdKernel::d_xy:
        case FdKernel::d_xz:
        case FdKernel::d_yz: {
            const int a = k == FdKernel::d_yz ? 1 : 0;
            const int b = k == FdKernel::d_xy ? 1 : 2;
            if (!axis_active(a) || !axis_active(b)) return;
            const double c = 0.25 * scale / (h * h);
            for (int sa : {-1, 1})
                for (int sb : {-1, 1}) {
                    std::array<int, 3> d{0, 0, 0};
                    d[a] = sa;
                    d[b] = sb;
                    shift(d[0], d[1], d[2], sa * sb * c);
                }
            return;
        }
    }
}

template <class T>
Volume<T> fd_apply(FdKernel k, const Volume<T>& v) {
    check_stencil_grid(v.grid);
    Volume<T> out(v.grid);
    fd_accumulate(k, v.grid, v.data.data(), out.data.data());
    return out;
}

inline constexpr std::array<FdKernel, 3> kGradientKernels{FdKernel::central_x, FdKernel::central_y,
                                                          FdKernel::central_z};
// Order matches the monomials xx, yy, zz, xy, xz, yz.
inline constexpr std::array<FdKernel, 6> kHessianKernels{FdKernel::d_xx, FdKernel::d_yy, FdKernel::d_zz,
                                                         FdKernel::d_xy, FdKernel::d_xz, FdKernel::d_yz};

}  // namespace se3h
