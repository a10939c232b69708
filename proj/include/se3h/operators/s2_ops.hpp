#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <vector>

#include "se3h/fields/spherical_field.hpp"
#include "se3h/operators/spherical_derivative.hpp"
#include "se3h/operators/stencil.hpp"
#include "se3h/operators/sweep.hpp"
#include "se3h/operators/zblock.hpp"

namespace se3h {

namespace detail {

inline void zero(Buffer<cplx>& b) { std::fill(b.begin(), b.end(), cplx{}); }

inline void axpy(cplx a, const Buffer<cplx>& x, std::span<cplx> y) {
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

inline void axpy(cplx a, std::span<const cplx> x, Buffer<cplx>& y) {
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

// Spherical derivative volumes conj(R^J_q)(grad) f for q = -J..J from one channel,
// plus the Laplacian for J = 2. Scratch buffers are reused across channels.
class ChannelDerivatives {
public:
    ChannelDerivatives(const GridSpec& g, int J, bool conjugate) : grid_(g), J_(J) {
        const std::size_t nv = g.voxels();
        const int nk = J == 1 ? 3 : 6;
        cart_.assign(static_cast<size_t>(nk), Buffer<cplx>(nv));
        comp_.assign(static_cast<size_t>(2 * J + 1), Buffer<cplx>(nv));
        if (J == 2) lap_.assign(nv, cplx{});
        for (int q = -J; q <= J; ++q) coeffs_.push_back(spherical_derivative_coeffs(J, q, conjugate));
    }

    void compute(std::span<const cplx> f) {
        const int nk = J_ == 1 ? 3 : 6;
        for (int a = 0; a < nk; ++a) {
            zero(cart_[a]);
            FdKernel k = J_ == 1 ? kGradientKernels[a] : kHessianKernels[a];
            fd_accumulate(k, grid_, f.data(), cart_[a].data());
        }
        for (int q = -J_; q <= J_; ++q) {
            auto& d = comp_[q + J_];
            zero(d);
            const auto& c = coeffs_[q + J_];
            for (int a = 0; a < nk; ++a)
                if (c[a] != cplx{}) axpy(c[a], std::span<const cplx>(cart_[a]), d);
        }
        if (J_ == 2) {
            zero(lap_);
            for (int a = 0; a < 3; ++a) axpy(1.0, std::span<const cplx>(cart_[a]), lap_);
        }
    }

    const Buffer<cplx>& component(int q) const { return comp_[q + J_]; }
    const Buffer<cplx>& laplacian() const { return lap_; }

private:
    GridSpec grid_;
    int J_;
    std::vector<Buffer<cplx>> cart_, comp_;
    Buffer<cplx> lap_;
    std::vector<std::vector<cplx>> coeffs_;
};

}  // namespace detail

// (T_0 f)^j = Z^1_{j,j+1} f^{j+1} + Z^1_{j,j-1} f^{j-1}, Z blocks acting with conj(R^1_q)(grad).
// Output orders above L are dropped; the container is always Parity::all.
inline SphericalField apply_T0_s2(const SphericalField& f, double scale = 1.0) {
    check_stencil_grid(f.grid());
    const int L = f.L();
    SphericalField out(f.grid(), L, Parity::all, f.real_valued());
    detail::DerivativeSweep sw(f.grid(), 1);
    std::vector<detail::SweepTarget> tg;
    f.for_each_channel([&](int jp, int np) {
        auto src = f.channel(jp, np);
        if (std::all_of(src.begin(), src.end(), [](cplx c) { return c == cplx{}; })) return;
        tg.clear();
        for (int j : {jp - 1, jp + 1}) {
            if (j < 0 || j > L) continue;
            for (const auto& e : z_block(1, j, jp).entries)
                if (e.np == np) tg.push_back({out.channel(j, e.n).data(), e.q + 1, scale * e.weight});
        }
        sw.run(src, tg);
    });
    return out;
}

// out += scale * T_0(T_0 f), streamed one intermediate order at a time so only 2j+1
// intermediate channels are alive. Equal to applying apply_T0_s2 twice.
inline void accumulate_T0T0_s2(const SphericalField& f, double scale, SphericalField& out) {
    check_stencil_grid(f.grid());
    const int L = f.L();
    require(out.grid() == f.grid() && out.L() == L, "T0T0: output shape mismatch");
    detail::DerivativeSweep sw(f.grid(), 1);
    const std::size_t nv = f.voxels();
    std::vector<detail::SweepTarget> tg;
    for (int jm = 0; jm <= L; ++jm) {
        std::vector<Buffer<cplx>> mid(std::size_t(2 * jm + 1));
        bool any = false;
        for (int jp : {jm - 1, jm + 1}) {
            if (!f.has(jp, 0)) continue;
            for (int np = -jp; np <= jp; ++np) {
                auto src = f.channel(jp, np);
                if (std::all_of(src.begin(), src.end(), [](cplx c) { return c == cplx{}; })) continue;
                tg.clear();
                for (const auto& e : z_block(1, jm, jp).entries) {
                    if (e.np != np) continue;
                    auto& m = mid[std::size_t(e.n + jm)];
                    if (m.empty()) m.assign(nv, cplx{});
                    tg.push_back({m.data(), e.q + 1, e.weight});
                }
                any |= !tg.empty();
                sw.run(src, tg);
            }
        }
        if (!any) continue;
        for (int nm = -jm; nm <= jm; ++nm) {
            const auto& m = mid[std::size_t(nm + jm)];
            if (m.empty()) continue;
            tg.clear();
            for (int j : {jm - 1, jm + 1}) {
                if (!out.has(j, 0)) continue;
                for (const auto& e : z_block(1, j, jm).entries)
                    if (e.np == nm) tg.push_back({out.channel(j, e.n).data(), e.q + 1, scale * e.weight});
            }
            sw.run(m, tg);
        }
    }
}

// Second-order axial operators of the form
//   out^j = lap[j] * Laplace f^j + sum_{jp in {j-2, j, j+2}} block(j, jp) * Z^2_{j,jp} f^jp.
struct AxialQuadratic {
    std::vector<cplx> lap;                  // per output order j
    std::function<cplx(int, int)> block;    // (j, jp)
};

inline SphericalField apply_axial_quadratic(const SphericalField& f, const AxialQuadratic& op) {
    check_stencil_grid(f.grid());
    const int L = f.L();
    require(op.lap.size() >= std::size_t(L) + 1, "axial quadratic: missing Laplacian coefficients");
    bool real = f.real_valued();
    for (int j = 0; j <= L; ++j) real &= op.lap[j].imag() == 0.0;
    SphericalField out(f.grid(), L, f.parity(), false);
    detail::DerivativeSweep sw(f.grid(), 2);
    std::vector<detail::SweepTarget> tg;
    f.for_each_channel([&](int jp, int np) {
        tg.clear();
        if (op.lap[jp] != cplx{}) tg.push_back({out.channel(jp, np).data(), detail::DerivativeSweep::laplacian_slot, op.lap[jp]});
        for (int j : {jp - 2, jp, jp + 2}) {
            if (j < 0 || j > L || !out.has(j, 0)) continue;
            const cplx b = op.block ? op.block(j, jp) : cplx{};
            if (b == cplx{}) continue;
            real &= b.imag() == 0.0;
            for (const auto& e : z_block(2, j, jp).entries)
                if (e.np == np) tg.push_back({out.channel(j, e.n).data(), e.q + 2, b * e.weight});
        }
        auto src = f.channel(jp, np);
        if (std::all_of(src.begin(), src.end(), [](cplx c) { return c == cplx{}; })) return;
        sw.run(src, tg);
    });
    out.set_real_valued(real);
    return out;
}

inline AxialQuadratic tz2_form(int L, double scale = 1.0) {
    return {std::vector<cplx>(std::size_t(L) + 1, scale / 3.0), [scale](int, int) { return cplx(2.0 * scale / 3.0); }};
}

inline AxialQuadratic txy2_form(int L, double scale = 1.0) {
    return {std::vector<cplx>(std::size_t(L) + 1, 2.0 * scale / 3.0),
            [scale](int, int) { return cplx(-2.0 * scale / 3.0); }};
}

inline AxialQuadratic laplace_form(int L, double scale = 1.0) {
    return {std::vector<cplx>(std::size_t(L) + 1, scale), nullptr};
}

inline SphericalField apply_Tz2_s2(const SphericalField& f) { return apply_axial_quadratic(f, tz2_form(f.L())); }
inline SphericalField apply_Txy2_s2(const SphericalField& f) { return apply_axial_quadratic(f, txy2_form(f.L())); }
inline SphericalField apply_laplace_s2(const SphericalField& f) {
    return apply_axial_quadratic(f, laplace_form(f.L()));
}

// Diagonal order-wise scaling, out^j = s[j] f^j.
inline SphericalField apply_diagonal(const SphericalField& f, const std::vector<double>& s) {
    require(s.size() >= std::size_t(f.L()) + 1, "apply_diagonal: missing coefficients");
    SphericalField out(f.grid(), f.L(), f.parity(), f.real_valued());
    f.for_each_channel([&](int j, int n) {
        auto src = f.channel(j, n);
        auto dst = out.channel(j, n);
        for (std::size_t v = 0; v < src.size(); ++v) dst[v] = s[j] * src[v];
    });
    return out;
}

inline SphericalField apply_J_squared(const SphericalField& f) {
    std::vector<double> s(std::size_t(f.L()) + 1);
    for (int j = 0; j <= f.L(); ++j) s[j] = -double(j) * (j + 1);
    return apply_diagonal(f, s);
}

}  // namespace se3h
