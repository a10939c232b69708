#pragma once

#include <cmath>
#include <functional>

#include "se3h/fields/spherical_field.hpp"
#include "se3h/operators/s2_ops.hpp"

namespace se3h {

// Label conventions for the first-order fields: J_0 = J_z, J_{+-1} = -(J_x +- i J_y)/sqrt(2),
// T_0 = T_z, T_{-1} = -(T_x - i T_y)/sqrt(2), T_{+1} = -(T_x + i T_y)/sqrt(2).

inline WignerField apply_Jz(const WignerField& f) {
    WignerField out(f.grid(), f.L());
    f.for_each_channel([&](int j, int n, int m) {
        auto s = f.channel(j, n, m);
        auto d = out.channel(j, n, m);
        const cplx w(0.0, double(m));
        for (std::size_t v = 0; v < s.size(); ++v) d[v] = w * s[v];
    });
    return out;
}

inline double ladder_factor(int j, int m, int sign) {
    return std::sqrt(std::max(0.0, 0.5 * j * (j + 1.0) - 0.5 * m * (m + sign)));
}

// (J_{+-1} f)^j_{nm} = -i sqrt(j(j+1)/2 - m(m+-1)/2) f^j_{n,m+-1}
inline WignerField apply_Jpm(const WignerField& f, int sign) {
    require(sign == 1 || sign == -1, "apply_Jpm: sign must be +-1");
    WignerField out(f.grid(), f.L());
    f.for_each_channel([&](int j, int n, int m) {
        const int ms = m + sign;
        if (std::abs(ms) > j) return;
        const cplx w(0.0, -ladder_factor(j, m, sign));
        auto s = f.channel(j, n, ms);
        auto d = out.channel(j, n, m);
        for (std::size_t v = 0; v < s.size(); ++v) d[v] = w * s[v];
    });
    return out;
}

inline WignerField apply_J_squared(const WignerField& f) {
    WignerField out(f.grid(), f.L());
    f.for_each_channel([&](int j, int n, int m) {
        auto s = f.channel(j, n, m);
        auto d = out.channel(j, n, m);
        const double w = -double(j) * (j + 1);
        for (std::size_t v = 0; v < s.size(); ++v) d[v] = w * s[v];
    });
    return out;
}

namespace detail {

// Accumulates out += sum_p W_p Psi^J_p g, where
//   (Psi^J_p g)^j_{nm} = sum_{j', q} <j' n+q | j n, J q> <j' m+p | j m, J p> R^J_q(grad) g^{j'}_{n+q, m+p}.
// `input` supplies channel (j', n', m') of g (or an empty span for zero); `out_map` receives
// output channel (j, n, m) and returns the destination span and a scale.
struct ChannelRef {
    std::span<cplx> dst;
    cplx scale;
};

inline void rotated_derivative_kernel(const GridSpec& grid, int L, int J, const std::array<cplx, 5>& W,
                                      const std::function<std::span<const cplx>(int, int, int)>& input,
                                      const std::function<ChannelRef(int, int, int)>& out_map) {
    ChannelDerivatives dv(grid, J, false);
    for (int jp = 0; jp <= L; ++jp)
        for (int np = -jp; np <= jp; ++np)
            for (int mp = -jp; mp <= jp; ++mp) {
                auto src = input(jp, np, mp);
                if (src.empty()) continue;
                bool computed = false;
                for (int p = -J; p <= J; ++p) {
                    const cplx wp = W[p + J];
                    if (wp == cplx{}) continue;
                    const int m = mp - p;
                    for (int q = -J; q <= J; ++q) {
                        const int n = np - q;
                        for (int j = std::max(std::abs(jp - J), std::max(std::abs(n), std::abs(m))); j <= std::min(L, jp + J); ++j) {
                            const double c = cg(jp, np, j, n, J, q) * cg(jp, mp, j, m, J, p);
                            if (c == 0.0) continue;
                            ChannelRef r = out_map(j, n, m);
                            if (r.dst.empty() || r.scale == cplx{}) continue;
                            if (!computed) {
                                dv.compute(src);
                                computed = true;
                            }
                            axpy(wp * c * r.scale, dv.component(q), r.dst);
                        }
                    }
                }
            }
}

inline int label_sign(int k) { return k == -1 ? -1 : 1; }

}  // namespace detail

// Standard spherical components t_k of the rotated frame are related to the labels above by
// T_k = label_sign(k) * t_k.
inline WignerField apply_Tk(const WignerField& f, int k) {
    require(k >= -1 && k <= 1, "apply_Tk: k must be -1, 0 or 1");
    check_stencil_grid(f.grid());
    WignerField out(f.grid(), f.L());
    std::array<cplx, 5> W{};
    W[k + 1] = double(detail::label_sign(k));
    detail::rotated_derivative_kernel(
        f.grid(), f.L(), 1, W, [&](int j, int n, int m) { return f.channel(j, n, m); },
        [&](int j, int n, int m) { return detail::ChannelRef{out.channel(j, n, m), 1.0}; });
    return out;
}

// conj(T_{k'}) T_k = delta_{kk'} Laplace/3 - (sqrt(10)/3) <1 k | 2 p, 1 k'> Psi^2_p, p = k - k'.
inline WignerField apply_TT(const WignerField& f, int k, int kp) {
    require(std::abs(k) <= 1 && std::abs(kp) <= 1, "apply_TT: k, k' must be in {-1, 0, 1}");
    check_stencil_grid(f.grid());
    WignerField out(f.grid(), f.L());
    const double sig = detail::label_sign(k) * detail::label_sign(kp);
    if (k == kp) {
        Buffer<cplx> lap(f.voxels());
        f.for_each_channel([&](int j, int n, int m) {
            detail::zero(lap);
            auto src = f.channel(j, n, m);
            for (FdKernel kk : {FdKernel::d_xx, FdKernel::d_yy, FdKernel::d_zz})
                fd_accumulate(kk, f.grid(), src.data(), lap.data());
            detail::axpy(sig / 3.0, lap, out.channel(j, n, m));
        });
    }
    const int p = k - kp;
    std::array<cplx, 5> W{};
    W[p + 2] = -sig * std::sqrt(10.0) / 3.0 * cg(1, k, 2, p, 1, kp);
    detail::rotated_derivative_kernel(
        f.grid(), f.L(), 2, W, [&](int j, int n, int m) { return f.channel(j, n, m); },
        [&](int j, int n, int m) { return detail::ChannelRef{out.channel(j, n, m), 1.0}; });
    return out;
}

enum class MixedOrder { TJ, JT };

// T_{-s} J_{s} (TJ) or J_{s} T_{-s} (JT), evaluated in one pass over the input channels.
inline WignerField apply_mixed_TJ(const WignerField& f, MixedOrder order, int s) {
    require(s == 1 || s == -1, "apply_mixed_TJ: sign must be +-1");
    check_stencil_grid(f.grid());
    const int L = f.L();
    WignerField out(f.grid(), L);
    std::array<cplx, 5> W{};
    W[-s + 1] = double(detail::label_sign(-s));
    if (order == MixedOrder::TJ) {
        // input channel (j', n', m') of J_s f is -i c f^{j'}_{n', m'+s}; stream the shifted source
        Buffer<cplx> scaled(f.voxels());
        detail::rotated_derivative_kernel(
            f.grid(), L, 1, W,
            [&](int j, int n, int m) -> std::span<const cplx> {
                if (std::abs(m + s) > j) return {};
                const cplx w(0.0, -ladder_factor(j, m, s));
                auto src = f.channel(j, n, m + s);
                for (std::size_t v = 0; v < src.size(); ++v) scaled[v] = w * src[v];
                return std::span<const cplx>(scaled);
            },
            [&](int j, int n, int m) { return detail::ChannelRef{out.channel(j, n, m), 1.0}; });
    } else {
        // (J_s g)^j_{nm} = -i c g^j_{n, m+s}: route output channel (j, n, m+s) of g to (j, n, m)
        detail::rotated_derivative_kernel(
            f.grid(), L, 1, W, [&](int j, int n, int m) { return f.channel(j, n, m); },
            [&](int j, int n, int mg) -> detail::ChannelRef {
                const int m = mg - s;
                if (std::abs(m) > j) return {{}, 0.0};
                return {out.channel(j, n, m), cplx(0.0, -ladder_factor(j, m, s))};
            });
    }
    return out;
}

// S2 field as the m = 0 Wigner channels and back.
inline WignerField embed_m0(const SphericalField& f) {
    WignerField w(f.grid(), f.L());
    f.for_each_channel([&](int j, int n) {
        auto s = f.channel(j, n);
        std::copy(s.begin(), s.end(), w.channel(j, n, 0).begin());
    });
    return w;
}

inline SphericalField restrict_m0(const WignerField& w, Parity parity = Parity::all) {
    SphericalField f(w.grid(), w.L(), parity);
    f.for_each_channel([&](int j, int n) {
        auto s = w.channel(j, n, 0);
        std::copy(s.begin(), s.end(), f.channel(j, n).begin());
    });
    return f;
}

}  // namespace se3h
