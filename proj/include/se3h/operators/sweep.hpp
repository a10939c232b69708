#pragma once

#include <array>
#include <span>
#include <vector>

#include "se3h/fields/grid.hpp"
#include "se3h/operators/spherical_derivative.hpp"
#include "se3h/operators/stencil.hpp"

namespace se3h::detail {

// Copy of one channel with a one-voxel zero border, reused across channels.
class PaddedChannel {
public:
    explicit PaddedChannel(const GridSpec& g) : g_(g) {
        px_ = g.dims[0] + 2;
        py_ = g.dims[1] + 2;
        pz_ = g.dims[2] + 2;
        buf_.assign(std::size_t(px_) * py_ * pz_, cplx{});
    }
    void load(std::span<const cplx> f) {
        const int nx = g_.dims[0], ny = g_.dims[1], nz = g_.dims[2];
        for (int z = 0; z < nz; ++z)
            for (int y = 0; y < ny; ++y) {
                const cplx* s = f.data() + g_.index(0, y, z);
                cplx* d = buf_.data() + index(0, y, z);
                std::copy(s, s + nx, d);
            }
    }
    std::size_t index(int x, int y, int z) const { return (std::size_t(z + 1) * py_ + (y + 1)) * px_ + (x + 1); }
    const cplx* data() const { return buf_.data(); }
    std::ptrdiff_t stride(int axis) const {
        return axis == 0 ? 1 : axis == 1 ? std::ptrdiff_t(px_) : std::ptrdiff_t(px_) * py_;
    }
    const GridSpec& grid() const { return g_; }

private:
    GridSpec g_;
    int px_, py_, pz_;
    std::vector<cplx> buf_;
};

inline cplx cmul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// One output channel fed by a spherical derivative component (slot) with weight w.
struct SweepTarget {
    cplx* out;
    int slot;
    cplx w;
};

// For each voxel: Cartesian derivatives of the padded channel (gradient for J = 1, the six
// second derivatives for J = 2), spherical components conj(R^J_q)(grad) in slots 0..2J,
// the Laplacian in slot 2J+1 (J = 2), then out_t[v] += w_t * slot_t for every target.
class DerivativeSweep {
public:
    DerivativeSweep(const GridSpec& g, int J) : pad_(g), J_(J) {
        check_stencil_grid(g);
        for (int a = 0; a < 3; ++a) active_[a] = g.dims[a] >= 3;
        const int nk = J == 1 ? 3 : 6;
        coeff_.assign(std::size_t(2 * J + 1), std::vector<cplx>(std::size_t(nk)));
        for (int q = -J; q <= J; ++q) coeff_[q + J] = spherical_derivative_coeffs(J, q, true);
    }

    void run(std::span<const cplx> f, const std::vector<SweepTarget>& targets) {
        if (targets.empty()) return;
        pad_.load(f);
        const GridSpec& g = pad_.grid();
        const int nx = g.dims[0];
        const double h = g.voxel_size, ih2 = 1.0 / (h * h);
        const std::ptrdiff_t s[3] = {pad_.stride(0), pad_.stride(1), pad_.stride(2)};
        std::array<bool, 6> used{};
        for (const auto& t : targets) used[t.slot] = true;
        // Cartesian derivatives needed by the used slots
        std::array<bool, 6> need{};
        for (int q = 0; q <= 2 * J_; ++q)
            if (used[q])
                for (std::size_t a = 0; a < coeff_[q].size(); ++a) need[a] = need[a] || coeff_[q][a] != cplx{};
        if (J_ == 2 && used[laplacian_slot]) need[0] = need[1] = need[2] = true;
        static constexpr int pa[3] = {0, 0, 1}, pb[3] = {1, 2, 2};
        const int nk = J_ == 1 ? 3 : 6;
        for (int k = 0; k < nk; ++k) {
            const bool act = J_ == 1 || k < 3 ? active_[k % 3] : active_[pa[k - 3]] && active_[pb[k - 3]];
            need[k] = need[k] && act;
            drow_[k].assign(std::size_t(nx), cplx{});
        }
        for (auto& r : srow_) r.resize(std::size_t(nx));
        for (int z = 0; z < g.dims[2]; ++z)
            for (int y = 0; y < g.dims[1]; ++y) {
                const cplx* p = pad_.data() + pad_.index(0, y, z);
                for (int k = 0; k < nk; ++k) {
                    if (!need[k]) continue;
                    cplx* d = drow_[k].data();
                    if (J_ == 1) {
                        const std::ptrdiff_t o = s[k];
                        for (int x = 0; x < nx; ++x) d[x] = (p[x + o] - p[x - o]) * (0.5 / h);
                    } else if (k < 3) {
                        const std::ptrdiff_t o = s[k];
                        for (int x = 0; x < nx; ++x) d[x] = (p[x + o] + p[x - o] - 2.0 * p[x]) * ih2;
                    } else {
                        const std::ptrdiff_t a = s[pa[k - 3]], b = s[pb[k - 3]];
                        for (int x = 0; x < nx; ++x)
                            d[x] = (p[x + a + b] + p[x - a - b] - p[x + a - b] - p[x - a + b]) * (0.25 * ih2);
                    }
                }
                for (int q = 0; q <= 2 * J_; ++q) {
                    if (!used[q]) continue;
                    cplx* r = srow_[q].data();
                    std::fill(r, r + nx, cplx{});
                    for (int k = 0; k < nk; ++k) {
                        const cplx c = coeff_[q][k];
                        if (c == cplx{} || !need[k]) continue;
                        const cplx* d = drow_[k].data();
                        for (int x = 0; x < nx; ++x) r[x] += cmul(c, d[x]);
                    }
                }
                if (J_ == 2 && used[laplacian_slot]) {
                    cplx* r = srow_[laplacian_slot].data();
                    std::fill(r, r + nx, cplx{});
                    for (int k = 0; k < 3; ++k) {
                        if (!need[k]) continue;
                        const cplx* d = drow_[k].data();
                        for (int x = 0; x < nx; ++x) r[x] += d[x];
                    }
                }
                const std::size_t row = g.index(0, y, z);
                for (const auto& t : targets) {
                    cplx* o = t.out + row;
                    const cplx* r = srow_[t.slot].data();
                    const cplx w = t.w;
                    if (w.imag() == 0.0) {
                        const double wr = w.real();
                        for (int x = 0; x < nx; ++x) o[x] += wr * r[x];
                    } else {
                        for (int x = 0; x < nx; ++x) o[x] += cmul(w, r[x]);
                    }
                }
            }
    }

    static constexpr int laplacian_slot = 5;

private:
    PaddedChannel pad_;
    int J_;
    bool active_[3];
    std::vector<std::vector<cplx>> coeff_;
    std::array<std::vector<cplx>, 6> drow_, srow_;
};

}  // namespace se3h::detail
