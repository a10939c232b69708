#pragma once

#include <cstddef>
#include <span>

#include "se3h/core/types.hpp"
#include "se3h/fields/grid.hpp"

namespace se3h {

enum class Parity { all, even_only };

inline bool order_present(Parity p, int j) { return p == Parity::all || j % 2 == 0; }

// Number of (j, n) channels up to band limit L.
inline std::size_t sh_channel_count(int L, Parity p) {
    if (L < 0) return 0;
    if (p == Parity::all) return std::size_t(L + 1) * (L + 1);
    int K = L / 2;  // even orders 0..2K
    return std::size_t(K + 1) * (2 * K + 1);
}

inline std::size_t sh_channel_index(int j, int n, Parity p) {
    if (p == Parity::all) return std::size_t(j * j + n + j);
    int k = j / 2;
    return std::size_t(k * (2 * k - 1) + n + j);
}

// Grid of spherical-harmonic coefficients f^j_n(r), channel-planar.
class SphericalField {
public:
    SphericalField() = default;
    SphericalField(const GridSpec& grid, int L, Parity parity, bool real_valued = false)
        : grid_(grid), L_(L), parity_(parity), real_(real_valued) {
        validate(grid);
        require(L >= 0, "SphericalField: negative band limit");
        coeffs_.assign(channels() * grid.voxels(), cplx{});
    }

    const GridSpec& grid() const { return grid_; }
    int L() const { return L_; }
    Parity parity() const { return parity_; }
    bool real_valued() const { return real_; }
    void set_real_valued(bool v) { real_ = v; }
    std::size_t voxels() const { return grid_.voxels(); }
    std::size_t channels() const { return sh_channel_count(L_, parity_); }
    bool has(int j, int n) const { return j >= 0 && j <= L_ && std::abs(n) <= j && order_present(parity_, j); }
    std::size_t channel_index(int j, int n) const { return sh_channel_index(j, n, parity_); }

    std::span<cplx> channel(int j, int n) {
        return {coeffs_.data() + channel_index(j, n) * voxels(), voxels()};
    }
    std::span<const cplx> channel(int j, int n) const {
        return {coeffs_.data() + channel_index(j, n) * voxels(), voxels()};
    }
    std::span<cplx> channel_at(std::size_t c) { return {coeffs_.data() + c * voxels(), voxels()}; }
    std::span<const cplx> channel_at(std::size_t c) const { return {coeffs_.data() + c * voxels(), voxels()}; }

    cplx& at(int j, int n, std::size_t voxel) { return coeffs_[channel_index(j, n) * voxels() + voxel]; }
    cplx at(int j, int n, std::size_t voxel) const { return coeffs_[channel_index(j, n) * voxels() + voxel]; }
    // Zero for orders that are not stored.
    cplx get(int j, int n, std::size_t voxel) const { return has(j, n) ? at(j, n, voxel) : cplx{}; }

    Buffer<cplx>& data() { return coeffs_; }
    const Buffer<cplx>& data() const { return coeffs_; }

    template <class F>
    void for_each_channel(F&& f) const {
        for (int j = 0; j <= L_; ++j) {
            if (!order_present(parity_, j)) continue;
            for (int n = -j; n <= j; ++n) f(j, n);
        }
    }

private:
    GridSpec grid_;
    int L_ = 0;
    Parity parity_ = Parity::all;
    bool real_ = false;
    Buffer<cplx> coeffs_;
};

inline std::size_t wigner_channel_count(int L) {
    return L < 0 ? 0 : std::size_t(L + 1) * (2 * L + 1) * (2 * L + 3) / 3;
}

inline std::size_t wigner_channel_index(int j, int n, int m) {
    return std::size_t(j * (4 * j * j - 1) / 3 + (n + j) * (2 * j + 1) + (m + j));
}

// Grid of Wigner coefficients f^j_{nm}(r), channel-planar.
class WignerField {
public:
    WignerField() = default;
    WignerField(const GridSpec& grid, int L) : grid_(grid), L_(L) {
        validate(grid);
        require(L >= 0, "WignerField: negative band limit");
        coeffs_.assign(channels() * grid.voxels(), cplx{});
    }

    const GridSpec& grid() const { return grid_; }
    int L() const { return L_; }
    std::size_t voxels() const { return grid_.voxels(); }
    std::size_t channels() const { return wigner_channel_count(L_); }
    bool has(int j, int n, int m) const { return j >= 0 && j <= L_ && std::abs(n) <= j && std::abs(m) <= j; }

    std::span<cplx> channel(int j, int n, int m) {
        return {coeffs_.data() + wigner_channel_index(j, n, m) * voxels(), voxels()};
    }
    std::span<const cplx> channel(int j, int n, int m) const {
        return {coeffs_.data() + wigner_channel_index(j, n, m) * voxels(), voxels()};
    }
    cplx& at(int j, int n, int m, std::size_t v) { return coeffs_[wigner_channel_index(j, n, m) * voxels() + v]; }
    cplx at(int j, int n, int m, std::size_t v) const {
        return coeffs_[wigner_channel_index(j, n, m) * voxels() + v];
    }
    cplx get(int j, int n, int m, std::size_t v) const { return has(j, n, m) ? at(j, n, m, v) : cplx{}; }

    Buffer<cplx>& data() { return coeffs_; }
    const Buffer<cplx>& data() const { return coeffs_; }

    template <class F>
    void for_each_channel(F&& f) const {
        for (int j = 0; j <= L_; ++j)
            for (int n = -j; n <= j; ++n)
                for (int m = -j; m <= j; ++m) f(j, n, m);
    }

private:
    GridSpec grid_;
    int L_ = 0;
    Buffer<cplx> coeffs_;
};

// Angular samples on a direction set, direction-planar: values[d * voxels + v].
template <class T>
struct SampledField {
    GridSpec grid;
    std::size_t ndirs = 0;
    Buffer<T> values;

    SampledField() = default;
    SampledField(const GridSpec& g, std::size_t n) : grid(g), ndirs(n), values(n * g.voxels(), T{}) {}
    std::size_t voxels() const { return grid.voxels(); }
    std::span<T> direction(std::size_t d) { return {values.data() + d * voxels(), voxels()}; }
    std::span<const T> direction(std::size_t d) const { return {values.data() + d * voxels(), voxels()}; }
    T& at(std::size_t d, std::size_t v) { return values[d * voxels() + v]; }
    const T& at(std::size_t d, std::size_t v) const { return values[d * voxels() + v]; }
};

}  // namespace se3h
