#pragma once

#include <cmath>

#include "se3h/fields/spherical_field.hpp"

namespace se3h {

struct FlagViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Even orders, n = 0..j; the negative half follows from f^j_{-n} = (-1)^n conj(f^j_n).
struct PackedField {
    GridSpec grid;
    int L = 0;
    Buffer<cplx> data;

    std::size_t channels() const { return packed_channel_count(L); }
    static std::size_t packed_channel_count(int L) {
        std::size_t c = 0;
        for (int j = 0; j <= L; j += 2) c += std::size_t(j) + 1;
        return c;
    }
    static std::size_t packed_channel_index(int j, int n) {
        int k = j / 2;  // sum over even i < j of (i + 1) = k^2
        return std::size_t(k * k + n);
    }
};

inline double real_symmetry_residual(const SphericalField& f) {
    double r = 0.0;
    const std::size_t nv = f.voxels();
    f.for_each_channel([&](int j, int n) {
        if (n < 0) return;
        auto a = f.channel(j, n);
        auto b = f.channel(j, -n);
        for (std::size_t v = 0; v < nv; ++v)
            r = std::max(r, std::abs(b[v] - double(parity_sign(n)) * std::conj(a[v])));
    });
    return r;
}

inline PackedField pack_real_even(const SphericalField& f) {
    if (!f.real_valued() || f.parity() != Parity::even_only)
        throw FlagViolation("pack_real_even: field must be flagged real-valued with even-only parity");
    if (real_symmetry_residual(f) > 1e-9) throw FlagViolation("pack_real_even: field is not real-valued");
    PackedField p{f.grid(), f.L(), {}};
    p.data.reserve(p.channels() * f.voxels());
    for (int j = 0; j <= f.L(); j += 2)
        for (int n = 0; n <= j; ++n) {
            auto c = f.channel(j, n);
            p.data.insert(p.data.end(), c.begin(), c.end());
        }
    return p;
}

inline SphericalField unpack_real_even(const PackedField& p) {
    SphericalField f(p.grid, p.L, Parity::even_only, true);
    const std::size_t nv = p.grid.voxels();
    for (int j = 0; j <= p.L; j += 2)
        for (int n = 0; n <= j; ++n) {
            const cplx* src = p.data.data() + PackedField::packed_channel_index(j, n) * nv;
            auto pos = f.channel(j, n);
            std::copy(src, src + nv, pos.begin());
            if (n == 0) continue;
            auto neg = f.channel(j, -n);
            const double s = parity_sign(n);
            for (std::size_t v = 0; v < nv; ++v) neg[v] = s * std::conj(src[v]);
        }
    return f;
}

}  // namespace se3h
