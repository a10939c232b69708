#pragma once

#include "se3h/fields/spherical_field.hpp"

namespace se3h {

// Same coefficients in a container with a different parity layout. Orders that the
// target cannot hold must be zero.
inline SphericalField with_parity(const SphericalField& f, Parity p) {
    if (f.parity() == p) return f;
    SphericalField out(f.grid(), f.L(), p, f.real_valued());
    f.for_each_channel([&](int j, int n) {
        auto src = f.channel(j, n);
        if (!out.has(j, n)) {
            for (const auto& c : src)
                if (c != cplx{}) throw ContractError("with_parity: odd orders are populated");
            return;
        }
        std::copy(src.begin(), src.end(), out.channel(j, n).begin());
    });
    return out;
}

// y += a x over the orders of x; y must hold every order of x.
inline void axpy(SphericalField& y, cplx a, const SphericalField& x) {
    require(y.grid() == x.grid() && y.L() == x.L(), "axpy: field shape mismatch");
    if (y.parity() == x.parity()) {
        auto& yd = y.data();
        const auto& xd = x.data();
        for (std::size_t i = 0; i < yd.size(); ++i) yd[i] += a * xd[i];
        return;
    }
    require(y.parity() == Parity::all, "axpy: target cannot hold odd orders");
    x.for_each_channel([&](int j, int n) {
        auto s = x.channel(j, n);
        auto d = y.channel(j, n);
        for (std::size_t v = 0; v < s.size(); ++v) d[v] += a * s[v];
    });
}

inline void scale(SphericalField& f, cplx a) {
    for (auto& c : f.data()) c *= a;
}

// Real part of sum_j (2j+1) sum_{n, r} conj(a) b, the L2(R^3 x S2) inner product up to
// a constant factor.
inline double inner(const SphericalField& a, const SphericalField& b) {
    require(a.grid() == b.grid(), "inner: grid mismatch");
    double s = 0.0;
    a.for_each_channel([&](int j, int n) {
        if (!b.has(j, n)) return;
        auto x = a.channel(j, n);
        auto y = b.channel(j, n);
        double t = 0.0;
        for (std::size_t v = 0; v < x.size(); ++v) t += x[v].real() * y[v].real() + x[v].imag() * y[v].imag();
        s += (2.0 * j + 1.0) * t;
    });
    return s;
}

inline bool all_finite(const SphericalField& f) {
    for (const auto& c : f.data())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

}  // namespace se3h
