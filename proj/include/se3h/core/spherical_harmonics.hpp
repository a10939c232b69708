#pragma once

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "se3h/core/factorial.hpp"
#include "se3h/core/types.hpp"

namespace se3h {

// Racah-normalized spherical harmonics, Y^j_m(e_z) = delta_{m0}, Condon-Shortley phase.
// Values for all |m| <= j <= L are written to out[j*j + j + m].
inline void sh_all_unchecked(int L, const Vec3& n, cplx* out) {
    const double z = n.z();
    const cplx w(n.x(), n.y());
    // a(m, j) recurrence in j for fixed m; Y^j_m = a(m, j) (x + i y)^m for m >= 0.
    cplx wm = 1.0;
    double amm = 1.0;
    for (int m = 0; m <= L; ++m) {
        if (m > 0) {
            amm *= -std::sqrt((2.0 * m - 1.0) / (2.0 * m));
            wm *= w;
        }
        double a2 = amm, a1 = 0.0;
        for (int j = m; j <= L; ++j) {
            double a;
            if (j == m)
                a = amm;
            else if (j == m + 1)
                a = std::sqrt(2.0 * m + 1.0) * z * amm;
            else
                a = ((2.0 * j - 1.0) * z * a1 - std::sqrt((j - 1.0) * (j - 1.0) - double(m) * m) * a2) /
                    std::sqrt(double(j) * j - double(m) * m);
            if (j >= m + 1) a2 = a1;
            a1 = a;
            cplx y = a * wm;
            out[j * j + j + m] = y;
            if (m > 0) out[j * j + j - m] = double(parity_sign(m)) * std::conj(y);
        }
    }
}

inline void check_unit(const Vec3& n) {
    if (std::abs(n.norm() - 1.0) > 1e-9) throw DomainError("spherical harmonic: direction is not unit length");
}

inline std::vector<cplx> sh_all(int L, const Vec3& n) {
    check_unit(n);
    std::vector<cplx> out(static_cast<size_t>((L + 1) * (L + 1)));
    sh_all_unchecked(L, n, out.data());
    return out;
}

inline cplx sh_eval(int j, int m, const Vec3& n) {
    require(j >= 0 && std::abs(m) <= j, "sh_eval: |m| > j");
    return sh_all(j, n)[static_cast<size_t>(j * j + j + m)];
}

// Racah solid harmonic R^j_m(r) = |r|^j Y^j_m(r/|r|), evaluated from the explicit polynomial.
inline cplx solid_harmonic_eval(int j, int m, const Vec3& r) {
    require(j >= 0 && std::abs(m) <= j, "solid_harmonic_eval: |m| > j");
    using detail::log_factorial;
    const cplx a(r.x(), -r.y());   // x - i y
    const cplx b(-r.x(), -r.y());  // -x - i y
    const long double pre = 0.5L * (log_factorial(j + m) + log_factorial(j - m));
    cplx sum = 0.0;
    // sum over p, q, k with p + q + k = j and q - p = m
    for (int p = 0; p <= j; ++p) {
        int q = p + m;
        int k = j - p - q;
        if (q < 0 || k < 0) continue;
        double c = static_cast<double>(std::exp(pre - log_factorial(p) - log_factorial(q) - log_factorial(k))) / std::ldexp(1.0, p + q);
        sum += c * std::pow(a, p) * std::pow(b, q) * std::pow(r.z(), k);
    }
    return sum;
}

// Polynomial in x, y, z with complex coefficients, keyed by exponents (a, b, c).
using Monomial = std::array<int, 3>;
using Polynomial = std::map<Monomial, cplx>;

// Coefficients of R^j_m as a homogeneous polynomial. Substituting partial derivatives
// for x, y, z gives the spherical derivative operator.
inline Polynomial solid_harmonic_polynomial(int j, int m) {
    require(j >= 0 && std::abs(m) <= j, "solid_harmonic_polynomial: |m| > j");
    using detail::log_factorial;
    auto binom = [](int n, int k) { return static_cast<double>(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k))); };
    const long double pre = 0.5L * (log_factorial(j + m) + log_factorial(j - m));
    Polynomial poly;
    for (int p = 0; p <= j; ++p) {
        int q = p + m;
        int k = j - p - q;
        if (q < 0 || k < 0) continue;
        double c = static_cast<double>(std::exp(pre - log_factorial(p) - log_factorial(q) - log_factorial(k))) / std::ldexp(1.0, p + q);
        // (x - i y)^p (-x - i y)^q z^k
        for (int u = 0; u <= p; ++u) {
            cplx cu = binom(p, u) * std::pow(cplx(0, -1), p - u);  // x^u (-iy)^{p-u}
            for (int v = 0; v <= q; ++v) {
                cplx cv = binom(q, v) * std::pow(-1.0, v) * std::pow(cplx(0, -1), q - v);
                Monomial mono{u + v, (p - u) + (q - v), k};
                poly[mono] += c * cu * cv;
            }
        }
    }
    for (auto it = poly.begin(); it != poly.end();) {
        if (std::abs(it->second) < 1e-15)
            it = poly.erase(it);
        else
            ++it;
    }
    return poly;
}

}  // namespace se3h
