#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "se3h/core/factorial.hpp"
#include "se3h/core/types.hpp"

namespace se3h {

using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;

// d^j_{nm}(beta); rows n, columns m.
inline double wigner_small_d(int j, int n, int m, double beta) {
    require(j >= 0 && std::abs(n) <= j && std::abs(m) <= j, "wigner_small_d: index out of range");
    using detail::log_factorial;
    const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
    const long double pre =
        0.5L * (log_factorial(j + n) + log_factorial(j - n) + log_factorial(j + m) + log_factorial(j - m));
    const int smin = std::max(0, m - n), smax = std::min(j + m, j - n);
    double sum = 0.0;
    for (int k = smin; k <= smax; ++k) {
        long double den = log_factorial(j + m - k) + log_factorial(k) + log_factorial(n - m + k) + log_factorial(j - n - k);
        double term = static_cast<double>(std::exp(pre - den)) * std::pow(c, 2 * j + m - n - 2 * k) * std::pow(s, n - m + 2 * k);
        sum += parity_sign(n - m + k) * term;
    }
    return sum;
}

inline MatR wigner_small_d_matrix(int j, double beta) {
    MatR d(2 * j + 1, 2 * j + 1);
    for (int n = -j; n <= j; ++n)
        for (int m = -j; m <= j; ++m) d(n + j, m + j) = wigner_small_d(j, n, m, beta);
    return d;
}

inline cplx wigner_D_entry(int j, int n, int m, const EulerZYZ& g) {
    return std::polar(1.0, -(n * g.gamma + m * g.alpha)) * wigner_small_d(j, n, m, g.beta);
}

// D^j(g), entry (n+j, m+j) = e^{-i n gamma} d^j_{nm}(beta) e^{-i m alpha}.
inline MatC wigner_D(int j, const EulerZYZ& g) {
    MatC D(2 * j + 1, 2 * j + 1);
    for (int n = -j; n <= j; ++n) {
        cplx en = std::polar(1.0, -n * g.gamma);
        for (int m = -j; m <= j; ++m)
            D(n + j, m + j) = en * wigner_small_d(j, n, m, g.beta) * std::polar(1.0, -m * g.alpha);
    }
    return D;
}

// Unitary map between Cartesian components and rank-1 spherical components
// (rows q = -1, 0, 1). C r gives the degree-1 solid harmonics of r.
inline Eigen::Matrix3cd spherical_basis() {
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::Matrix3cd C;
    C << cplx(h, 0), cplx(0, -h), 0, 0, 0, 1, cplx(-h, 0), cplx(0, -h), 0;
    return C;
}

// Alternative spherical basis: C with the sign of its first row flipped.
inline Eigen::Matrix3cd spherical_basis_flipped() {
    Eigen::Matrix3cd S = spherical_basis();
    S.row(0) *= -1.0;
    return S;
}

}  // namespace se3h
