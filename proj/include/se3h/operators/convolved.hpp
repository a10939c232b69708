#pragma once

#include <Eigen/Dense>

#include "se3h/operators/s2_ops.hpp"

namespace se3h {

enum class ConvolvedVariant { CTz2C, TzCCTz, CTxy2C, TxyCCTxy };

struct MissingCoefficient : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Coefficients (a, b) of one intermediate path jp -> jm -> j of a composition of two
// first-order translations, written as a * Laplace * delta_{j,jp} + b * Z^2_{j,jp}.
// Obtained from the operator symbol at xi = e_z, where Z^2 is diagonal in n.
struct PathCoefficients {
    double a = 0.0;
    double b = 0.0;
};

inline PathCoefficients path_coefficients(bool axial, int j, int jm, int jp) {
    const int nmax = std::min(j, jp);
    const int rows = 2 * nmax + 1;
    Eigen::VectorXd M = Eigen::VectorXd::Zero(rows), W(rows);
    for (int n = -nmax; n <= nmax; ++n) {
        double w2 = 0.0;
        for (const auto& e : z_block(2, j, jp).entries)
            if (e.n == n && e.q == 0) w2 = e.weight;
        W(n + nmax) = w2;
        if (std::abs(n) > jm) continue;
        if (axial) {
            M(n + nmax) = cg_or_zero(jp, n, jm, n, 1, 0) * cg_or_zero(jp, 0, jm, 0, 1, 0) *
                          cg_or_zero(jm, n, j, n, 1, 0) * cg_or_zero(jm, 0, j, 0, 1, 0);
        } else {
            double s = 0.0;
            for (int k : {-1, 1})
                s += cg_or_zero(jp, n, jm, n, 1, 0) * cg_or_zero(jp, 0, jm, -k, 1, k) *
                     cg_or_zero(jm, n, j, n, 1, 0) * cg_or_zero(jm, -k, j, 0, 1, -k);
            M(n + nmax) = -s;
        }
    }
    PathCoefficients pc;
    if (j == jp) {
        Eigen::MatrixXd A(rows, 2);
        A.col(0).setOnes();
        A.col(1) = W;
        Eigen::Vector2d x = A.colPivHouseholderQr().solve(M);
        if ((A * x - M).norm() > 1e-10) throw std::logic_error("path_coefficients: symbol is not of axial form");
        pc = {x(0), x(1)};
    } else {
        Eigen::Index i;
        W.cwiseAbs().maxCoeff(&i);
        pc.b = W(i) != 0.0 ? M(i) / W(i) : 0.0;
        if ((pc.b * W - M).norm() > 1e-10) throw std::logic_error("path_coefficients: symbol is not of axial form");
    }
    return pc;
}

// Convolution-wrapped quadratic forms. c is indexed by order; c_j for j <= L is needed
// for the C-outer variants, j <= L + 1 for the variants with C between the translations.
inline AxialQuadratic convolved_form(int L, const std::vector<double>& c, ConvolvedVariant v) {
    const bool inner = v == ConvolvedVariant::TzCCTz || v == ConvolvedVariant::TxyCCTxy;
    const bool axial = v == ConvolvedVariant::CTz2C || v == ConvolvedVariant::TzCCTz;
    const std::size_t need = std::size_t(L) + (inner ? 2 : 1);
    if (c.size() < need)
        throw MissingCoefficient("convolved quadratic: need " + std::to_string(need) + " coefficients, got " +
                                 std::to_string(c.size()));
    AxialQuadratic op;
    op.lap.resize(std::size_t(L) + 1);
    if (!inner) {
        const double lw = axial ? 1.0 / 3.0 : 2.0 / 3.0, bw = axial ? 2.0 / 3.0 : -2.0 / 3.0;
        for (int j = 0; j <= L; ++j) op.lap[j] = lw * c[j] * c[j];
        op.block = [c, bw](int j, int jp) { return cplx(bw * c[j] * c[jp]); };
        return op;
    }
    // dense tables over (j, jp)
    const int n = L + 1;
    std::vector<double> lap(n, 0.0), blk(std::size_t(n) * n, 0.0);
    for (int j = 0; j <= L; ++j)
        for (int jp = j - 2; jp <= std::min(L, j + 2); jp += 2)
            for (int jm = std::max(std::abs(j - 1), std::abs(jp - 1)); jm <= std::min(j, jp) + 1; ++jm) {
                if (jp < 0 || (!axial && jm == 0)) continue;
                PathCoefficients pc = path_coefficients(axial, j, jm, jp);
                const double w = c[jm] * c[jm];
                if (j == jp) lap[j] += w * pc.a;
                blk[std::size_t(j) * n + jp] += w * pc.b;
            }
    for (int j = 0; j <= L; ++j) op.lap[j] = lap[j];
    op.block = [blk, n](int j, int jp) { return cplx(blk[std::size_t(j) * n + jp]); };
    return op;
}

inline SphericalField apply_convolved_quadratic(const SphericalField& f, const std::vector<double>& c,
                                                ConvolvedVariant v) {
    return apply_axial_quadratic(f, convolved_form(f.L(), c, v));
}

}  // namespace se3h
