#pragma once

#include <cmath>
#include <vector>

#include "se3h/deconvolution/response.hpp"
#include "se3h/fields/direction_set.hpp"
#include "se3h/fields/field_ops.hpp"
#include "se3h/fields/projection.hpp"
#include "se3h/operators/s2_ops.hpp"

namespace se3h {

enum class KrylovMethod {
    conjugate_residual,  // minimizes ||r|| over the Krylov space, so the residual never grows
    conjugate_gradient,
};

struct SolverConfig {
    double lambda = 0.005;
    double lambda_mask = 1.0;
    int cg_iterations = 100;
    int L = 8;
    KrylovMethod method = KrylovMethod::conjugate_residual;
};

inline void validate(const SolverConfig& c) {
    require(c.lambda >= 0.0 && std::isfinite(c.lambda), "solver: lambda must be >= 0");
    require(c.lambda_mask >= 0.0 && std::isfinite(c.lambda_mask), "solver: lambda_mask must be >= 0");
    require(c.cg_iterations >= 0, "solver: cg_iterations must be >= 0");
    require(c.L >= 0 && c.L % 2 == 0, "solver: L must be even and >= 0");
}

// Normal-equation operator (H^T H - lambda T0 T0 + lambda_mask (1 - w)) on real even fields.
class NormalOperator {
public:
    NormalOperator(const FiberResponse& r, const Volume<double>& mask, const SolverConfig& cfg)
        : resp_(r), mask_(mask), cfg_(cfg) {
        if (r.L() < cfg.L) throw MissingCoefficient("solver: response does not cover the band limit");
        c2_.resize(std::size_t(cfg.L) + 1);
        for (int j = 0; j <= cfg.L; ++j) c2_[j] = r.c[j] * r.c[j];
    }

    void apply(const SphericalField& f, SphericalField& out) const {
        const std::size_t nv = f.voxels();
        f.for_each_channel([&](int j, int n) {
            auto s = f.channel(j, n);
            auto d = out.channel(j, n);
            for (std::size_t v = 0; v < nv; ++v) d[v] = (c2_[j] + cfg_.lambda_mask * (1.0 - mask_.data[v])) * s[v];
        });
        if (cfg_.lambda != 0.0) accumulate_T0T0_s2(f, -cfg_.lambda, out);
    }

private:
    const FiberResponse& resp_;
    const Volume<double>& mask_;
    SolverConfig cfg_;
    std::vector<double> c2_;
};

struct FodResult {
    SphericalField fod;
    std::vector<double> residuals;  // ||r_k|| for k = 0..iterations
};

namespace detail {

inline Buffer<cplx>& elems(SphericalField& f) { return f.data(); }
inline const Buffer<cplx>& elems(const SphericalField& f) { return f.data(); }
inline Buffer<double>& elems(Buffer<double>& b) { return b; }
inline const Buffer<double>& elems(const Buffer<double>& b) { return b; }

template <class V>
void update(V& y, double a, const V& x) {
    auto& yd = elems(y);
    const auto& xd = elems(x);
    for (std::size_t i = 0; i < yd.size(); ++i) yd[i] += a * xd[i];
}

// p = r + b p
template <class V>
void recombine(V& p, const V& r, double b) {
    auto& pd = elems(p);
    const auto& rd = elems(r);
    for (std::size_t i = 0; i < pd.size(); ++i) pd[i] = rd[i] + b * pd[i];
}

}  // namespace detail

// Krylov iteration for a self-adjoint positive semidefinite A in the inner product `dot`.
// On entry r = b - A x. Returns ||r_k||; stops early on exact convergence or breakdown and
// throws DivergenceError when the residual exceeds 10x its running minimum.
template <class V, class Apply, class Dot>
std::vector<double> krylov_solve(const Apply& A, const Dot& dot, V& x, V& r, int iterations, KrylovMethod method) {
    std::vector<double> hist{std::sqrt(dot(r, r))};
    const double r0 = hist[0], tiny = 1e-15 * r0;
    double best = r0;
    auto record = [&](int k) {
        const double rn = std::sqrt(dot(r, r));
        hist.push_back(rn);
        if (!std::isfinite(rn) || rn > 10.0 * best)
            throw DivergenceError("krylov solver: residual diverged at iteration " + std::to_string(k), k);
        best = std::min(best, rn);
        return rn;
    };
    if (r0 == 0.0 || iterations == 0) return hist;
    V p = r, Ap = r;
    if (method == KrylovMethod::conjugate_gradient) {
        double rr = r0 * r0;
        for (int k = 1; k <= iterations; ++k) {
            A(p, Ap);
            const double pAp = dot(p, Ap);
            if (!(pAp > 0.0)) break;
            const double a = rr / pAp;
            detail::update(x, a, p);
            detail::update(r, -a, Ap);
            const double rn = record(k);
            if (rn <= tiny) break;
            const double rr_new = rn * rn;
            detail::recombine(p, r, rr_new / rr);
            rr = rr_new;
        }
        return hist;
    }
    V Ar = r;
    A(r, Ar);
    Ap = Ar;
    double rAr = dot(r, Ar);
    for (int k = 1; k <= iterations; ++k) {
        const double ApAp = dot(Ap, Ap);
        if (!(ApAp > 0.0) || !(rAr > 0.0)) break;
        // exact line minimization of ||r - a Ap||; equals rAr / ApAp in exact arithmetic
        const double a = dot(r, Ap) / ApAp;
        detail::update(x, a, p);
        detail::update(r, -a, Ap);
        if (record(k) <= tiny) break;
        A(r, Ar);
        const double rAr_new = dot(r, Ar);
        const double b = rAr_new / rAr;
        rAr = rAr_new;
        detail::recombine(p, r, b);
        detail::recombine(Ap, Ar, b);
    }
    return hist;
}

// Even-order real FOD from signal samples on the gradient directions.
inline FodResult solve_fod(const SampledField<double>& signal, const DirectionSet& gradients, const FiberResponse& resp,
                           const Volume<double>& mask, const SolverConfig& cfg) {
    validate(cfg);
    require(mask.grid == signal.grid, "solve_fod: mask grid differs from signal grid");
    if (resp.c.empty() || resp.c[0] == 0.0) throw ContractError("solve_fod: response c_0 must be non-zero");
    FodResult out;
    NormalOperator A(resp, mask, cfg);
    SphericalField r = [&] {
        SphericalField s = project_to_sh(signal, gradients, cfg.L, Parity::even_only);
        return apply_H(s, resp);
    }();
    out.fod = SphericalField(signal.grid, cfg.L, Parity::even_only, true);
    out.residuals = krylov_solve(
        [&](const SphericalField& f, SphericalField& o) { A.apply(f, o); },
        [](const SphericalField& a, const SphericalField& b) { return inner(a, b); }, out.fod, r, cfg.cg_iterations,
        cfg.method);
    return out;
}

// Discrete-sphere counterpart: FOD values on a direction set, H by direct kernel quadrature,
// T0 as a central-difference directional derivative per direction. Used as an oracle and for
// the memory comparison. Objective (up to a common factor):
//   (4pi/G) sum_g (Hf - S)^2 + (4pi/D) sum_d [lambda (n_d.grad f_d)^2 + lambda_mask (1 - w) f_d^2].
struct DiscreteFodResult {
    SampledField<double> fod;
    std::vector<double> residuals;
};

inline DiscreteFodResult solve_fod_discrete(const SampledField<double>& signal, const DirectionSet& gradients,
                                            const std::function<double(double)>& h, const DirectionSet& fod_dirs,
                                            const Volume<double>& mask, const SolverConfig& cfg) {
    validate(cfg);
    check_stencil_grid(signal.grid);
    const GridSpec& grid = signal.grid;
    const std::size_t G = gradients.size(), D = fod_dirs.size(), nv = grid.voxels();
    // (Hf)(n_g) = (1/2pi) sum_d h(n_g.n_d) f_d (4pi/D), matching the diagonal c_j convention.
    Buffer<double> Hm(G * D);
    for (std::size_t g = 0; g < G; ++g)
        for (std::size_t d = 0; d < D; ++d)
            Hm[g * D + d] = h(gradients.directions[g].dot(fod_dirs.directions[d])) * 2.0 / double(D);
    const double wdata = double(D) / double(G);

    Buffer<double> tmpG(G * nv), scratch(nv), scratch2(nv);
    auto apply_HtH = [&](const Buffer<double>& f, Buffer<double>& out, double s) {
        std::fill(tmpG.begin(), tmpG.end(), 0.0);
        for (std::size_t g = 0; g < G; ++g)
            for (std::size_t d = 0; d < D; ++d) {
                const double w = Hm[g * D + d];
                const double* src = f.data() + d * nv;
                double* dst = tmpG.data() + g * nv;
                for (std::size_t v = 0; v < nv; ++v) dst[v] += w * src[v];
            }
        for (std::size_t d = 0; d < D; ++d)
            for (std::size_t g = 0; g < G; ++g) {
                const double w = s * Hm[g * D + d];
                const double* src = tmpG.data() + g * nv;
                double* dst = out.data() + d * nv;
                for (std::size_t v = 0; v < nv; ++v) dst[v] += w * src[v];
            }
    };
    auto directional = [&](const Vec3& n, const double* in, Buffer<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (int a = 0; a < 3; ++a)
            if (n[a] != 0.0) fd_accumulate(kGradientKernels[a], grid, in, out.data(), n[a]);
    };
    auto apply_A = [&](const Buffer<double>& f, Buffer<double>& out) {
        for (std::size_t d = 0; d < D; ++d)
            for (std::size_t v = 0; v < nv; ++v)
                out[d * nv + v] = cfg.lambda_mask * (1.0 - mask.data[v]) * f[d * nv + v];
        apply_HtH(f, out, wdata);
        if (cfg.lambda == 0.0) return;
        for (std::size_t d = 0; d < D; ++d) {
            const Vec3& n = fod_dirs.directions[d];
            directional(n, f.data() + d * nv, scratch);
            directional(n, scratch.data(), scratch2);
            double* dst = out.data() + d * nv;
            for (std::size_t v = 0; v < nv; ++v) dst[v] -= cfg.lambda * scratch2[v];
        }
    };

    DiscreteFodResult res;
    res.fod = SampledField<double>(grid, D);
    Buffer<double>& x = res.fod.values;
    Buffer<double> r(D * nv, 0.0);
    {
        // r = b = wdata H^T S
        for (std::size_t d = 0; d < D; ++d)
            for (std::size_t g = 0; g < G; ++g) {
                const double w = wdata * Hm[g * D + d];
                const double* src = signal.values.data() + g * nv;
                double* dst = r.data() + d * nv;
                for (std::size_t v = 0; v < nv; ++v) dst[v] += w * src[v];
            }
    }
    auto dot = [](const Buffer<double>& a, const Buffer<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    res.residuals = krylov_solve(apply_A, dot, x, r, cfg.cg_iterations, cfg.method);
    return res;
}

}  // namespace se3h
