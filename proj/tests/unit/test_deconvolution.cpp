#include <gtest/gtest.h>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_legendre.h>

#include <Eigen/Dense>

#include "se3h/core/quadrature.hpp"
#include "se3h/deconvolution/phantom.hpp"
#include "se3h/deconvolution/solver.hpp"
#include "se3h/fields/packing.hpp"
#include "se3h/maxima/directions.hpp"
#include "support/fields.hpp"

using namespace se3h;
using namespace se3h::testutil;

namespace {

const DirectionSet& gradients64() {
    static const DirectionSet d = electrostatic_directions(64, 500, 1);
    return d;
}

// int_{-1}^{1} exp(-bD t^2) P_j(t) dt by adaptive quadrature.
double adaptive_cj(double bD, int j) {
    struct P {
        double bD;
        int j;
    } p{bD, j};
    gsl_function F;
    F.function = [](double t, void* v) {
        auto* q = static_cast<P*>(v);
        return std::exp(-q->bD * t * t) * gsl_sf_legendre_Pl(q->j, t);
    };
    F.params = &p;
    gsl_integration_workspace* w = gsl_integration_workspace_alloc(1000);
    double r = 0, err = 0;
    gsl_set_error_handler_off();
    gsl_integration_qag(&F, -1.0, 1.0, 1e-15, 0.0, 1000, GSL_INTEG_GAUSS61, w, &r, &err);
    gsl_integration_workspace_free(w);
    return r;
}

}  // namespace

TEST(Response, PolynomialKernels) {
    const FiberResponse one = response_coeffs([](double) { return 1.0; }, 4);
    EXPECT_NEAR(one.c[0], 2.0, 1e-14);
    for (int j = 1; j <= 4; ++j) EXPECT_NEAR(one.c[j], 0.0, 1e-14);
    const FiberResponse sq = response_coeffs([](double t) { return t * t; }, 4);
    EXPECT_NEAR(sq.c[0], 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(sq.c[1], 0.0, 1e-14);
    EXPECT_NEAR(sq.c[2], 4.0 / 15.0, 1e-14);
    EXPECT_NEAR(sq.c[4], 0.0, 1e-14);
}

TEST(Response, ExponentialKernelMatchesAdaptiveQuadrature) {
    for (double bD : {0.5, 1.0, 3.0}) {
        const FiberResponse r = exp_bd_response(bD, 12);
        for (int j = 0; j <= 12; ++j) EXPECT_NEAR(r.c[j], adaptive_cj(bD, j), 1e-13) << "bD " << bD << " j " << j;
    }
    // erf closed form for c_0
    EXPECT_NEAR(exp_bd_response(1.0, 0).c[0], std::sqrt(kPi) * std::erf(1.0), 1e-14);
}

TEST(Response, ApplyHIsDiagonalAndChecksBandLimit) {
    const SphericalField f = random_sh(GridSpec{{3, 2, 2}, 1.0}, 4, Parity::even_only, 4, 1, true);
    const FiberResponse r = exp_bd_response(1.0, 4);
    const SphericalField h = apply_H(f, r);
    h.for_each_channel([&](int j, int n) {
        for (std::size_t v = 0; v < f.voxels(); ++v) EXPECT_EQ(h.at(j, n, v), r.c[j] * f.at(j, n, v));
    });
    EXPECT_THROW(apply_H(f, exp_bd_response(1.0, 2)), MissingCoefficient);
    // self-adjoint in the coefficient inner product
    const SphericalField g = random_sh(f.grid(), 4, Parity::even_only, 4, 2, true);
    EXPECT_NEAR(inner(apply_H(f, r), g), inner(f, apply_H(g, r)), 1e-10);
}

// (1 / 2pi) int h(n.n') phi(n') dn' on a Gauss-Legendre x uniform-azimuth product rule.
TEST(Response, ApplyHMatchesSphereQuadrature) {
    const GridSpec g{{1, 1, 1}, 1.0};
    const SphericalField f = random_sh(g, 6, Parity::all, 6, 3, true);
    const FiberResponse r = exp_bd_response(1.0, 6);
    const SphericalField hf = apply_H(f, r);
    const GaussLegendre gl = gauss_legendre(40);
    const int nphi = 80;
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const Vec3 n = random_unit(rng);
        double acc = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double ct = gl.nodes[i], st = std::sqrt(1.0 - ct * ct);
            for (int k = 0; k < nphi; ++k) {
                const double ph = 2.0 * kPi * k / nphi;
                const Vec3 m(st * std::cos(ph), st * std::sin(ph), ct);
                acc += gl.weights[i] * (2.0 * kPi / nphi) * std::exp(-std::pow(n.dot(m), 2)) * evaluate_voxel(f, 0, m).real();
            }
        }
        EXPECT_NEAR(evaluate_voxel(hf, 0, n).real(), acc / (2.0 * kPi), 1e-10);
    }
}

TEST(Phantom, GeometryAndSignalValues) {
    // gradient set containing both in-plane axes and e_z
    const DirectionSet grads = make_direction_set(
        {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ(), Vec3(1, 1, 1), Vec3(-1, 1, 1), Vec3(1, -1, 1)});
    PhantomSpec ps;
    ps.crossing_angle = 90.0;
    const Phantom ph = simulate_crossing(ps, grads);
    EXPECT_NEAR(ph.tract1.x(), 1.0, 1e-15);
    EXPECT_NEAR(ph.tract2.y(), 1.0, 1e-15);
    const GridSpec& g = ph.grid;
    // horizontal tract covers rows 10..14
    for (int y = 0; y < 24; ++y) {
        const bool in = y >= 10 && y <= 14;
        EXPECT_EQ(ph.mask(3, y, 0), in ? 1.0 : 0.0) << y;
    }
    const std::size_t single = g.index(3, 12, 0), both = g.index(12, 12, 0), bg = g.index(2, 2, 0);
    EXPECT_EQ(ph.truth[single].size(), 1u);
    EXPECT_EQ(ph.truth[both].size(), 2u);
    EXPECT_TRUE(ph.truth[bg].empty());
    EXPECT_NEAR(ph.signal.at(0, single), std::exp(-1.0), 1e-15);  // along the fiber
    EXPECT_NEAR(ph.signal.at(1, single), 1.0, 1e-15);             // across it
    EXPECT_NEAR(ph.signal.at(0, both), 0.5 * (std::exp(-1.0) + 1.0), 1e-15);
    EXPECT_NEAR(ph.signal.at(0, bg), 0.746824132812427, 1e-12);
    EXPECT_NEAR(isotropic_signal(1.0), 0.746824132812427, 1e-14);
}

TEST(Phantom, AlphaRotatesClockwise) {
    const auto [a, b] = tract_directions(50.0, 30.0);
    EXPECT_NEAR(std::atan2(a.y(), a.x()) * 180.0 / kPi, -30.0, 1e-12);
    EXPECT_NEAR(std::acos(a.dot(b)) * 180.0 / kPi, 50.0, 1e-12);
    EXPECT_GT(a.cross(b).z(), 0.0);
    EXPECT_THROW(simulate_crossing(PhantomSpec{{24, 24, 1}, 0.0}, gradients64()), ContractError);
}

TEST(Phantom, RicianNoiseOnZeroSignalIsRayleigh) {
    SampledField<double> s(GridSpec{{100, 100, 2}, 1.0}, 1);
    std::mt19937_64 rng(5);
    const double sigma = 0.3;
    add_rician(s, sigma, rng);
    double mean = 0.0;
    for (double x : s.values) mean += x;
    mean /= double(s.values.size());
    const double want = sigma * std::sqrt(kPi / 2.0), sd = sigma * std::sqrt((4.0 - kPi) / 2.0);
    EXPECT_NEAR(mean, want, 4.0 * sd / std::sqrt(double(s.values.size())));
    SampledField<double> t(GridSpec{{2, 1, 1}, 1.0}, 1);
    t.values[0] = -0.5;
    t.values[1] = 0.25;
    add_rician(t, 0.0, rng);
    EXPECT_EQ(t.values[0], 0.5);
    EXPECT_EQ(t.values[1], 0.25);
}

class PhantomSystem : public ::testing::Test {
protected:
    void SetUp() override {
        PhantomSpec ps;
        ps.crossing_angle = 60.0;
        ph = simulate_crossing(ps, gradients64());
        std::mt19937_64 rng(7);
        add_rician(ph.signal, 0.02, rng);
    }
    Phantom ph;
};

TEST_F(PhantomSystem, RegularizerMatchesQuadraticForm) {
    const SphericalField f = random_sh(ph.grid, 8, Parity::even_only, 8, 8, true);
    SphericalField tt(ph.grid, 8, Parity::even_only, true);
    accumulate_T0T0_s2(f, 1.0, tt);
    const SphericalField t = apply_T0_s2(f);
    const double lhs = -inner(f, tt), rhs = inner(t, t);
    EXPECT_GT(rhs, 0.0);
    EXPECT_NEAR(lhs, rhs, 1e-9 * rhs);
    EXPECT_LT(max_diff(tt.data(), with_parity(apply_T0_s2(t), Parity::even_only).data()), 1e-12);
}

TEST_F(PhantomSystem, NormalOperatorIsSelfAdjointAndPositive) {
    const SolverConfig cfg;
    const FiberResponse r = exp_bd_response(1.0, 8);
    const NormalOperator A(r, ph.mask, cfg);
    const SphericalField a = random_sh(ph.grid, 8, Parity::even_only, 8, 9, true);
    const SphericalField b = random_sh(ph.grid, 8, Parity::even_only, 8, 10, true);
    SphericalField Aa(ph.grid, 8, Parity::even_only, true), Ab = Aa;
    A.apply(a, Aa);
    A.apply(b, Ab);
    EXPECT_NEAR(inner(a, Ab), inner(Aa, b), 1e-9 * std::abs(inner(a, Ab)) + 1e-9);
    EXPECT_GT(inner(a, Aa), 0.0);
}

TEST_F(PhantomSystem, ConjugateResidualIsMonotone) {
    const FodResult res = solve_fod(ph.signal, gradients64(), exp_bd_response(1.0, 8), ph.mask, SolverConfig{});
    ASSERT_EQ(res.residuals.size(), 101u);
    for (std::size_t k = 1; k < res.residuals.size(); ++k)
        EXPECT_LE(res.residuals[k], res.residuals[k - 1] * (1.0 + 1e-10)) << k;
    EXPECT_LT(res.residuals.back(), 1e-3 * res.residuals.front());
    EXPECT_EQ(res.fod.parity(), Parity::even_only);
    EXPECT_LT(real_symmetry_residual(res.fod), 1e-9);
}

TEST(Solver, KrylovMethodsSolveSmallSystems) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n;
    const int N = 12;
    Eigen::MatrixXd M(N, N);
    for (auto& x : M.reshaped()) x = n(rng);
    const Eigen::MatrixXd A = M * M.transpose() + 0.5 * Eigen::MatrixXd::Identity(N, N);
    Buffer<double> b(N);
    for (auto& x : b) x = n(rng);
    Eigen::VectorXd be = Eigen::Map<Eigen::VectorXd>(b.data(), N);
    const Eigen::VectorXd want = A.ldlt().solve(be);
    auto apply = [&](const Buffer<double>& x, Buffer<double>& out) {
        Eigen::Map<Eigen::VectorXd>(out.data(), N) = A * Eigen::Map<const Eigen::VectorXd>(x.data(), N);
    };
    auto dot = [](const Buffer<double>& a, const Buffer<double>& c) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
        return s;
    };
    for (auto m : {KrylovMethod::conjugate_residual, KrylovMethod::conjugate_gradient}) {
        Buffer<double> x(N, 0.0), r = b;
        krylov_solve(apply, dot, x, r, 60, m);
        for (int i = 0; i < N; ++i) EXPECT_NEAR(x[i], want(i), 1e-8);
    }
}

TEST(Solver, UnregularizedSingleVoxelInvertsResponse) {
    const GridSpec g{{1, 1, 1}, 1.0};
    const DirectionSet& grads = gradients64();
    SampledField<double> s(g, grads.size());
    const Vec3 u = Vec3(1, 2, 0.5).normalized();
    for (std::size_t d = 0; d < grads.size(); ++d) s.at(d, 0) = std::exp(-std::pow(grads.directions[d].dot(u), 2));
    SolverConfig cfg;
    cfg.lambda = 0.0;
    cfg.cg_iterations = 40;
    const FiberResponse r = exp_bd_response(1.0, 8);
    const FodResult res = solve_fod(s, grads, r, Volume<double>(g, 1.0), cfg);
    const SphericalField proj = project_to_sh(s, grads, 8, Parity::even_only);
    res.fod.for_each_channel(
        [&](int j, int n) { EXPECT_NEAR(std::abs(res.fod.at(j, n, 0) - proj.at(j, n, 0) / r.c[j]), 0.0, 1e-6 * 39.5); });
}

TEST(Solver, RejectsInvalidConfiguration) {
    const Phantom ph = simulate_crossing(PhantomSpec{}, gradients64());
    SolverConfig cfg;
    cfg.L = 7;
    EXPECT_THROW(solve_fod(ph.signal, gradients64(), exp_bd_response(1.0, 8), ph.mask, cfg), ContractError);
    cfg.L = 8;
    EXPECT_THROW(solve_fod(ph.signal, gradients64(), exp_bd_response(1.0, 6), ph.mask, cfg), MissingCoefficient);
    cfg.lambda = -1.0;
    EXPECT_THROW(validate(cfg), ContractError);
}

TEST(Solver, DiscretePathFitsNoiseFreeData) {
    PhantomSpec ps;
    ps.dims = {8, 8, 1};
    ps.thickness = 3;
    const DirectionSet& grads = gradients64();
    const Phantom ph = simulate_crossing(ps, grads);
    const DirectionSet dirs = electrostatic_directions(128, 200, 1);
    SolverConfig cfg;
    cfg.cg_iterations = 30;
    const DiscreteFodResult res =
        solve_fod_discrete(ph.signal, grads, [](double t) { return std::exp(-t * t); }, dirs, ph.mask, cfg);
    ASSERT_GE(res.residuals.size(), 2u);
    for (std::size_t k = 1; k < res.residuals.size(); ++k)
        EXPECT_LE(res.residuals[k], res.residuals[k - 1] * (1.0 + 1e-10));
    EXPECT_LT(res.residuals.back(), 0.05 * res.residuals.front());
}
