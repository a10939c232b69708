#include <gtest/gtest.h>

#include <numeric>

#include "se3h/hough/hough.hpp"
#include "se3h/maxima/directions.hpp"

using namespace se3h;

namespace {

std::array<int, 3> argmax(const Volume<double>& v) {
    const auto it = std::max_element(v.data.begin(), v.data.end());
    const std::size_t i = std::size_t(it - v.data.begin());
    const auto& d = v.grid.dims;
    return {int(i % std::size_t(d[0])), int(i / std::size_t(d[0]) % std::size_t(d[1])),
            int(i / (std::size_t(d[0]) * std::size_t(d[1])))};
}

// One gradient vote at p pointing along v.
SphericalField single_vote(const GridSpec& g, int L, std::array<int, 3> p, const Vec3& v) {
    GradientField gf;
    gf.m = Volume<double>(g);
    gf.v.assign(g.voxels(), Vec3::Zero());
    gf.defined.assign(g.voxels(), 0);
    const std::size_t i = g.index(p[0], p[1], p[2]);
    gf.m.data[i] = 1.0;
    gf.v[i] = v.normalized();
    gf.defined[i] = 1;
    return init_hough(gf, L);
}

double sum(const Volume<double>& v) { return std::accumulate(v.data.begin(), v.data.end(), 0.0); }

}  // namespace

TEST(Smoothing, ImpulseResponseIsNormalizedGaussian) {
    Volume<double> v(GridSpec{{21, 21, 21}, 1.0});
    v(10, 10, 10) = 1.0;
    const double s = 1.5;
    const Volume<double> out = gaussian_smooth(v, s);
    EXPECT_NEAR(sum(out), 1.0, 1e-12);
    const double r = out(12, 10, 10) / out(10, 10, 10);
    EXPECT_NEAR(r, std::exp(-4.0 / (2 * s * s)), 1e-12);
    EXPECT_NEAR(out(11, 12, 9), out(9, 8, 11), 1e-15);
    EXPECT_NEAR(out(11, 12, 10), out(12, 11, 10), 1e-15);
    EXPECT_EQ(gaussian_smooth(v, 0.0).data, v.data);
    EXPECT_THROW(gaussian_smooth(v, -1.0), ContractError);
}

TEST(Smoothing, ConstantInteriorIsPreserved) {
    Volume<double> v(GridSpec{{30, 30, 30}, 1.0}, 2.5);
    const Volume<double> out = gaussian_smooth(v, 1.0);
    EXPECT_NEAR(out(15, 15, 15), 2.5, 1e-12);
    // zero padding darkens the faces
    EXPECT_LT(out(0, 15, 15), 2.5);
}

TEST(Gradient, LinearRampIsExactInside) {
    Volume<double> v(GridSpec{{9, 9, 9}, 1.0});
    for (int z = 0; z < 9; ++z)
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 9; ++x) v(x, y, z) = 2.0 * x - 3.0 * y + 0.5 * z;
    const GradientField g = gradient_field(v);
    const Vec3 want = Vec3(2, -3, 0.5);
    const std::size_t i = v.grid.index(4, 4, 4);
    EXPECT_NEAR(g.m.data[i], want.norm(), 1e-12);
    EXPECT_LT((g.v[i] - want.normalized()).norm(), 1e-12);
    EXPECT_TRUE(g.defined[i]);
    const GradientField flat = gradient_field(Volume<double>(v.grid, 1.0));
    EXPECT_FALSE(flat.defined[i]);
    EXPECT_EQ(flat.m.data[i], 0.0);
}

TEST(Gradient, BrightBallPointsInward) {
    ShellSpec s;
    s.dims = {21, 21, 21};
    s.center = Vec3(10, 10, 10);
    s.radius = 5.0;
    s.noise_sigma = 0.0;
    s.solid = true;
    const GradientField g = gradient_field(gaussian_smooth(render_shell(s, 1), 1.0));
    for (const auto& p : {std::array<int, 3>{15, 10, 10}, {10, 5, 10}, {13, 13, 13}}) {
        const std::size_t i = s.dims[0] * (s.dims[1] * p[2] + p[1]) + p[0];
        const Vec3 out = (Vec3(p[0], p[1], p[2]) - s.center).normalized();
        EXPECT_LT(g.v[i].dot(out), -0.95);
    }
}

TEST(Hough, InitialFieldSynthesizesToScaledDelta) {
    const GridSpec g{{3, 3, 3}, 1.0};
    GradientField gf;
    gf.m = Volume<double>(g);
    gf.v.assign(g.voxels(), Vec3::Zero());
    gf.defined.assign(g.voxels(), 0);
    const Vec3 v = Vec3(0.2, -0.4, 0.9).normalized();
    gf.m.data[13] = 3.0;
    gf.v[13] = v;
    gf.defined[13] = 1;
    const SphericalField f = init_hough(gf, 6);
    const DirectionSet dirs = electrostatic_directions(200, 200, 2);
    const double peak = evaluate_voxel(f, 13, v).real();
    for (const Vec3& d : dirs.directions) EXPECT_LE(evaluate_voxel(f, 13, d).real(), peak + 1e-12);
    // undefined voxels stay empty
    EXPECT_EQ(evaluate_voxel(f, 0, v), cplx(0.0));
    // the amplitude is linear in the gradient magnitude
    gf.m.data[13] = 1.0;
    EXPECT_NEAR(evaluate_voxel(init_hough(gf, 6), 13, v).real() * 3.0, peak, 1e-12);
}

TEST(Hough, VotesTravelAgainstGradientWhenInward) {
    // a smooth blob of votes along +x; a single-voxel spike would be dominated by
    // grid-scale modes, which central differences carry backwards
    const GridSpec g{{25, 25, 25}, 1.0};
    GradientField gf;
    gf.m = Volume<double>(g);
    gf.v.assign(g.voxels(), Vec3::UnitX());
    gf.defined.assign(g.voxels(), 1);
    for (int z = 0; z < 25; ++z)
        for (int y = 0; y < 25; ++y)
            for (int x = 0; x < 25; ++x)
                gf.m(x, y, z) = std::exp(-((x - 12.0) * (x - 12.0) + (y - 12.0) * (y - 12.0) + (z - 12.0) * (z - 12.0)) / 8.0);
    const SphericalField H0 = init_hough(gf, 2);
    HoughConfig c;
    c.L = 2;
    c.rho_max = 4.0;
    c.snapshot_spacing = 1.0;
    const VotingStack in = hough_transform(H0, c);
    ASSERT_EQ(in.maps.size(), 5u);
    EXPECT_EQ(in.rho.back(), 4.0);
    EXPECT_EQ(argmax(in.maps[0]), (std::array<int, 3>{12, 12, 12}));
    const auto p = argmax(in.maps.back());
    EXPECT_LT(p[0], 12);
    EXPECT_EQ(p[1], 12);
    EXPECT_EQ(p[2], 12);
    c.orientation = HoughOrientation::outward;
    const auto q = argmax(hough_transform(H0, c).maps.back());
    EXPECT_EQ(q[0] - 12, 12 - p[0]);
}

TEST(Hough, TransformIsLinear) {
    const GridSpec g{{9, 9, 9}, 1.0};
    const SphericalField a = single_vote(g, 2, {3, 4, 4}, Vec3(1, 1, 0));
    const SphericalField b = single_vote(g, 2, {5, 4, 5}, Vec3(0, -1, 1));
    SphericalField ab = a;
    axpy(ab, 2.0, b);
    HoughConfig c;
    c.L = 2;
    c.rho_max = 1.0;
    const VotingStack sa = hough_transform(a, c), sb = hough_transform(b, c), sab = hough_transform(ab, c);
    for (std::size_t k = 0; k < sab.maps.size(); ++k)
        for (std::size_t i = 0; i < g.voxels(); ++i)
            EXPECT_NEAR(sab.maps[k].data[i], sa.maps[k].data[i] + 2.0 * sb.maps[k].data[i], 1e-12);
}

TEST(Hough, TranslationCovariantAwayFromBoundary) {
    const GridSpec g{{25, 25, 25}, 1.0};
    HoughConfig c;
    c.L = 2;
    c.rho_max = 1.0;
    const Vec3 v(1, 2, -1);
    const VotingStack s0 = hough_transform(single_vote(g, 2, {11, 12, 12}, v), c);
    const VotingStack s1 = hough_transform(single_vote(g, 2, {13, 11, 12}, v), c);
    // each step reaches at most 2 voxels, so 10 steps stay inside the box
    for (int z = 0; z < 25; ++z)
        for (int y = 1; y < 25; ++y)
            for (int x = 0; x + 2 < 25; ++x)
                EXPECT_NEAR(s0.maps.back()(x, y, z), s1.maps.back()(x + 2, y - 1, z), 1e-14);
}

TEST(Hough, FindCentersThresholdAndSuppression) {
    const GridSpec g{{16, 16, 16}, 1.0};
    VotingStack st;
    for (int k = 0; k < 3; ++k) {
        st.rho.push_back(k * 0.5);
        st.maps.emplace_back(g);
    }
    st.maps[1](5, 5, 5) = 10.0;
    st.maps[2](7, 5, 5) = 8.0;   // within the suppression radius of the stronger one
    st.maps[0](12, 12, 12) = 6.0;
    st.maps[1](2, 13, 2) = 4.0;  // below half the maximum
    const auto c = find_centers(st, 0.5, 3.0);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].center, (std::array<int, 3>{5, 5, 5}));
    EXPECT_EQ(c[0].rho, 0.5);
    EXPECT_EQ(c[0].score, 10.0);
    EXPECT_EQ(c[1].center, (std::array<int, 3>{12, 12, 12}));
    EXPECT_EQ(find_centers(st, 0.3, 0.0).size(), 4u);
    // an empty or non-positive stack has no centers
    st.maps.assign(3, Volume<double>(g, -1.0));
    EXPECT_TRUE(find_centers(st, 0.5, 3.0).empty());
}

TEST(Hough, RejectsInvalidConfiguration) {
    HoughConfig c;
    c.min_score = 1.5;
    EXPECT_THROW(validate(c), ContractError);
    c = HoughConfig{};
    c.drho = 0.0;
    EXPECT_THROW(validate(c), ContractError);
    c = HoughConfig{};
    c.L = -1;
    EXPECT_THROW(validate(c), ContractError);
    EXPECT_NO_THROW(validate(HoughConfig{}));
}

TEST(Shell, RenderGeometry) {
    ShellSpec s;
    s.noise_sigma = 0.0;
    s.delete_fraction = 0.0;
    const Volume<double> full = render_shell(s, 3);
    std::size_t on = 0;
    for (int z = 0; z < 32; ++z)
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x)
                if (full(x, y, z) == 1.0) {
                    ++on;
                    EXPECT_LE(std::abs((Vec3(x, y, z) - s.center).norm() - s.radius), 0.5);
                }
    // shell of thickness one: about 4 pi r^2 voxels
    EXPECT_NEAR(double(on) / (4 * kPi * 49), 1.0, 0.1);
    s.delete_fraction = 0.5;
    const double kept = sum(render_shell(s, 3)) / double(on);
    EXPECT_GT(kept, 0.4);
    EXPECT_LT(kept, 0.6);
    s.delete_fraction = 1.0;
    EXPECT_EQ(sum(render_shell(s, 3)), 0.0);
}

TEST(Shell, NoiseAndDeterminism) {
    ShellSpec s;
    s.radius = 0.1;
    const Volume<double> a = render_shell(s, 11), b = render_shell(s, 11);
    EXPECT_EQ(a.data, b.data);
    double m = 0, m2 = 0;
    for (double v : a.data) {
        m += v;
        m2 += v * v;
    }
    const double n = double(a.data.size());
    EXPECT_NEAR(m / n, 0.0, 0.01);
    EXPECT_NEAR(std::sqrt(m2 / n - (m / n) * (m / n)), 0.3, 0.01);
}

TEST(Shell, RotationRotatesTheDeletionPattern) {
    ShellSpec s;
    s.noise_sigma = 0.0;
    s.center = Vec3(16, 16, 16);
    const Volume<double> a = render_shell(s, 5);
    s.rotation = Eigen::AngleAxisd(kPi / 2, Vec3::UnitZ()).toRotationMatrix();
    const Volume<double> b = render_shell(s, 5);
    // quarter turn about z maps lattice points onto lattice points: (x, y) -> (-y, x)
    for (int z = 0; z < 32; ++z)
        for (int y = 1; y < 32; ++y)
            for (int x = 1; x < 32; ++x) {
                const int xr = 32 - y, yr = x;
                if (xr < 32 && yr < 32) EXPECT_EQ(b(xr, yr, z), a(x, y, z));
            }
}
