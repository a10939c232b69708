#include <gtest/gtest.h>

#include <sstream>

#include "se3h/core/wigner.hpp"
#include "se3h/fields/packing.hpp"
#include "se3h/fields/projection.hpp"
#include "se3h/fields/rotation.hpp"
#include "se3h/fields/shv_io.hpp"
#include "se3h/maxima/directions.hpp"
#include "support/random.hpp"

using namespace se3h;

namespace {

const DirectionSet& dirs512() {
    static const DirectionSet d = electrostatic_directions(512, 300, 1);
    return d;
}

// Random field whose angular functions are real-valued.
SphericalField random_real_field(const GridSpec& g, int L, Parity p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SphericalField f(g, L, p, true);
    f.for_each_channel([&](int j, int n) {
        if (n < 0) return;
        auto pos = f.channel(j, n);
        auto neg = f.channel(j, -n);
        for (std::size_t v = 0; v < pos.size(); ++v) {
            cplx c = testutil::random_complex(rng);
            if (n == 0) c = c.real();
            pos[v] = c;
            neg[v] = double(parity_sign(n)) * std::conj(c);
        }
    });
    return f;
}

}  // namespace

TEST(Grid, ChannelCounts) {
    EXPECT_EQ(sh_channel_count(8, Parity::all), 81u);
    EXPECT_EQ(sh_channel_count(8, Parity::even_only), 45u);
    EXPECT_EQ(sh_channel_count(0, Parity::even_only), 1u);
    EXPECT_EQ(wigner_channel_count(2), 1u + 9u + 25u);
    std::size_t c = 0;
    for (int j = 0; j <= 8; j += 2)
        for (int n = -j; n <= j; ++n) EXPECT_EQ(sh_channel_index(j, n, Parity::even_only), c++);
    c = 0;
    for (int j = 0; j <= 3; ++j)
        for (int n = -j; n <= j; ++n)
            for (int m = -j; m <= j; ++m) EXPECT_EQ(wigner_channel_index(j, n, m), c++);
}

TEST(DirectionSetTest, VoronoiGraphIsSymmetricAndConnected) {
    const DirectionSet& d = dirs512();
    ASSERT_EQ(d.size(), 512u);
    std::vector<int> seen(d.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int k : d.neighbors[i]) {
            EXPECT_NE(std::find(d.neighbors[k].begin(), d.neighbors[k].end(), i), d.neighbors[k].end());
            if (!seen[k]) {
                seen[k] = 1;
                stack.push_back(k);
            }
        }
    }
    EXPECT_EQ(std::count(seen.begin(), seen.end(), 1), 512);
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_NEAR(d.directions[i].norm(), 1.0, 1e-14);
        EXPECT_GE(d.neighbors[i].size(), 4u);
        EXPECT_GT(d.cell_radius[i], 0.0);
    }
    // Euler: a triangulated sphere with V vertices has 3V - 6 edges
    std::size_t deg = 0;
    for (const auto& nb : d.neighbors) deg += nb.size();
    EXPECT_EQ(deg / 2, 3 * d.size() - 6);
}

TEST(Projection, PureHarmonicsAndConstant) {
    GridSpec g{{1, 1, 1}, 1.0};
    const DirectionSet& d = dirs512();
    SHProjector proj(d.directions, 4, Parity::all);
    // constant 1 on the sphere: f^0_0 = 8 pi^2
    SampledField<double> one(g, d.size());
    std::fill(one.values.begin(), one.values.end(), 1.0);
    SphericalField f = proj.project(one);
    f.for_each_channel([&](int j, int n) {
        if (j == 0) EXPECT_NEAR(std::abs(f.at(j, n, 0) - kHaarMass), 0.0, 1e-9);
        else EXPECT_NEAR(std::abs(f.at(j, n, 0)), 0.0, 1e-9);
    });
    // samples of Y^2_1
    SampledField<cplx> y(g, d.size());
    for (std::size_t i = 0; i < d.size(); ++i) y.at(i, 0) = sh_eval(2, 1, d.directions[i]);
    SphericalField fy = proj.project(y);
    fy.for_each_channel([&](int j, int n) {
        if (j == 2 && n == 1) EXPECT_NEAR(std::abs(fy.at(j, n, 0) - kHaarMass / 5.0), 0.0, 1e-9);
        else EXPECT_NEAR(std::abs(fy.at(j, n, 0)), 0.0, 1e-9);
    });
}

TEST(Projection, RoundTripBandLimited) {
    GridSpec g{{3, 2, 1}, 1.0};
    for (int L : {4, 8}) {
        SphericalField f(g, L, Parity::all);
        std::mt19937_64 rng(L);
        for (auto& c : f.data()) c = testutil::random_complex(rng);
        SHProjector proj(dirs512().directions, L, Parity::all);
        SphericalField back = proj.project(proj.evaluate(f));
        double err = 0;
        for (std::size_t i = 0; i < f.data().size(); ++i) err = std::max(err, std::abs(back.data()[i] - f.data()[i]));
        EXPECT_LT(err, 1e-8) << "L=" << L;
    }
}

TEST(Projection, UnderdeterminedThrows) {
    std::vector<Vec3> few = fibonacci_sphere(20);
    EXPECT_THROW(SHProjector(few, 4, Parity::all), UnderdeterminedError);
    EXPECT_NO_THROW(SHProjector(few, 4, Parity::even_only));
}

TEST(Projection, OneHotSamplePeaksAtItsDirection) {
    GridSpec g{{1, 1, 1}, 1.0};
    DirectionSet d = electrostatic_directions(100, 300, 3);
    SampledField<double> s(g, d.size());
    s.at(17, 0) = 1.0;
    SphericalField f = SHProjector(d.directions, 6, Parity::all).project(s);
    SampledField<cplx> back = evaluate_on_directions(f, d);
    std::size_t best = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (back.at(i, 0).real() > back.at(best, 0).real()) best = i;
    EXPECT_EQ(best, 17u);
}

TEST(Packing, SizesAndRoundTrip) {
    EXPECT_EQ(PackedField::packed_channel_count(8), 25u);
    EXPECT_EQ(PackedField::packed_channel_count(0), 1u);
    for (int L = 0; L <= 12; L += 2) EXPECT_EQ(PackedField::packed_channel_count(L), std::size_t((L + 2) * (L + 2) / 4));
    GridSpec g{{4, 3, 2}, 1.0};
    SphericalField f = random_real_field(g, 8, Parity::even_only, 5);
    PackedField p = pack_real_even(f);
    EXPECT_EQ(p.data.size(), 25u * g.voxels());
    SphericalField u = unpack_real_even(p);
    EXPECT_TRUE(std::equal(f.data().begin(), f.data().end(), u.data().begin()));
}

TEST(Packing, FlagViolations) {
    GridSpec g{{2, 1, 1}, 1.0};
    SphericalField f = random_real_field(g, 4, Parity::even_only, 1);
    f.at(2, -1, 0) += cplx(0.1, 0.0);
    EXPECT_THROW(pack_real_even(f), FlagViolation);
    SphericalField h(g, 4, Parity::all, true);
    EXPECT_THROW(pack_real_even(h), FlagViolation);
}

TEST(Packing, PayloadOfLargeVolume) {
    ShvHeader h;
    h.dims = {96, 96, 60};
    h.L = 8;
    h.flags = shv_flags::even_only | shv_flags::real_packed;
    EXPECT_EQ(h.payload_bytes(), 96ull * 96 * 60 * 50 * 8);
    EXPECT_EQ(h.payload_bytes(), 221184000ull);
}

TEST(Rotation, IdentityScalarAndNorm) {
    GridSpec g{{2, 2, 1}, 1.0};
    SphericalField f = random_real_field(g, 4, Parity::all, 2);
    SphericalField id = rotate_coeffs(f, {});
    for (std::size_t i = 0; i < f.data().size(); ++i) EXPECT_NEAR(std::abs(id.data()[i] - f.data()[i]), 0.0, 1e-14);
    EulerZYZ rot{0.4, 1.3, -0.7};
    SphericalField r = rotate_coeffs(f, rot);
    for (std::size_t v = 0; v < g.voxels(); ++v) {
        EXPECT_NEAR(std::abs(r.at(0, 0, v) - f.at(0, 0, v)), 0.0, 1e-14);
        for (int j = 0; j <= 4; ++j) {
            double a = 0, b = 0;
            for (int n = -j; n <= j; ++n) {
                a += std::norm(f.at(j, n, v));
                b += std::norm(r.at(j, n, v));
            }
            EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, a));
        }
    }
    EXPECT_LT(real_symmetry_residual(r), 1e-12);
}

TEST(Rotation, EvaluationCovariance) {
    GridSpec g{{1, 1, 1}, 1.0};
    SphericalField f = random_real_field(g, 5, Parity::all, 4);
    EulerZYZ rot{1.1, 0.6, 2.4};
    SphericalField r = rotate_coeffs(f, rot);
    Mat3 R = rotation_matrix(rot);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 10; ++t) {
        Vec3 n = testutil::random_unit(rng);
        EXPECT_NEAR(std::abs(evaluate_voxel(r, 0, R * n) - evaluate_voxel(f, 0, n)), 0.0, 1e-10);
    }
}

TEST(Rotation, DeltaAtZMovesToX) {
    GridSpec g{{1, 1, 1}, 1.0};
    const int L = 8;
    SphericalField f(g, L, Parity::all, true);
    for (int j = 0; j <= L; ++j) f.at(j, 0, 0) = 2.0 * kPi;  // band-limited delta at e_z
    SphericalField r = rotate_coeffs(f, {0.0, kPi / 2, 0.0});
    const DirectionSet& d = dirs512();
    SampledField<cplx> s = evaluate_on_directions(r, d);
    std::size_t best = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (s.at(i, 0).real() > s.at(best, 0).real()) best = i;
    EXPECT_GT(d.directions[best].x(), std::cos(10.0 * kPi / 180.0));
}

TEST(ShvIo, RoundTripAllKinds) {
    GridSpec g{{3, 2, 2}, 1.5};
    SphericalField f = random_real_field(g, 4, Parity::even_only, 6);
    WignerField w(g, 2);
    std::mt19937_64 rng(1);
    for (auto& c : w.data()) c = testutil::random_complex(rng);
    std::stringstream ss;
    write_shv(ss, f);
    write_shv(ss, pack_real_even(f));
    write_shv(ss, w);
    std::string bytes = ss.str();
    EXPECT_EQ(bytes.substr(0, 4), "SHV1");
    EXPECT_EQ(bytes.size(), 3 * ShvHeader::bytes + (15 + 9 + 35) * g.voxels() * 16);
    ShvHeader h;
    ASSERT_TRUE(read_shv_header(ss, h));
    EXPECT_EQ(h.flags, shv_flags::even_only);
    auto a = std::get<SphericalField>(read_shv_record(ss, h));
    EXPECT_TRUE(a.data() == f.data());
    EXPECT_EQ(a.grid(), g);
    ASSERT_TRUE(read_shv_header(ss, h));
    EXPECT_EQ(h.flags, shv_flags::even_only | shv_flags::real_packed);
    auto b = std::get<PackedField>(read_shv_record(ss, h));
    EXPECT_TRUE(unpack_real_even(b).data() == f.data());
    ASSERT_TRUE(read_shv_header(ss, h));
    auto c = std::get<WignerField>(read_shv_record(ss, h));
    EXPECT_TRUE(c.data() == w.data());
    EXPECT_FALSE(read_shv_header(ss, h));
}

TEST(ShvIo, BadMagic) {
    std::stringstream ss("XXXX0000000000000000000000000000");
    ShvHeader h;
    EXPECT_THROW(read_shv_header(ss, h), IoError);
}
