#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <vector>

#include "se3h/core/spherical_harmonics.hpp"
#include "se3h/evolution/evolution.hpp"
#include "se3h/fields/grid.hpp"
#include "se3h/operators/stencil.hpp"

namespace se3h {

// Separable Gaussian, kernel truncated at 4 sigma and normalized, zero padded.
inline Volume<double> gaussian_smooth(const Volume<double>& in, double sigma) {
    require(sigma >= 0.0 && std::isfinite(sigma), "gaussian_smooth: sigma must be >= 0");
    if (sigma == 0.0) return in;
    const double s = sigma / in.grid.voxel_size;
    const int r = int(std::ceil(4.0 * s));
    std::vector<double> k(std::size_t(2 * r + 1));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) sum += k[std::size_t(i + r)] = std::exp(-0.5 * i * i / (s * s));
    for (auto& w : k) w /= sum;
    Volume<double> a = in, b(in.grid);
    const auto& d = in.grid.dims;
    for (int axis = 0; axis < 3; ++axis) {
        if (d[axis] == 1) continue;
        std::fill(b.data.begin(), b.data.end(), 0.0);
        for (int z = 0; z < d[2]; ++z)
            for (int y = 0; y < d[1]; ++y)
                for (int x = 0; x < d[0]; ++x) {
                    int p[3] = {x, y, z};
                    double acc = 0.0;
                    for (int i = -r; i <= r; ++i) {
                        int q[3] = {x, y, z};
                        q[axis] = p[axis] + i;
                        if (q[axis] < 0 || q[axis] >= d[axis]) continue;
                        acc += k[std::size_t(i + r)] * a(q[0], q[1], q[2]);
                    }
                    b(x, y, z) = acc;
                }
        std::swap(a, b);
    }
    return a;
}

struct GradientField {
    Volume<double> m;
    std::vector<Vec3> v;
    std::vector<unsigned char> defined;
};

inline GradientField gradient_field(const Volume<double>& vol) {
    check_stencil_grid(vol.grid);
    GradientField gf;
    const std::size_t nv = vol.grid.voxels();
    Volume<double> g[3] = {fd_apply(FdKernel::central_x, vol), fd_apply(FdKernel::central_y, vol),
                           fd_apply(FdKernel::central_z, vol)};
    gf.m = Volume<double>(vol.grid);
    gf.v.assign(nv, Vec3::Zero());
    gf.defined.assign(nv, 0);
    for (std::size_t i = 0; i < nv; ++i) {
        const Vec3 gv(g[0].data[i], g[1].data[i], g[2].data[i]);
        const double m = gv.norm();
        gf.m.data[i] = m;
        if (m > 1e-12) {
            gf.v[i] = gv / m;
            gf.defined[i] = 1;
        }
    }
    return gf;
}

// m(r) times the band-limited delta at v(r); synthesis peaks at v(r).
inline SphericalField init_hough(const GradientField& gf, int L) {
    SphericalField f(gf.m.grid, L, Parity::all, true);
    for (std::size_t i = 0; i < gf.v.size(); ++i) {
        if (!gf.defined[i]) continue;
        const std::vector<cplx> y = sh_all(L, gf.v[i]);
        f.for_each_channel([&](int j, int n) {
            f.at(j, n, i) = gf.m.data[i] * 2.0 * kPi * std::conj(y[std::size_t(j * j + j + n)]);
        });
    }
    return f;
}

enum class HoughOrientation { outward, inward };

struct HoughConfig {
    int L = 4;
    double drho = 0.1;
    double rho_max = 10.0;
    HoughOrientation orientation = HoughOrientation::inward;
    double diffusion_eps = 0.1;
    double sigma = 1.0;
    double snapshot_spacing = 0.5;
    double min_score = 0.5;  // fraction of the stack maximum
    double nms_radius = 3.0;
};

inline void validate(const HoughConfig& c) {
    require(c.L >= 0, "hough: L must be >= 0");
    require(c.drho > 0.0 && std::isfinite(c.drho), "hough: drho must be positive");
    require(c.rho_max > 0.0 && std::isfinite(c.rho_max), "hough: rho_max must be positive");
    require(c.diffusion_eps >= 0.0, "hough: diffusion_eps must be >= 0");
    require(c.sigma >= 0.0, "hough: sigma must be >= 0");
    require(c.snapshot_spacing > 0.0, "hough: snapshot spacing must be positive");
    require(c.min_score >= 0.0 && c.min_score <= 1.0, "hough: min_score is a fraction in [0, 1]");
    require(c.nms_radius >= 0.0, "hough: nms_radius must be >= 0");
}

struct VotingStack {
    std::vector<double> rho;
    std::vector<Volume<double>> maps;
};

inline GeneratorSpec hough_generator(const HoughConfig& c) {
    const double s = c.orientation == HoughOrientation::inward ? 1.0 : -1.0;
    return GeneratorSpec{{{"T0", s}, {"T0_sq", c.diffusion_eps}}, {}};
}

inline Volume<double> voting_map(const SphericalField& H) {
    Volume<double> m(H.grid());
    auto c = H.channel(0, 0);
    for (std::size_t i = 0; i < c.size(); ++i) m.data[i] = c[i].real();
    return m;
}

// Euler transport rho -> rho + drho with A = +-T0 + eps T0^2; the voting map is Re f^0 at
// multiples of the snapshot spacing (and rho = 0).
inline VotingStack hough_transform(const SphericalField& H0, const HoughConfig& cfg) {
    validate(cfg);
    const int steps = int(std::lround(cfg.rho_max / cfg.drho));
    const int stride = std::max(1, int(std::lround(cfg.snapshot_spacing / cfg.drho)));
    VotingStack st;
    st.rho.push_back(0.0);
    st.maps.push_back(voting_map(H0));
    EvolutionConfig ec{cfg.drho, steps, hough_generator(cfg), 0};
    euler_integrate(H0, ec, [&](int s, const SphericalField& H) {
        if (s % stride == 0) {
            st.rho.push_back(s * cfg.drho);
            st.maps.push_back(voting_map(H));
        }
    });
    return st;
}

struct SphereCandidate {
    std::array<int, 3> center{};
    double rho = 0.0;
    double score = 0.0;
};

// Local maxima over (x, y, z, rho) above min_score * global max, then greedy spatial
// non-maximum suppression.
inline std::vector<SphereCandidate> find_centers(const VotingStack& st, double min_score, double nms_radius) {
    std::vector<SphereCandidate> cand;
    if (st.maps.empty()) return cand;
    double gmax = 0.0;
    for (const auto& m : st.maps)
        for (double v : m.data) gmax = std::max(gmax, v);
    if (!(gmax > 0.0)) return cand;
    const double thr = min_score * gmax;
    const auto& d = st.maps[0].grid.dims;
    const int K = int(st.maps.size());
    for (int k = 0; k < K; ++k)
        for (int z = 0; z < d[2]; ++z)
            for (int y = 0; y < d[1]; ++y)
                for (int x = 0; x < d[0]; ++x) {
                    const double v = st.maps[k](x, y, z);
                    if (!(v > 0.0) || v < thr) continue;
                    bool is_max = true;
                    for (int dk = -1; dk <= 1 && is_max; ++dk)
                        for (int dz = -1; dz <= 1 && is_max; ++dz)
                            for (int dy = -1; dy <= 1 && is_max; ++dy)
                                for (int dx = -1; dx <= 1 && is_max; ++dx) {
                                    if (!dk && !dz && !dy && !dx) continue;
                                    const int kk = k + dk;
                                    if (kk < 0 || kk >= K || !st.maps[0].grid.contains(x + dx, y + dy, z + dz)) continue;
                                    const double w = st.maps[kk](x + dx, y + dy, z + dz);
                                    // ties resolved toward the lexicographically first position
                                    if (w > v || (w == v && std::make_tuple(dk, dz, dy, dx) < std::make_tuple(0, 0, 0, 0)))
                                        is_max = false;
                                }
                    if (is_max) cand.push_back({{x, y, z}, st.rho[k], v});
                }
    std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
    std::vector<SphereCandidate> out;
    for (const auto& c : cand) {
        bool keep = true;
        for (const auto& o : out) {
            double dist2 = 0.0;
            for (int a = 0; a < 3; ++a) dist2 += double(c.center[a] - o.center[a]) * (c.center[a] - o.center[a]);
            if (dist2 <= nms_radius * nms_radius) {
                keep = false;
                break;
            }
        }
        if (keep) out.push_back(c);
    }
    return out;
}

struct ShellSpec {
    std::array<int, 3> dims{32, 32, 32};
    Vec3 center{16.0, 16.0, 16.0};
    double radius = 7.0;
    double noise_sigma = 0.3;
    double delete_fraction = 0.5;
    Mat3 rotation = Mat3::Identity();
    bool solid = false;  // filled ball instead of a shell
};

// Voxels within half a voxel of the sphere surface are set to one (all voxels inside for a
// solid ball). Deletion is decided per lattice point of the unrotated frame, looked up through
// the rotation, so rotating the spec rotates the deletion pattern. Gaussian noise is added last.
inline Volume<double> render_shell(const ShellSpec& s, std::uint64_t seed) {
    GridSpec g{s.dims, 1.0};
    Volume<double> vol(g);
    std::mt19937_64 rng(seed);
    const int R = int(std::ceil(s.radius)) + 2, W = 2 * R + 1;
    std::vector<unsigned char> del(std::size_t(W) * W * W);
    std::bernoulli_distribution coin(s.delete_fraction);
    for (auto& b : del) b = coin(rng);
    for (int z = 0; z < g.dims[2]; ++z)
        for (int y = 0; y < g.dims[1]; ++y)
            for (int x = 0; x < g.dims[0]; ++x) {
                const Vec3 q = s.rotation.transpose() * (Vec3(x, y, z) - s.center);
                const double dist = q.norm();
                const bool on = s.solid ? dist <= s.radius : std::abs(dist - s.radius) <= 0.5;
                if (!on) continue;
                int l[3];
                bool inside = true;
                for (int a = 0; a < 3; ++a) {
                    l[a] = int(std::lround(q[a])) + R;
                    inside &= l[a] >= 0 && l[a] < W;
                }
                if (!s.solid && inside && del[(std::size_t(l[2]) * W + l[1]) * W + l[0]]) continue;
                vol(x, y, z) = 1.0;
            }
    if (s.noise_sigma > 0.0) {
        std::normal_distribution<double> n(0.0, s.noise_sigma);
        for (auto& v : vol.data) v += n(rng);
    }
    return vol;
}

}  // namespace se3h
