#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "se3h/fields/direction_set.hpp"
#include "se3h/fields/projection.hpp"

namespace se3h {

struct Detection {
    std::size_t voxel = 0;
    Vec3 direction = Vec3::UnitZ();
    double value = 0.0;
};

inline double axial_angle(const Vec3& a, const Vec3& b) {
    return std::acos(std::clamp(std::abs(a.normalized().dot(b.normalized())), 0.0, 1.0));
}

namespace detail {

// Quadratic in gnomonic tangent coordinates around dirs[seed] fitted to the seed and its
// neighbors (second ring if needed). Returns the seed when the fit has no interior maximum
// or when the maximum lies outside the seed's Voronoi cell radius.
inline std::pair<Vec3, double> refine_maximum(std::span<const double> values, const DirectionSet& dirs, int seed) {
    const Vec3 s = dirs.directions[seed];
    std::vector<int> pts{seed};
    for (int k : dirs.neighbors[seed]) pts.push_back(k);
    if (pts.size() < 7) {
        std::set<int> ring(pts.begin(), pts.end());
        for (int k : dirs.neighbors[seed])
            for (int m : dirs.neighbors[k]) ring.insert(m);
        pts.assign(ring.begin(), ring.end());
    }
    Vec3 e1 = s.cross(std::abs(s.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).normalized();
    Vec3 e2 = s.cross(e1);
    Eigen::MatrixXd A(pts.size(), 6);
    Eigen::VectorXd b(pts.size());
    int rows = 0;
    for (int k : pts) {
        const Vec3& p = dirs.directions[k];
        const double c = p.dot(s);
        if (c <= 0.2) continue;
        const Vec3 q = p / c;
        const double u = q.dot(e1), v = q.dot(e2);
        A.row(rows) << 1.0, u, v, u * u, u * v, v * v;
        b(rows) = values[std::size_t(k)];
        ++rows;
    }
    const double seed_value = values[std::size_t(seed)];
    if (rows < 6) return {s, seed_value};
    Eigen::VectorXd x = A.topRows(rows).colPivHouseholderQr().solve(b.head(rows));
    Eigen::Matrix2d Hs;
    Hs << 2.0 * x(3), x(4), x(4), 2.0 * x(5);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Hs);
    if (es.eigenvalues().maxCoeff() >= 0.0) return {s, seed_value};
    const Eigen::Vector2d uv = -Hs.inverse() * Eigen::Vector2d(x(1), x(2));
    const Vec3 d = (s + uv(0) * e1 + uv(1) * e2).normalized();
    if (std::acos(std::clamp(d.dot(s), -1.0, 1.0)) > dirs.cell_radius[seed]) return {s, seed_value};
    const double val = x(0) + x(1) * uv(0) + x(2) * uv(1) + x(3) * uv(0) * uv(0) + x(4) * uv(0) * uv(1) +
                       x(5) * uv(1) * uv(1);
    return {d, val};
}

}  // namespace detail

// Strict local maxima of samples on dirs above threshold, refined by a quadratic fit.
// With antipodal = true, maxima whose axes agree within the sum of their cell radii are
// merged (keeping the larger value).
inline std::vector<Detection> detect_maxima(std::span<const double> values, const DirectionSet& dirs, double threshold,
                                            bool antipodal, std::size_t voxel = 0) {
    require(values.size() == dirs.size(), "detect_maxima: value count differs from direction count");
    std::vector<std::pair<Detection, int>> found;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        const double fi = values[i];
        if (!(fi > threshold)) continue;
        bool strict = true;
        for (int k : dirs.neighbors[i])
            if (!(fi > values[std::size_t(k)])) {
                strict = false;
                break;
            }
        if (!strict) continue;
        auto [d, val] = detail::refine_maximum(values, dirs, int(i));
        found.push_back({Detection{voxel, d, val}, int(i)});
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (a.first.value != b.first.value) return a.first.value > b.first.value;
        return a.second < b.second;
    });
    std::vector<Detection> out;
    std::vector<int> seeds;
    for (const auto& [det, seed] : found) {
        bool dup = false;
        if (antipodal)
            for (std::size_t k = 0; k < out.size() && !dup; ++k)
                dup = det.direction.dot(out[k].direction) < 0.0 &&
                      axial_angle(det.direction, out[k].direction) <=
                          dirs.cell_radius[std::size_t(seed)] + dirs.cell_radius[std::size_t(seeds[k])];
        if (dup) continue;
        out.push_back(det);
        seeds.push_back(seed);
    }
    return out;
}

// Detections for the listed voxels of a real FOD field; threshold is relative to each voxel's
// maximum sample (default 0.1).
inline std::vector<std::vector<Detection>> detect_maxima_field(const SphericalField& fod, const DirectionSet& dirs,
                                                               const std::vector<std::size_t>& voxels,
                                                               double rel_threshold = 0.1) {
    const Eigen::MatrixXcd A = synthesis_matrix(dirs.directions, fod.L(), fod.parity());
    const bool even = fod.parity() == Parity::even_only;
    std::vector<std::vector<Detection>> out;
    Eigen::VectorXcd c(A.cols());
    std::vector<double> vals(dirs.size());
    for (std::size_t vox : voxels) {
        for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = fod.channel_at(std::size_t(k))[vox];
        const Eigen::VectorXd s = (A * c).real();
        for (std::size_t d = 0; d < vals.size(); ++d) vals[d] = s(Eigen::Index(d));
        const double mx = s.maxCoeff();
        out.push_back(mx > 0.0 ? detect_maxima(vals, dirs, rel_threshold * mx, even, vox) : std::vector<Detection>{});
    }
    return out;
}

}  // namespace se3h
