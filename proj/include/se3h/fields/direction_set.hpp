#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "se3h/core/types.hpp"

namespace se3h {

struct HullFace {
    std::array<int, 3> v;  // counter-clockwise seen from outside
    Vec3 normal;           // unit outward normal
};

namespace detail {

// Incremental convex hull of points on (or near) the unit sphere.
inline std::vector<HullFace> convex_hull(const std::vector<Vec3>& p) {
    const int n = static_cast<int>(p.size());
    require(n >= 4, "convex_hull: need at least 4 points");
    // initial tetrahedron
    int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
    for (int i = 1; i < n && i1 < 0; ++i)
        if ((p[i] - p[i0]).norm() > 1e-9) i1 = i;
    for (int i = 1; i < n && i2 < 0; ++i)
        if (i != i1 && (p[i1] - p[i0]).cross(p[i] - p[i0]).norm() > 1e-9) i2 = i;
    if (i1 < 0 || i2 < 0) throw ContractError("convex_hull: degenerate point set");
    const Vec3 nrm = (p[i1] - p[i0]).cross(p[i2] - p[i0]);
    for (int i = 1; i < n && i3 < 0; ++i)
        if (i != i1 && i != i2 && std::abs(nrm.dot(p[i] - p[i0])) > 1e-9) i3 = i;
    if (i3 < 0) throw ContractError("convex_hull: coplanar point set");
    const Vec3 inner = 0.25 * (p[i0] + p[i1] + p[i2] + p[i3]);

    std::vector<HullFace> faces;
    std::vector<bool> alive;
    auto add_face = [&](int a, int b, int c) {
        Vec3 nn = (p[b] - p[a]).cross(p[c] - p[a]);
        if (nn.dot(p[a] - inner) < 0) {
            std::swap(b, c);
            nn = -nn;
        }
        faces.push_back({{a, b, c}, nn.normalized()});
        alive.push_back(true);
    };
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2 || i == i3) continue;
        std::vector<int> visible;
        for (size_t f = 0; f < faces.size(); ++f) {
            if (!alive[f]) continue;
            if (faces[f].normal.dot(p[i] - p[faces[f].v[0]]) > 1e-12) visible.push_back(static_cast<int>(f));
        }
        if (visible.empty()) continue;  // interior or duplicate point
        // horizon: directed edges of visible faces whose reverse is not in a visible face
        std::set<std::pair<int, int>> edges;
        for (int f : visible)
            for (int e = 0; e < 3; ++e) edges.insert({faces[f].v[e], faces[f].v[(e + 1) % 3]});
        for (int f : visible) alive[f] = false;
        for (const auto& [a, b] : edges) {
            if (edges.count({b, a})) continue;
            Vec3 nn = (p[b] - p[a]).cross(p[i] - p[a]);
            faces.push_back({{a, b, i}, nn.normalized()});
            alive.push_back(true);
        }
    }
    std::vector<HullFace> out;
    for (size_t f = 0; f < faces.size(); ++f)
        if (alive[f]) out.push_back(faces[f]);
    return out;
}

}  // namespace detail

// Unit vectors on S2 with the neighbor graph of their spherical Voronoi tessellation.
struct DirectionSet {
    std::vector<Vec3> directions;
    std::vector<std::vector<int>> neighbors;
    // Largest angle from each direction to a vertex of its Voronoi cell.
    std::vector<double> cell_radius;

    std::size_t size() const { return directions.size(); }
};

inline DirectionSet make_direction_set(std::vector<Vec3> dirs) {
    for (auto& d : dirs) {
        require(d.norm() > 0, "DirectionSet: zero vector");
        d.normalize();
    }
    DirectionSet ds;
    ds.directions = std::move(dirs);
    const std::size_t n = ds.directions.size();
    ds.neighbors.assign(n, {});
    ds.cell_radius.assign(n, 0.0);
    if (n < 4) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k)
                if (k != i) ds.neighbors[i].push_back(static_cast<int>(k));
            ds.cell_radius[i] = kPi;
        }
        return ds;
    }
    std::vector<std::set<int>> nb(n);
    for (const auto& f : detail::convex_hull(ds.directions)) {
        for (int e = 0; e < 3; ++e) {
            int a = f.v[e], b = f.v[(e + 1) % 3];
            nb[a].insert(b);
            nb[b].insert(a);
            double ang = std::acos(std::clamp(ds.directions[a].dot(f.normal), -1.0, 1.0));
            ds.cell_radius[a] = std::max(ds.cell_radius[a], ang);
        }
    }
    for (std::size_t i = 0; i < n; ++i) ds.neighbors[i].assign(nb[i].begin(), nb[i].end());
    return ds;
}

}  // namespace se3h
