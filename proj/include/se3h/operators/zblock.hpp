#pragma once

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "se3h/core/clebsch_gordan.hpp"

namespace se3h {

struct ZBlockEntry {
    int n;   // outgoing index
    int np;  // incoming index
    int q;   // derivative component, n = np + q
    double weight;
};

// Sparse coupling table between orders j (out) and jp (in) for the rank-J spherical derivative.
struct ZBlock {
    int J = 0, j = 0, jp = 0;
    std::vector<ZBlockEntry> entries;
};

inline ZBlock compute_z_block(int J, int j, int jp) {
    if (std::abs(j - jp) > J || j < 0 || jp < 0) throw ContractError("z_block: |j - j'| exceeds J");
    ZBlock b{J, j, jp, {}};
    const double c0 = cg(j, 0, jp, 0, J, 0);
    if (c0 == 0.0) return b;
    const double scale = (2.0 * jp + 1.0) / (2.0 * j + 1.0) * c0;
    for (int n = -j; n <= j; ++n)
        for (int q = -J; q <= J; ++q) {
            const int np = n - q;
            if (std::abs(np) > jp) continue;
            const double w = scale * cg(j, n, jp, np, J, q);
            if (w != 0.0) b.entries.push_back({n, np, q, w});
        }
    return b;
}

// Cached; entries are immutable once inserted.
inline const ZBlock& z_block(int J, int j, int jp) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, ZBlock> cache;
    std::lock_guard lock(mu);
    auto key = std::make_tuple(J, j, jp);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, compute_z_block(J, j, jp)).first;
    return it->second;
}

}  // namespace se3h
