#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "se3h/core/types.hpp"
#include "se3h/fields/memory.hpp"

namespace se3h {

struct GridSpec {
    std::array<int, 3> dims{1, 1, 1};
    double voxel_size = 1.0;

    std::size_t voxels() const { return std::size_t(dims[0]) * dims[1] * dims[2]; }
    std::size_t index(int x, int y, int z) const { return (std::size_t(z) * dims[1] + y) * dims[0] + x; }
    bool contains(int x, int y, int z) const {
        return x >= 0 && y >= 0 && z >= 0 && x < dims[0] && y < dims[1] && z < dims[2];
    }
    bool operator==(const GridSpec&) const = default;
};

inline void validate(const GridSpec& g) {
    require(g.dims[0] >= 1 && g.dims[1] >= 1 && g.dims[2] >= 1, "grid: dims must be >= 1");
    require(g.voxel_size > 0, "grid: voxel size must be positive");
}

// Scalar volume, x fastest.
template <class T>
struct Volume {
    GridSpec grid;
    Buffer<T> data;

    Volume() = default;
    explicit Volume(const GridSpec& g, T fill = T{}) : grid(g), data(g.voxels(), fill) { validate(g); }

    T& operator()(int x, int y, int z) { return data[grid.index(x, y, z)]; }
    const T& operator()(int x, int y, int z) const { return data[grid.index(x, y, z)]; }
    std::span<T> span() { return data; }
    std::span<const T> span() const { return data; }
};

}  // namespace se3h
