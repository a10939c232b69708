#pragma once

#include "se3h/core/clebsch_gordan.hpp"
#include "se3h/core/types.hpp"

namespace se3h {

// Integral over SO(3) of conj(D^l_{k'k}) conj(D^{j'}_{n'm'}) D^j_{nm}.
inline double triple_product_integral(int j, int n, int m, int jp, int np, int mp, int l, int kp, int k) {
    return kHaarMass / (2.0 * j + 1.0) * cg_or_zero(j, n, jp, np, l, kp) * cg_or_zero(j, m, jp, mp, l, k);
}

}  // namespace se3h
