#pragma once

#include <cmath>
#include <vector>

#include "se3h/core/types.hpp"

namespace se3h {

// P_l(t) by the Bonnet recurrence.
inline double legendre_eval(int l, double t) {
    require(l >= 0, "legendre_eval: negative order");
    if (!(std::abs(t) <= 1.0 + 1e-12)) throw DomainError("legendre_eval: |t| > 1");
    if (l == 0) return 1.0;
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= l; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// All P_0..P_L at t.
inline std::vector<double> legendre_all(int L, double t) {
    std::vector<double> p(static_cast<size_t>(L) + 1);
    p[0] = 1.0;
    if (L >= 1) p[1] = t;
    for (int k = 2; k <= L; ++k) p[k] = ((2.0 * k - 1.0) * t * p[k - 1] - (k - 1.0) * p[k - 2]) / k;
    return p;
}

}  // namespace se3h
