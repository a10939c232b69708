#pragma once

#include <cmath>
#include <vector>

namespace se3h::detail {

// log(n!) table.
// Extended precision keeps exp() of log-factorial sums accurate to about one ulp in double.
inline long double log_factorial(int n) {
    static const std::vector<long double> table = [] {
        std::vector<long double> t(512);
        t[0] = 0.0L;
        for (size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<long double>(i));
        return t;
    }();
    if (n < 0) return std::nanl("");
    if (static_cast<size_t>(n) < table.size()) return table[static_cast<size_t>(n)];
    return std::lgamma(n + 1.0L);
}

}  // namespace se3h::detail
