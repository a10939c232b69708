#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "se3h/core/factorial.hpp"
#include "se3h/core/types.hpp"

namespace se3h {

// <j m | j1 m1, j2 m2>
struct CGKey {
    int j = 0, m = 0, j1 = 0, m1 = 0, j2 = 0, m2 = 0;
};

inline bool cg_triangle(int j, int j1, int j2) {
    return j >= std::abs(j1 - j2) && j <= j1 + j2;
}

// Racah's single-sum closed form evaluated with log-factorials.
inline double cg_racah(int j, int m, int j1, int m1, int j2, int m2) {
    require(j >= 0 && j1 >= 0 && j2 >= 0, "cg: negative order");
    require(std::abs(m) <= j && std::abs(m1) <= j1 && std::abs(m2) <= j2, "cg: |m| > j");
    if (m != m1 + m2 || !cg_triangle(j, j1, j2)) return 0.0;
    using detail::log_factorial;
    if (m == 0 && m1 == 0 && (j + j1 + j2) % 2 == 1) return 0.0;
    const long double pre = 0.5L * (std::log(2.0L * j + 1.0L) + log_factorial(j + j1 - j2) + log_factorial(j - j1 + j2) +
                              log_factorial(j1 + j2 - j) - log_factorial(j1 + j2 + j + 1) + log_factorial(j + m) +
                              log_factorial(j - m) + log_factorial(j1 - m1) + log_factorial(j1 + m1) +
                              log_factorial(j2 - m2) + log_factorial(j2 + m2));
    const int kmin = std::max({0, j2 - j - m1, j1 - j + m2});
    const int kmax = std::min({j1 + j2 - j, j1 - m1, j2 + m2});
    long double sum = 0.0L;
    for (int k = kmin; k <= kmax; ++k) {
        long double den = log_factorial(k) + log_factorial(j1 + j2 - j - k) + log_factorial(j1 - m1 - k) +
                     log_factorial(j2 + m2 - k) + log_factorial(j - j2 + m1 + k) + log_factorial(j - j1 - m2 + k);
        sum += parity_sign(k) * std::exp(pre - den);
    }
    return static_cast<double>(sum);
}

inline double cg_racah(const CGKey& k) { return cg_racah(k.j, k.m, k.j1, k.m1, k.j2, k.m2); }

namespace detail {

class CGCache {
public:
    double get(const CGKey& k) {
        const std::uint64_t h = pack(k);
        {
            std::shared_lock lock(mu_);
            auto it = table_.find(h);
            if (it != table_.end()) return it->second;
        }
        double v = cg_racah(k);
        std::unique_lock lock(mu_);
        table_.emplace(h, v);
        return v;
    }

private:
    static std::uint64_t pack(const CGKey& k) {
        auto u = [](int v) { return static_cast<std::uint64_t>(v + 512) & 0x3ff; };
        return u(k.j) | u(k.m) << 10 | u(k.j1) << 20 | u(k.m1) << 30 | u(k.j2) << 40 | u(k.m2) << 50;
    }
    std::shared_mutex mu_;
    std::unordered_map<std::uint64_t, double> table_;
};

inline CGCache& cg_cache() {
    static CGCache cache;
    return cache;
}

}  // namespace detail

// Cached CG coefficient; zero when the selection rules fail.
inline double cg(const CGKey& k) {
    require(std::abs(k.m) <= k.j && std::abs(k.m1) <= k.j1 && std::abs(k.m2) <= k.j2, "cg: |m| > j");
    if (k.m != k.m1 + k.m2 || !cg_triangle(k.j, k.j1, k.j2)) return 0.0;
    return detail::cg_cache().get(k);
}

inline double cg(int j, int m, int j1, int m1, int j2, int m2) { return cg(CGKey{j, m, j1, m1, j2, m2}); }

// Same as cg() but returns 0 instead of throwing when an |m| exceeds its j.
inline double cg_or_zero(int j, int m, int j1, int m1, int j2, int m2) {
    if (j < 0 || j1 < 0 || j2 < 0 || std::abs(m) > j || std::abs(m1) > j1 || std::abs(m2) > j2) return 0.0;
    return cg(j, m, j1, m1, j2, m2);
}

}  // namespace se3h
