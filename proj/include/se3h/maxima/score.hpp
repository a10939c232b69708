#pragma once

#include <algorithm>
#include <vector>

#include "se3h/maxima/detect.hpp"

namespace se3h {

struct ScoreReport {
    int TP = 0, FP = 0, FN = 0;
    double precision = 0.0, recall = 0.0, fscore = 0.0;

    void finalize() {
        precision = TP + FP > 0 ? double(TP) / (TP + FP) : 0.0;
        recall = TP + FN > 0 ? double(TP) / (TP + FN) : 0.0;
        fscore = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    ScoreReport& operator+=(const ScoreReport& o) {
        TP += o.TP;
        FP += o.FP;
        FN += o.FN;
        finalize();
        return *this;
    }
};

// Greedy one-to-one matching by ascending axial angle; pairs farther than tol_deg never match.
inline ScoreReport match_and_score(const std::vector<Vec3>& detections, const std::vector<Vec3>& truths,
                                   double tol_deg = 10.0) {
    struct Pair {
        double angle;
        std::size_t d, t;
    };
    const double tol = tol_deg * kPi / 180.0;
    std::vector<Pair> pairs;
    for (std::size_t d = 0; d < detections.size(); ++d)
        for (std::size_t t = 0; t < truths.size(); ++t) {
            const double a = axial_angle(detections[d], truths[t]);
            if (a <= tol) pairs.push_back({a, d, t});
        }
    // ties broken by index so the result does not depend on sort stability
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.angle != b.angle) return a.angle < b.angle;
        return std::tie(a.d, a.t) < std::tie(b.d, b.t);
    });
    std::vector<bool> dused(detections.size()), tused(truths.size());
    ScoreReport r;
    for (const auto& p : pairs) {
        if (dused[p.d] || tused[p.t]) continue;
        dused[p.d] = tused[p.t] = true;
        ++r.TP;
    }
    r.FP = int(detections.size()) - r.TP;
    r.FN = int(truths.size()) - r.TP;
    r.finalize();
    return r;
}

inline std::vector<Vec3> directions_of(const std::vector<Detection>& d) {
    std::vector<Vec3> out;
    for (const auto& x : d) out.push_back(x.direction);
    return out;
}

}  // namespace se3h
