#pragma once

#include <cmath>

#include "arqsched/channel.hpp"

namespace fixtures {

using arqsched::Mat3;
using arqsched::RewardVector;
using arqsched::TransitionMatrix;

inline TransitionMatrix iid() {
    const double t = 1.0 / 3.0;
    return TransitionMatrix::validate(Mat3{{{t, t, t}, {t, t, t}, {t, t, t}}});
}

inline TransitionMatrix pa() {
    return TransitionMatrix::validate(Mat3{{{0.8, 0.15, 0.05}, {0.1, 0.7, 0.2}, {0.05, 0.15, 0.8}}});
}

inline TransitionMatrix ps() {
    return TransitionMatrix::validate(Mat3{{{0.6, 0.3, 0.1}, {0.3, 0.4, 0.3}, {0.1, 0.3, 0.6}}});
}

inline TransitionMatrix prop12(int lag_cap = arqsched::kDefaultLagCap) {
    return TransitionMatrix::validate(Mat3{{{0.7, 0.2, 0.1}, {0.3, 0.2, 0.5}, {0.1, 0.2, 0.7}}},
                                      lag_cap);
}

inline TransitionMatrix pg() {
    return TransitionMatrix::validate(Mat3{{{0.6, 0.3, 0.1}, {0.2, 0.5, 0.3}, {0.2, 0.3, 0.5}}});
}

inline RewardVector half() { return RewardVector::make(0.0, 0.5, 1.0); }

// Naive reference: repeated multiplication, no caching.
inline Mat3 slow_power(const Mat3& p, int k) {
    Mat3 out{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int s = 0; s < k; ++s) {
        Mat3 next{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int m = 0; m < 3; ++m) next[i][j] += out[i][m] * p[m][j];
        out = next;
    }
    return out;
}

inline double max_abs_diff(const Mat3& a, const Mat3& b) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d = std::fmax(d, std::fabs(a[i][j] - b[i][j]));
    return d;
}

}  // namespace fixtures
