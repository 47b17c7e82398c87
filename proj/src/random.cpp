#include "arqsched/random.hpp"

#include <algorithm>
#include <array>

#include "arqsched/error.hpp"

namespace arqsched {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

int Rng::categorical(const Vec3& probs) {
    const double u = uniform();
    if (u < probs[0]) return 0;
    if (u < probs[0] + probs[1]) return 1;
    return 2;
}

namespace instances {
namespace {

Vec3 uniform_simplex(Rng& rng) {
    double a = rng.uniform();
    double b = rng.uniform();
    if (a > b) std::swap(a, b);
    return {a, b - a, 1.0 - b};
}

// Last entry absorbs rounding so the row sums to one as closely as possible.
Vec3 close_row(double x, double y) { return {x, y, 1.0 - x - y}; }

std::optional<TransitionMatrix> try_validate(const Mat3& raw, int lag_cap) {
    try {
        auto m = TransitionMatrix::validate(raw, lag_cap);
        if (!m.mixing_lag()) return std::nullopt;
        return m;
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

TransitionMatrix random_valid_matrix(Rng& rng, int lag_cap) {
    for (;;) {
        std::array<Vec3, 3> rows{};
        for (int i = 0; i < 3; ++i) {
            const Vec3 u = uniform_simplex(rng);
            const double stick = rng.uniform(0.0, 0.85);
            for (int j = 0; j < 3; ++j) rows[i][j] = (1.0 - stick) * u[j] + (i == j ? stick : 0.0);
        }
        // Occasionally exercise the admissible zero entries.
        if (rng.uniform() < 0.1) {
            const int which = rng.coin();
            auto& r = rows[which == 0 ? 0 : 2];
            const int zero = which == 0 ? 2 : 0;
            r[which == 0 ? 0 : 2] += r[zero];
            r[zero] = 0.0;
        }
        std::array<int, 3> perm{0, 1, 2};
        do {
            Mat3 raw{};
            for (int i = 0; i < 3; ++i) {
                const Vec3& src = rows[perm[i]];
                raw[i] = close_row(src[0], src[1]);
                if (raw[i][2] < 0.0) raw[i][2] = 0.0;
            }
            if (auto m = try_validate(raw, lag_cap)) return *m;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TransitionMatrix random_prop12_matrix(Rng& rng, int lag_cap) {
    for (;;) {
        const double mid = rng.uniform(0.05, 0.6);
        const double rest = 1.0 - mid;
        std::array<double, 3> x{rng.uniform(0.0, rest), rng.uniform(0.0, rest),
                                rng.uniform(0.0, rest)};
        std::sort(x.begin(), x.end(), std::greater<>());
        Mat3 raw{};
        for (int i = 0; i < 3; ++i) raw[i] = {x[i], mid, rest - x[i]};
        // p23 p31 >= p21 p13
        if (raw[1][2] * raw[2][0] < raw[1][0] * raw[0][2]) continue;
        if (auto m = try_validate(raw, lag_cap)) return *m;
    }
}

TransitionMatrix random_mergeable_matrix(Rng& rng, int lag_cap) {
    for (;;) {
        const double shared = rng.uniform(0.02, 0.45);  // p21 = p31
        const double p11 = rng.uniform(shared, 0.95);
        const double p12 = (1.0 - p11) * rng.uniform(0.2, 1.0);
        const double p23 = (1.0 - shared) * rng.uniform(0.05, 0.6);
        const double p32 = rng.uniform(0.0, std::min(p12, 1.0 - shared - p23));
        Mat3 raw{};
        raw[0] = close_row(p11, p12);
        raw[1] = {shared, 1.0 - shared - p23, p23};
        raw[2] = {shared, p32, 1.0 - shared - p32};
        if (auto m = try_validate(raw, lag_cap)) return *m;
    }
}

RewardVector random_normalized_reward(Rng& rng) {
    return RewardVector::normalized(rng.uniform());
}

RewardVector random_general_reward(Rng& rng) {
    const double top = rng.uniform(0.5, 2.0);
    double a = rng.uniform(0.0, top);
    double b = rng.uniform(0.0, top);
    if (a > b) std::swap(a, b);
    return RewardVector::make(a, b, top);
}

}  // namespace instances
}  // namespace arqsched
