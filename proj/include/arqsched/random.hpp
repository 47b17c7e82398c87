#pragma once

#include <cstdint>
#include <random>

#include "arqsched/channel.hpp"

namespace arqsched {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based seed derivation: (master, stream, index) -> seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// Thin wrapper over mt19937_64 with distribution code written out by hand so
/// draws do not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Draws an index from a probability 3-vector.
    int categorical(const Vec3& probs);
    /// 0 or 1 with equal probability.
    int coin() { return static_cast<int>(engine_() >> 63); }

private:
    std::mt19937_64 engine_;
};

/// Random instance families used by the randomized verification suites.
namespace instances {

/// Any matrix accepted by TransitionMatrix::validate that also mixes to the
/// convergence tolerance within the lag cap.
TransitionMatrix random_valid_matrix(Rng& rng, int lag_cap = kDefaultLagCap);

/// Constant middle column (p12 = p22 = p32) and p23 p31 >= p21 p13.
TransitionMatrix random_prop12_matrix(Rng& rng, int lag_cap = kDefaultLagCap);

/// Valid matrix with p21 = p31 exactly (states 2 and 3 mergeable when a2 = a3).
TransitionMatrix random_mergeable_matrix(Rng& rng, int lag_cap = kDefaultLagCap);

/// a1 = 0, a3 = 1, a2 uniform in [0, 1].
RewardVector random_normalized_reward(Rng& rng);

/// 0 <= a1 <= a2 <= a3 with a3 in [0.5, 2].
RewardVector random_general_reward(Rng& rng);

}  // namespace instances
}  // namespace arqsched
