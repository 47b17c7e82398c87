#pragma once

#include <compare>
#include <string>

#include "arqsched/channel.hpp"

namespace arqsched {

/// ARQ feedback: the channel state reported by the scheduled user.
enum class Feedback { F1 = 0, F2 = 1, F3 = 2 };

inline int state_of(Feedback f) { return static_cast<int>(f); }
inline Feedback feedback_of(int state) { return static_cast<Feedback>(state); }

/// Lag-indexed belief about one user's channel.
///
/// A user last observed in state j, l + 1 slots ago, has belief p_j P^l; a user
/// never observed has the steady-state belief. Beliefs in this problem only
/// ever take these forms, so they are stored symbolically as (origin, lag).
class BeliefState {
public:
    static constexpr BeliefState steady() { return BeliefState(-1, 0); }
    /// Origin is a 0-based state index.
    static BeliefState observed(int origin, int lag);

    constexpr bool is_steady() const noexcept { return origin_ < 0; }
    constexpr int origin() const noexcept { return origin_; }
    constexpr int lag() const noexcept { return lag_; }

    /// Dense code: 0 for steady, 1 + origin + 3 * lag otherwise.
    constexpr int code() const noexcept { return is_steady() ? 0 : 1 + origin_ + 3 * lag_; }

    /// `S` or `j@l` with a 1-based origin.
    std::string render() const;

    friend constexpr bool operator==(const BeliefState&, const BeliefState&) = default;
    friend constexpr auto operator<=>(const BeliefState&, const BeliefState&) = default;

private:
    constexpr BeliefState(int origin, int lag) : origin_(origin), lag_(lag) {}

    int origin_;
    int lag_;
};

BeliefState observe(Feedback feedback);

/// One slot without observation. Lags beyond the cap collapse to steady.
BeliefState advance(const BeliefState& b, int lag_cap = kDefaultLagCap);

Vec3 materialize(const BeliefState& b, const TransitionMatrix& p);

double expected_reward(const BeliefState& b, const TransitionMatrix& p,
                       const RewardVector& alpha);

/// Inverse of BeliefState::render; returns nullopt on malformed text.
std::optional<BeliefState> parse_belief(const std::string& text);

}  // namespace arqsched
