#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "arqsched/belief.hpp"
#include "arqsched/channel.hpp"

namespace arqsched {

/// Type I: p_2 alpha >= p_ss alpha. Type II otherwise.
enum class SystemType { TypeI, TypeII };

std::string_view to_string(SystemType t);

SystemType classify_system(const TransitionMatrix& p, const RewardVector& alpha);

/// Users are numbered 1 and 2 in every external rendering.
enum class User { One = 1, Two = 2 };

constexpr User other(User u) { return u == User::One ? User::Two : User::One; }
constexpr int index_of(User u) { return static_cast<int>(u) - 1; }
constexpr int number_of(User u) { return static_cast<int>(u); }

struct JointInfoState {
    BeliefState first = BeliefState::steady();
    BeliefState second = BeliefState::steady();
    std::optional<User> scheduled_last;

    const BeliefState& belief(User u) const { return u == User::One ? first : second; }
    BeliefState& belief(User u) { return u == User::One ? first : second; }

    /// The scheduled user's belief resets to the feedback, the other advances.
    JointInfoState after(User scheduled, Feedback feedback, int lag_cap) const;

    std::string render() const;

    friend bool operator==(const JointInfoState&, const JointInfoState&) = default;
};

enum class Rationale { RetainOnF3, RetainOnF2, SwitchOnF1, ComparedRewards, ArgmaxTie };

std::string_view to_string(Rationale r);

struct PolicyDecision {
    User action = User::One;
    double expected_immediate = 0.0;
    Rationale rationale = Rationale::ArgmaxTie;
};

/// Smallest lag L with p_3 P^L alpha <= p_2 alpha; nullopt stands for an
/// infinite threshold (the boundary p_2 alpha = p_ss alpha with a strictly
/// decaying r_3). Throws NotTypeI.
std::optional<int> threshold_L(const TransitionMatrix& p, const RewardVector& alpha);

/// The defining argmax form: schedule the larger expected immediate reward,
/// retaining the last scheduled user (user 1 if none) on an exact tie.
PolicyDecision greedy_argmax(const JointInfoState& state, const TransitionMatrix& p,
                             const RewardVector& alpha);

/// The round-robin form driven by the last feedback. `state` must already
/// reflect that feedback (the scheduled user's belief is fresh).
PolicyDecision greedy_structured(Feedback feedback, const JointInfoState& state,
                                 SystemType system, const TransitionMatrix& p,
                                 const RewardVector& alpha);

/// Genie-aided choice from both users' previous true states (0-based);
/// ties retain the last scheduled user (user 1 if none).
User genie_decide(int prev_state_first, int prev_state_second,
                  std::optional<User> scheduled_last);

}  // namespace arqsched
