#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arqsched/analysis.hpp"
#include "arqsched/bounds.hpp"
#include "arqsched/policy.hpp"

namespace arqsched {

enum class PolicyKind { GreedyStructured, GreedyArgmax, Genie, RoundRobin, Random };

std::string_view to_string(PolicyKind k);
std::optional<PolicyKind> parse_policy(std::string_view name);

struct SimConfig {
    TransitionMatrix p;
    RewardVector alpha;
    PolicyKind policy = PolicyKind::GreedyStructured;
    int horizon = 10000;       // slots per episode
    int episodes = 100;
    std::uint64_t seed = 0;
    int burn_in = 1000;        // slots discarded at the start of each episode
    int lag_cap = kDefaultLagCap;
    /// Worker threads for estimate_sum_reward; 0 means hardware concurrency.
    /// Results never depend on this value.
    int threads = 0;

    /// Throws InvalidConfig unless horizon >= 1, episodes >= 1, 0 <= burn_in < horizon.
    void check() const;
};

/// Convenience: default budget with burn_in = horizon / 10.
SimConfig make_sim_config(const TransitionMatrix& p, const RewardVector& alpha,
                          PolicyKind policy, int horizon, int episodes, std::uint64_t seed);

struct SlotRecord {
    int slot = 0;                // 1-based
    std::array<int, 2> states{}; // true channel states (0-based)
    User action = User::One;
    Feedback feedback = Feedback::F1;
    double reward = 0.0;
    BeliefState belief_first = BeliefState::steady();
    BeliefState belief_second = BeliefState::steady();
    std::optional<Rationale> rationale;  // greedy policies only
};

struct EpisodeTrace {
    std::uint64_t seed = 0;
    std::vector<SlotRecord> slots;

    /// CSV with header `slot,s1,s2,action,feedback,reward,belief1,belief2`.
    std::string to_csv() const;
};

struct SimResult {
    PolicyKind policy = PolicyKind::GreedyStructured;
    double eta_hat = 0.0;
    double std_err = 0.0;
    int episodes = 0;
    std::int64_t slots = 0;  // accounted slots, all episodes
    std::uint64_t seed = 0;
};

/// Seed of episode `index` under master seed `seed`.
std::uint64_t episode_seed(std::uint64_t seed, int index);

/// One episode from stationary initial channels and steady beliefs.
/// Deterministic given the episode seed.
EpisodeTrace run_episode(const SimConfig& config, std::uint64_t episode_seed);

/// Mean realized reward per accounted slot; standard error from per-episode
/// means. Episodes may run in parallel but are reduced in index order.
SimResult estimate_sum_reward(const SimConfig& config);

/// Two-state chain (row/column 0 = bad, 1 = good) under the myopic policy;
/// used to check the merged-state reduction.
SimResult estimate_two_state_greedy(const Mat2& reduced, double reward_bad, double reward_good,
                                    int horizon, int episodes, std::uint64_t seed, int burn_in,
                                    int threads = 0);

struct InequalityCheck {
    std::string name;
    bool pass = false;
    /// Slack in units of the standard error used (positive = satisfied).
    double margin_sigmas = 0.0;
};

struct SandwichReport {
    BoundsReport bounds;
    SimResult greedy;
    SimResult genie;
    std::vector<InequalityCheck> checks;
    bool all_pass() const;
};

/// Simulates greedy (structured) and genie with the given budget and checks
///   lower <= eta(greedy) + 3 se, eta(greedy) <= upper + 3 se,
///   eta(greedy) <= eta(genie) + 3 combined se, |eta(genie) - upper| <= 3 se.
SandwichReport sandwich_check(const TransitionMatrix& p, const RewardVector& alpha, int horizon,
                              int episodes, std::uint64_t seed, int threads = 0);

}  // namespace arqsched
