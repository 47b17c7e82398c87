#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "arqsched/policy.hpp"

namespace arqsched {

/// Finite-horizon exact dynamic program over the symbolic belief lattice.
///
/// V_k(s) = max_a [ pi_a . alpha + sum_j pi_a(j) V_{k-1}(s after a, F_j) ],
/// V_0 = 0, evaluated for every (state, k) reachable from (S, S) with k = H
/// at the root. In the restricted class, a user that just fed back F3 must be
/// rescheduled.
class ValueTable {
public:
    struct Entry {
        double value = 0.0;
        User action = User::One;
        double q_first = 0.0;   // value of scheduling user 1
        double q_second = 0.0;  // value of scheduling user 2 (NaN when excluded)
    };

    int horizon() const noexcept { return horizon_; }
    bool restricted() const noexcept { return restricted_; }

    /// Value/action for a state with k intervals remaining, if tabulated.
    const Entry* find(const JointInfoState& state, int k) const;
    double root_value() const;

    /// Every tabulated (state, k) pair.
    std::vector<std::pair<JointInfoState, int>> keys() const;
    std::size_t size() const noexcept { return table_.size(); }

private:
    friend class DpSolver;
    static std::uint64_t key(const JointInfoState& s, int k);
    static JointInfoState decode(std::uint64_t key, int& k);

    int horizon_ = 0;
    bool restricted_ = false;
    std::unordered_map<std::uint64_t, Entry> table_;
};

ValueTable optimal_dp(const TransitionMatrix& p, const RewardVector& alpha, int horizon,
                      int lag_cap, bool restricted);

/// Exact expected total reward of the greedy (argmax) policy from `state`
/// over k intervals.
double greedy_value(const TransitionMatrix& p, const RewardVector& alpha,
                    const JointInfoState& state, int k);

struct OptimalityComparison {
    int horizon = 0;
    double greedy_value = 0.0;
    double restricted_value = 0.0;
    double unrestricted_value = 0.0;
    double restricted_gap = 0.0;    // V_restricted - V_greedy at the root
    double unrestricted_gap = 0.0;  // V_optimal - V_greedy at the root
    double restricted_agreement = 1.0;
    double unrestricted_agreement = 1.0;
    std::size_t restricted_states = 0;
    std::size_t unrestricted_states = 0;
    /// First state (k remaining appended) where greedy is strictly suboptimal.
    std::optional<std::string> restricted_counterexample;
    std::optional<std::string> counterexample;
};

/// Greedy "agrees" at a state when its action attains the optimum to within
/// the algebraic tolerance; exact ties in value are not disagreements.
OptimalityComparison compare_greedy_vs_optimal(const TransitionMatrix& p,
                                               const RewardVector& alpha, int horizon,
                                               int lag_cap = kDefaultLagCap);

}  // namespace arqsched
