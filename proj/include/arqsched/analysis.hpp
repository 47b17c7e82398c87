#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "arqsched/channel.hpp"

namespace arqsched {

struct VerificationReport {
    std::string name;
    bool pass = true;
    double max_violation = 0.0;
    double tolerance = kTolerances.algebraic;
    /// Smallest slack over all checked items (negated worst violation).
    double worst_margin = 0.0;
    /// Inputs and lag at the worst case.
    std::string witness;
    int witness_lag = -1;
};

/// p_1 P^k alpha <= p_2 P^k alpha <= p_3 P^k alpha for k = 0..k_max.
VerificationReport verify_reward_ordering(const TransitionMatrix& p, const RewardVector& alpha,
                                          int k_max);

/// r_3 nonincreasing, r_1 nondecreasing; when k_max >= 64 all three curves
/// must also be within the limit tolerance of p_ss alpha at k_max. A limit
/// error e counts as a violation of max(0, e - limit tolerance).
VerificationReport verify_monotone_curves(const TransitionMatrix& p, const RewardVector& alpha,
                                          int k_max);

struct ConditionAReport {
    /// p_23 - p_2 P [0 0 1]^T; condition (A) holds iff margin >= -tol.
    double margin = 0.0;
    bool holds = false;
    /// p_2 P^k e3 nonincreasing for k <= k_max (within tolerance).
    bool nonincreasing = false;
    /// p_2 P^k e3 nondecreasing for k <= k_max (within tolerance).
    bool nondecreasing = false;
    /// nonincreasing iff holds.
    bool direction_predicted = false;
    /// When (A) holds: p_ss(3) <= p_23.
    bool limit_below_p23 = false;
    double steady3 = 0.0;
};

ConditionAReport check_condition_A(const TransitionMatrix& p, int k_max = kDefaultLagCap);

/// p_1 P^k e3 nondecreasing with limit p_ss(3) <= p_23. Throws ConditionAFailed.
VerificationReport verify_lemma11(const TransitionMatrix& p, int k_max);

struct Prop12Conditions {
    bool constant_middle_column = false;  // p12 = p22 = p32
    bool cross_product = false;           // p23 p31 >= p21 p13
    bool satisfied = false;
    /// Derived consequences, evaluated only when satisfied.
    bool steady2_equals_p22 = false;
    bool condition_A = false;
};

Prop12Conditions check_prop12_conditions(const TransitionMatrix& p);

struct ConditionSReport {
    std::array<VerificationReport, 6> cases;
    VerificationReport symmetry;     // p_i P^k [0 1 0]^T = p_22
    VerificationReport contraction;  // p33 p22 - p23 p32 >= 0
    VerificationReport premise;      // greedy-choice premise R(hat) >= R(tilde) per case
    std::optional<int> threshold_L;
    bool all_pass() const;
};

/// Enumerates the six ARQ-reachable belief-pair families of the restricted
/// optimality argument and checks pi_hat(3) pi_tilde(2) >= pi_hat(2) pi_tilde(3).
/// Throws Prop12ConditionsFailed.
ConditionSReport verify_condition_S(const TransitionMatrix& p, const RewardVector& alpha,
                                    int k_max);

using Mat2 = std::array<std::array<double, 2>, 2>;

struct EquivalenceMode {
    enum class Kind { None, MergeStates23, Synonymous12 };
    Kind kind = Kind::None;
    /// Rows/columns: state 1, merged {2, 3}. Set for MergeStates23 only.
    std::optional<Mat2> reduced;
};

std::string to_string(EquivalenceMode::Kind kind);

EquivalenceMode detect_equivalence_mode(const TransitionMatrix& p, const RewardVector& alpha);

}  // namespace arqsched
