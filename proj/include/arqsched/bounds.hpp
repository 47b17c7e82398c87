#pragma once

#include <map>
#include <string>

#include "arqsched/policy.hpp"

namespace arqsched {

/// Lower bound for a Type I system:
///   p_2 alpha - p_ss(1)^2 (p_2 alpha - p_1 alpha).
/// Throws NotTypeI.
double lb_type1(const TransitionMatrix& p, const RewardVector& alpha);

/// Lower bound for a Type II system: reward p_3 alpha whenever at least one
/// user was in state 3, p_1 alpha otherwise,
///   (2 p_ss(3) - p_ss(3)^2) p_3 alpha + (1 - p_ss(3))^2 p_1 alpha.
///
/// The printed closed form multiplies both terms by p_3 alpha, which would
/// make the bound identically p_3 alpha; the second coefficient here is
/// p_1 alpha, as its own derivation and interpretation require.
/// Throws NotTypeII.
double lb_type2(const TransitionMatrix& p, const RewardVector& alpha);

/// Upper bound, equal to the sum reward of the genie-aided scheduler:
///   w3 p_3 alpha + w2 p_2 alpha + w1 p_1 alpha with
///   w3 = 2 p_ss(3) - p_ss(3)^2, w2 = 2 p_ss(1) p_ss(2) + p_ss(2)^2, w1 = p_ss(1)^2.
double upper_bound(const TransitionMatrix& p, const RewardVector& alpha);

struct BoundWeights {
    double best3 = 0.0;  // at least one user in state 3
    double best2 = 0.0;  // no state 3, at least one state 2
    double best1 = 0.0;  // both users in state 1
};

BoundWeights genie_weights(const Vec3& steady);

struct BoundsReport {
    SystemType system = SystemType::TypeI;
    double lower = 0.0;
    double upper = 0.0;
    BoundWeights weights;
    Vec3 fresh_rewards{};  // p_1 alpha, p_2 alpha, p_3 alpha
    double steady_reward = 0.0;
};

/// Applicable lower bound (by system type) plus the upper bound.
BoundsReport compute_bounds(const TransitionMatrix& p, const RewardVector& alpha);

}  // namespace arqsched
