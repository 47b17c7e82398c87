#include "arqsched/bounds.hpp"

#include "arqsched/error.hpp"

namespace arqsched {

// The bounds are written as p_1 alpha plus nonnegative increments so that a
// memoryless channel (all p_i alpha equal) returns p_ss alpha exactly.

BoundWeights genie_weights(const Vec3& steady) {
    const double s1 = steady[0];
    const double s2 = steady[1];
    const double s3 = steady[2];
    BoundWeights w;
    w.best3 = 2.0 * s3 - s3 * s3;
    w.best2 = 2.0 * s1 * s2 + s2 * s2;
    w.best1 = s1 * s1;
    return w;
}

double lb_type1(const TransitionMatrix& p, const RewardVector& alpha) {
    if (classify_system(p, alpha) != SystemType::TypeI) {
        throw Error(ErrorCode::NotTypeI, "the Type I lower bound needs p_2 alpha >= p_ss alpha");
    }
    const double r1 = fresh_reward(p, alpha, 0);
    const double r2 = fresh_reward(p, alpha, 1);
    const double s1 = p.steady_state()[0];
    return r2 - s1 * s1 * (r2 - r1);
}

double lb_type2(const TransitionMatrix& p, const RewardVector& alpha) {
    if (classify_system(p, alpha) != SystemType::TypeII) {
        throw Error(ErrorCode::NotTypeII, "the Type II lower bound needs p_2 alpha < p_ss alpha");
    }
    const double r1 = fresh_reward(p, alpha, 0);
    const double r3 = fresh_reward(p, alpha, 2);
    const double w3 = genie_weights(p.steady_state()).best3;
    return r1 + w3 * (r3 - r1);
}

double upper_bound(const TransitionMatrix& p, const RewardVector& alpha) {
    const double r1 = fresh_reward(p, alpha, 0);
    const double r2 = fresh_reward(p, alpha, 1);
    const double r3 = fresh_reward(p, alpha, 2);
    const auto w = genie_weights(p.steady_state());
    // w3 r3 + w2 r2 + w1 r1 with w2 = 1 - w1 - w3
    return r1 + (1.0 - w.best1) * (r2 - r1) + w.best3 * (r3 - r2);
}

BoundsReport compute_bounds(const TransitionMatrix& p, const RewardVector& alpha) {
    BoundsReport out;
    out.system = classify_system(p, alpha);
    out.lower = out.system == SystemType::TypeI ? lb_type1(p, alpha) : lb_type2(p, alpha);
    out.upper = upper_bound(p, alpha);
    out.weights = genie_weights(p.steady_state());
    out.fresh_rewards = {fresh_reward(p, alpha, 0), fresh_reward(p, alpha, 1),
                         fresh_reward(p, alpha, 2)};
    out.steady_reward = steady_reward(p, alpha);
    return out;
}

}  // namespace arqsched
