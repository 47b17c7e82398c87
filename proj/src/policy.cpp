#include "arqsched/policy.hpp"

#include "arqsched/error.hpp"

namespace arqsched {

std::string_view to_string(SystemType t) { return t == SystemType::TypeI ? "I" : "II"; }

std::string_view to_string(Rationale r) {
    switch (r) {
        case Rationale::RetainOnF3: return "RetainOnF3";
        case Rationale::RetainOnF2: return "RetainOnF2";
        case Rationale::SwitchOnF1: return "SwitchOnF1";
        case Rationale::ComparedRewards: return "ComparedRewards";
        case Rationale::ArgmaxTie: return "ArgmaxTie";
    }
    return "?";
}

SystemType classify_system(const TransitionMatrix& p, const RewardVector& alpha) {
    return fresh_reward(p, alpha, 1) >= steady_reward(p, alpha) ? SystemType::TypeI
                                                                : SystemType::TypeII;
}

JointInfoState JointInfoState::after(User scheduled, Feedback feedback, int lag_cap) const {
    JointInfoState next = *this;
    next.belief(scheduled) = observe(feedback);
    next.belief(other(scheduled)) = advance(belief(other(scheduled)), lag_cap);
    next.scheduled_last = scheduled;
    return next;
}

std::string JointInfoState::render() const {
    std::string out = "(" + first.render() + "," + second.render() + ",";
    out += scheduled_last ? std::to_string(number_of(*scheduled_last)) : std::string("-");
    return out + ")";
}

std::optional<int> threshold_L(const TransitionMatrix& p, const RewardVector& alpha) {
    if (classify_system(p, alpha) != SystemType::TypeI) {
        throw Error(ErrorCode::NotTypeI, "threshold L is defined for Type I systems only");
    }
    const double fresh2 = fresh_reward(p, alpha, 1);
    const double limit = steady_reward(p, alpha);
    const double tol = kTolerances.algebraic;

    // r_3 decreases monotonically to p_ss alpha. When p_2 alpha sits on that
    // limit the crossing only happens asymptotically, and floating point
    // would otherwise report the lag at which the decay underflows.
    if (fresh2 - limit <= tol) {
        if (fresh_reward(p, alpha, 2) <= fresh2 + tol) return 0;
        return std::nullopt;
    }

    // Strictly above the limit: a finite crossing exists.
    Vec3 w = times_col(p.entries(), alpha.values());
    for (int k = 0;; ++k) {
        if (w[2] <= fresh2) return k;
        w = times_col(p.entries(), w);
    }
}

PolicyDecision greedy_argmax(const JointInfoState& state, const TransitionMatrix& p,
                             const RewardVector& alpha) {
    const double r1 = expected_reward(state.first, p, alpha);
    const double r2 = expected_reward(state.second, p, alpha);
    if (r1 == r2) {
        const User keep = state.scheduled_last.value_or(User::One);
        return {keep, r1, Rationale::ArgmaxTie};
    }
    return r1 > r2 ? PolicyDecision{User::One, r1, Rationale::ComparedRewards}
                   : PolicyDecision{User::Two, r2, Rationale::ComparedRewards};
}

PolicyDecision greedy_structured(Feedback feedback, const JointInfoState& state,
                                 SystemType system, const TransitionMatrix& p,
                                 const RewardVector& alpha) {
    if (!state.scheduled_last) {
        throw Error(ErrorCode::InvalidConfig,
                    "structured greedy needs the user that produced the feedback");
    }
    const User s = *state.scheduled_last;
    const User u = other(s);
    switch (feedback) {
        case Feedback::F3:
            return {s, fresh_reward(p, alpha, 2), Rationale::RetainOnF3};
        case Feedback::F1: {
            const double waiting = expected_reward(state.belief(u), p, alpha);
            // Only an exact tie (e.g. identical rows) keeps the current user.
            if (waiting == fresh_reward(p, alpha, 0)) return {s, waiting, Rationale::ArgmaxTie};
            return {u, waiting, Rationale::SwitchOnF1};
        }
        case Feedback::F2:
            break;
    }
    const double keep = fresh_reward(p, alpha, 1);
    if (system == SystemType::TypeI) return {s, keep, Rationale::RetainOnF2};
    const double waiting = expected_reward(state.belief(u), p, alpha);
    if (keep >= waiting) return {s, keep, Rationale::ComparedRewards};
    return {u, waiting, Rationale::ComparedRewards};
}

User genie_decide(int prev_state_first, int prev_state_second,
                  std::optional<User> scheduled_last) {
    if (prev_state_first > prev_state_second) return User::One;
    if (prev_state_second > prev_state_first) return User::Two;
    return scheduled_last.value_or(User::One);
}

}  // namespace arqsched
