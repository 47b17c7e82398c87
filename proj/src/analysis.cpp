#include "arqsched/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "arqsched/belief.hpp"
#include "arqsched/error.hpp"
#include "arqsched/policy.hpp"

namespace arqsched {

namespace {

// Tracks the worst violation seen and where it happened.
class ViolationTracker {
public:
    explicit ViolationTracker(std::string name, double tolerance = kTolerances.algebraic) {
        report_.name = std::move(name);
        report_.tolerance = tolerance;
    }

    void record(double violation, int lag, const std::function<std::string()>& witness) {
        if (violation > worst_) {
            worst_ = violation;
            report_.witness_lag = lag;
            report_.witness = witness();
        }
    }

    VerificationReport finish() {
        if (report_.witness_lag >= 0) report_.worst_margin = -worst_;
        report_.max_violation = std::max(worst_, 0.0);
        report_.pass = report_.max_violation <= report_.tolerance;
        return report_;
    }

private:
    VerificationReport report_;
    double worst_ = -std::numeric_limits<double>::infinity();
};

constexpr Vec3 kE2{0.0, 1.0, 0.0};
constexpr Vec3 kE3{0.0, 0.0, 1.0};

// p_i P^k e for k = 0..k_max, row i of the result holding p_i P^k e.
std::vector<Vec3> column_curves(const TransitionMatrix& p, const Vec3& e, int k_max) {
    std::vector<Vec3> out;
    Vec3 w = times_col(p.entries(), e);
    for (int k = 0; k <= k_max; ++k) {
        out.push_back(w);
        w = times_col(p.entries(), w);
    }
    return out;
}

}  // namespace

VerificationReport verify_reward_ordering(const TransitionMatrix& p, const RewardVector& alpha,
                                          int k_max) {
    ViolationTracker t("reward_ordering");
    const auto curves = reward_curves(p, alpha, k_max);
    for (int k = 0; k <= k_max; ++k) {
        const Vec3& r = curves[static_cast<std::size_t>(k)];
        const double v = std::max(r[0] - r[1], r[1] - r[2]);
        t.record(v, k, [&] {
            return "r1=" + std::to_string(r[0]) + " r2=" + std::to_string(r[1]) +
                   " r3=" + std::to_string(r[2]);
        });
    }
    return t.finish();
}

VerificationReport verify_monotone_curves(const TransitionMatrix& p, const RewardVector& alpha,
                                          int k_max) {
    ViolationTracker t("monotone_curves");
    const auto curves = reward_curves(p, alpha, k_max);
    for (int k = 0; k < k_max; ++k) {
        const Vec3& now = curves[static_cast<std::size_t>(k)];
        const Vec3& next = curves[static_cast<std::size_t>(k) + 1];
        t.record(next[2] - now[2], k, [] { return std::string("r3 increased"); });
        t.record(now[0] - next[0], k, [] { return std::string("r1 decreased"); });
    }
    if (k_max >= kDefaultLagCap) {
        const double limit = steady_reward(p, alpha);
        const Vec3& last = curves.back();
        for (int i = 0; i < 3; ++i) {
            const double err = std::abs(last[static_cast<std::size_t>(i)] - limit);
            t.record(err - kTolerances.limit, k_max, [&] {
                return "r" + std::to_string(i + 1) + " is " + std::to_string(err) +
                       " from p_ss alpha";
            });
        }
    }
    return t.finish();
}

ConditionAReport check_condition_A(const TransitionMatrix& p, int k_max) {
    const double tol = kTolerances.algebraic;
    ConditionAReport out;
    const auto seq = column_curves(p, kE3, std::max(k_max, 1));
    // seq[k][1] = p_2 P^k e3
    out.margin = p(1, 2) - seq[1][1];
    out.holds = out.margin >= -tol;
    out.nonincreasing = true;
    out.nondecreasing = true;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        const double d = seq[k + 1][1] - seq[k][1];
        if (d > tol) out.nonincreasing = false;
        if (d < -tol) out.nondecreasing = false;
    }
    out.direction_predicted = out.nonincreasing == out.holds;
    out.steady3 = p.steady_state()[2];
    out.limit_below_p23 = out.steady3 <= p(1, 2) + tol;
    return out;
}

VerificationReport verify_lemma11(const TransitionMatrix& p, int k_max) {
    const auto a = check_condition_A(p, k_max);
    if (!a.holds) {
        throw Error(ErrorCode::ConditionAFailed,
                    "condition (A) fails with margin " + std::to_string(a.margin));
    }
    ViolationTracker t("row1_state3_nondecreasing");
    const auto seq = column_curves(p, kE3, k_max);
    for (int k = 0; k < k_max; ++k) {
        const double d = seq[static_cast<std::size_t>(k)][0] - seq[static_cast<std::size_t>(k) + 1][0];
        t.record(d, k, [] { return std::string("p_1 P^k e3 decreased"); });
    }
    t.record(a.steady3 - p(1, 2), k_max, [] { return std::string("p_ss(3) > p_23"); });
    return t.finish();
}

Prop12Conditions check_prop12_conditions(const TransitionMatrix& p) {
    const double tol = kTolerances.algebraic;
    Prop12Conditions out;
    out.constant_middle_column =
        std::abs(p(0, 1) - p(1, 1)) <= tol && std::abs(p(2, 1) - p(1, 1)) <= tol;
    out.cross_product = p(1, 2) * p(2, 0) >= p(1, 0) * p(0, 2) - tol;
    out.satisfied = out.constant_middle_column && out.cross_product;
    if (out.satisfied) {
        out.steady2_equals_p22 = std::abs(p.steady_state()[1] - p(1, 1)) <= tol;
        out.condition_A = check_condition_A(p).holds;
    }
    return out;
}

bool ConditionSReport::all_pass() const {
    return std::all_of(cases.begin(), cases.end(), [](const auto& c) { return c.pass; }) &&
           symmetry.pass && contraction.pass && premise.pass;
}

ConditionSReport verify_condition_S(const TransitionMatrix& p, const RewardVector& alpha,
                                    int k_max) {
    if (!check_prop12_conditions(p).satisfied) {
        throw Error(ErrorCode::Prop12ConditionsFailed,
                    "condition (S) is only claimed when p12 = p22 = p32 and p23 p31 >= p21 p13");
    }
    if (k_max < 1) throw Error(ErrorCode::InvalidConfig, "k_max must be at least 1");

    ConditionSReport out;
    out.threshold_L = threshold_L(p, alpha);
    ViolationTracker premise("condition_S_premise");

    auto check_pair = [&](ViolationTracker& t, const BeliefState& hat, const BeliefState& tilde) {
        const Vec3 h = materialize(hat, p);
        const Vec3 w = materialize(tilde, p);
        const double margin = h[2] * w[1] - h[1] * w[2];
        const int lag = std::max(hat.is_steady() ? 0 : hat.lag(), tilde.is_steady() ? 0 : tilde.lag());
        auto witness = [&] { return "hat=" + hat.render() + " tilde=" + tilde.render(); };
        t.record(-margin, lag, witness);
        premise.record(expected_reward(tilde, p, alpha) - expected_reward(hat, p, alpha), lag,
                       witness);
    };
    auto obs = [](int origin, int lag) { return BeliefState::observed(origin, lag); };

    // 1. hat just fed back F3; tilde is any older observation or never scheduled.
    {
        ViolationTracker t("condition_S_case1");
        check_pair(t, obs(2, 0), BeliefState::steady());
        for (int i = 0; i < 3; ++i)
            for (int k = 1; k <= k_max; ++k) check_pair(t, obs(2, 0), obs(i, k));
        out.cases[0] = t.finish();
    }
    // 2. tilde just fed back F1; hat is any older observation or never scheduled.
    {
        ViolationTracker t("condition_S_case2");
        check_pair(t, BeliefState::steady(), obs(0, 0));
        for (int i = 0; i < 3; ++i)
            for (int k = 1; k <= k_max; ++k) check_pair(t, obs(i, k), obs(0, 0));
        out.cases[1] = t.finish();
    }
    // 3. hat just fed back F2; tilde was dropped on F1 or never scheduled.
    {
        ViolationTracker t("condition_S_case3");
        check_pair(t, obs(1, 0), BeliefState::steady());
        for (int k = 1; k <= k_max; ++k) check_pair(t, obs(1, 0), obs(0, k));
        out.cases[2] = t.finish();
    }
    // 4. hat just fed back F2; tilde was dropped on F2.
    {
        ViolationTracker t("condition_S_case4");
        for (int k = 1; k <= k_max; ++k) check_pair(t, obs(1, 0), obs(1, k));
        out.cases[3] = t.finish();
    }
    // 5. hat just fed back F2; tilde dropped on F3 at least L + 1 slots ago.
    {
        ViolationTracker t("condition_S_case5");
        if (out.threshold_L) {
            const int first = std::max(*out.threshold_L, 1);
            for (int k = first; k < first + k_max; ++k) check_pair(t, obs(1, 0), obs(2, k));
        }
        out.cases[4] = t.finish();
    }
    // 6. tilde just fed back F2; hat dropped on F3 fewer than L + 1 slots ago.
    {
        ViolationTracker t("condition_S_case6");
        const int last = out.threshold_L ? std::min(*out.threshold_L - 1, k_max) : k_max;
        for (int k = 1; k <= last; ++k) check_pair(t, obs(2, k), obs(1, 0));
        out.cases[5] = t.finish();
    }

    {
        ViolationTracker t("middle_column_symmetry");
        const auto seq = column_curves(p, kE2, k_max);
        for (int k = 1; k <= k_max; ++k) {
            for (int i = 0; i < 3; ++i) {
                const double v = std::abs(seq[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] - p(1, 1));
                t.record(v, k, [&] { return "origin " + std::to_string(i + 1); });
            }
        }
        out.symmetry = t.finish();
    }
    {
        ViolationTracker t("contraction_factor");
        const double factor = p(2, 2) * p(1, 1) - p(1, 2) * p(2, 1);
        t.record(-factor, 0, [&] { return "p33 p22 - p23 p32 = " + std::to_string(factor); });
        out.contraction = t.finish();
    }
    out.premise = premise.finish();
    return out;
}

std::string to_string(EquivalenceMode::Kind kind) {
    switch (kind) {
        case EquivalenceMode::Kind::None: return "None";
        case EquivalenceMode::Kind::MergeStates23: return "MergeStates23";
        case EquivalenceMode::Kind::Synonymous12: return "Synonymous12";
    }
    return "?";
}

EquivalenceMode detect_equivalence_mode(const TransitionMatrix& p, const RewardVector& alpha) {
    const double tol = kTolerances.algebraic;
    EquivalenceMode out;
    if (std::abs(alpha[1] - alpha[2]) > tol) return out;
    if (std::abs(p(1, 0) - p(2, 0)) <= tol) {
        out.kind = EquivalenceMode::Kind::MergeStates23;
        out.reduced = Mat2{{{p(0, 0), p(0, 1) + p(0, 2)}, {p(1, 0), p(1, 1) + p(1, 2)}}};
    } else if (std::abs(p(0, 0) - p(1, 0)) <= tol) {
        out.kind = EquivalenceMode::Kind::Synonymous12;
    }
    return out;
}

}  // namespace arqsched
