#include "arqsched/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arqsched/error.hpp"

namespace arqsched {

namespace {

constexpr int kCodeBits = 20;
constexpr std::uint64_t kCodeMask = (1ULL << kCodeBits) - 1;

BeliefState decode_belief(std::uint64_t code) {
    if (code == 0) return BeliefState::steady();
    const int c = static_cast<int>(code) - 1;
    return BeliefState::observed(c % 3, c / 3);
}

enum class Mode { Optimal, Restricted, Greedy };

}  // namespace

std::uint64_t ValueTable::key(const JointInfoState& s, int k) {
    const std::uint64_t sched = s.scheduled_last ? static_cast<std::uint64_t>(number_of(*s.scheduled_last)) : 0;
    return static_cast<std::uint64_t>(s.first.code()) |
           (static_cast<std::uint64_t>(s.second.code()) << kCodeBits) |
           (sched << (2 * kCodeBits)) | (static_cast<std::uint64_t>(k) << (2 * kCodeBits + 2));
}

JointInfoState ValueTable::decode(std::uint64_t key, int& k) {
    JointInfoState s;
    s.first = decode_belief(key & kCodeMask);
    s.second = decode_belief((key >> kCodeBits) & kCodeMask);
    const auto sched = (key >> (2 * kCodeBits)) & 3ULL;
    if (sched != 0) s.scheduled_last = static_cast<User>(sched);
    k = static_cast<int>(key >> (2 * kCodeBits + 2));
    return s;
}

const ValueTable::Entry* ValueTable::find(const JointInfoState& state, int k) const {
    auto it = table_.find(key(state, k));
    return it == table_.end() ? nullptr : &it->second;
}

double ValueTable::root_value() const {
    const Entry* e = find(JointInfoState{}, horizon_);
    return e ? e->value : 0.0;
}

std::vector<std::pair<JointInfoState, int>> ValueTable::keys() const {
    std::vector<std::pair<JointInfoState, int>> out;
    out.reserve(table_.size());
    for (const auto& [k, entry] : table_) {
        int remaining = 0;
        JointInfoState s = decode(k, remaining);
        out.emplace_back(s, remaining);
    }
    return out;
}

class DpSolver {
public:
    DpSolver(const TransitionMatrix& p, const RewardVector& alpha, int lag_cap, Mode mode)
        : p_(p), alpha_(alpha), lag_cap_(lag_cap), mode_(mode) {}

    double value(const JointInfoState& s, int k) {
        if (k == 0) return 0.0;
        const auto key = ValueTable::key(s, k);
        if (auto it = table_.table_.find(key); it != table_.table_.end()) return it->second.value;

        ValueTable::Entry entry;
        constexpr double excluded = std::numeric_limits<double>::quiet_NaN();
        if (mode_ == Mode::Greedy) {
            const User a = greedy_argmax(s, p_, alpha_).action;
            const double q = action_value(s, a, k);
            entry.action = a;
            entry.value = q;
            entry.q_first = a == User::One ? q : excluded;
            entry.q_second = a == User::Two ? q : excluded;
        } else {
            const bool forced = mode_ == Mode::Restricted && s.scheduled_last &&
                                s.belief(*s.scheduled_last) == observe(Feedback::F3);
            entry.q_first = forced && *s.scheduled_last != User::One ? excluded
                                                                      : action_value(s, User::One, k);
            entry.q_second = forced && *s.scheduled_last != User::Two
                                 ? excluded
                                 : action_value(s, User::Two, k);
            if (std::isnan(entry.q_second) ||
                (!std::isnan(entry.q_first) && entry.q_first > entry.q_second)) {
                entry.action = User::One;
            } else if (std::isnan(entry.q_first) || entry.q_second > entry.q_first) {
                entry.action = User::Two;
            } else {
                entry.action = s.scheduled_last.value_or(User::One);
            }
            entry.value = entry.action == User::One ? entry.q_first : entry.q_second;
        }
        table_.table_.emplace(key, entry);
        return entry.value;
    }

    ValueTable take(int horizon, bool restricted) {
        table_.horizon_ = horizon;
        table_.restricted_ = restricted;
        return std::move(table_);
    }

private:
    double action_value(const JointInfoState& s, User a, int k) {
        const Vec3 pi = materialize(s.belief(a), p_);
        double total = dot(pi, alpha_.values());
        for (int j = 0; j < 3; ++j) {
            if (pi[j] == 0.0) continue;
            total += pi[j] * value(s.after(a, feedback_of(j), lag_cap_), k - 1);
        }
        return total;
    }

    const TransitionMatrix& p_;
    const RewardVector& alpha_;
    int lag_cap_;
    Mode mode_;
    ValueTable table_;
};

namespace {

void check_dp_args(int horizon, int lag_cap) {
    if (horizon < 1) throw Error(ErrorCode::InvalidConfig, "horizon must be at least 1");
    if (lag_cap < 1) throw Error(ErrorCode::InvalidConfig, "lag cap must be at least 1");
    if (horizon > lag_cap) {
        throw Error(ErrorCode::CapTooSmall, "horizon " + std::to_string(horizon) +
                                                " exceeds lag cap " + std::to_string(lag_cap));
    }
}

}  // namespace

ValueTable optimal_dp(const TransitionMatrix& p, const RewardVector& alpha, int horizon,
                      int lag_cap, bool restricted) {
    check_dp_args(horizon, lag_cap);
    DpSolver solver(p, alpha, lag_cap, restricted ? Mode::Restricted : Mode::Optimal);
    solver.value(JointInfoState{}, horizon);
    return solver.take(horizon, restricted);
}

double greedy_value(const TransitionMatrix& p, const RewardVector& alpha,
                    const JointInfoState& state, int k) {
    if (k < 0) throw Error(ErrorCode::InvalidConfig, "remaining intervals must be nonnegative");
    DpSolver solver(p, alpha, std::max(k, p.lag_cap()), Mode::Greedy);
    return solver.value(state, k);
}

namespace {

struct Agreement {
    double fraction = 1.0;
    std::size_t states = 0;
    std::optional<std::string> first_disagreement;
};

Agreement measure_agreement(const ValueTable& table, const TransitionMatrix& p,
                            const RewardVector& alpha) {
    Agreement out;
    std::size_t agree = 0;
    auto keys = table.keys();
    // Deterministic reporting order: shallow states (large k) first.
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first.render() < b.first.render();
    });
    for (const auto& [state, k] : keys) {
        const auto* e = table.find(state, k);
        const User g = greedy_argmax(state, p, alpha).action;
        const double q = g == User::One ? e->q_first : e->q_second;
        const bool ok = !std::isnan(q) && q >= e->value - kTolerances.algebraic;
        if (ok) {
            ++agree;
        } else if (!out.first_disagreement) {
            out.first_disagreement = state.render() + "@k=" + std::to_string(k);
        }
    }
    out.states = keys.size();
    out.fraction = keys.empty() ? 1.0 : static_cast<double>(agree) / static_cast<double>(keys.size());
    return out;
}

}  // namespace

OptimalityComparison compare_greedy_vs_optimal(const TransitionMatrix& p,
                                               const RewardVector& alpha, int horizon,
                                               int lag_cap) {
    const ValueTable restricted = optimal_dp(p, alpha, horizon, lag_cap, true);
    const ValueTable unrestricted = optimal_dp(p, alpha, horizon, lag_cap, false);

    OptimalityComparison out;
    out.horizon = horizon;
    out.greedy_value = greedy_value(p, alpha, JointInfoState{}, horizon);
    out.restricted_value = restricted.root_value();
    out.unrestricted_value = unrestricted.root_value();
    out.restricted_gap = out.restricted_value - out.greedy_value;
    out.unrestricted_gap = out.unrestricted_value - out.greedy_value;

    const auto r = measure_agreement(restricted, p, alpha);
    const auto u = measure_agreement(unrestricted, p, alpha);
    out.restricted_agreement = r.fraction;
    out.restricted_states = r.states;
    out.restricted_counterexample = r.first_disagreement;
    out.unrestricted_agreement = u.fraction;
    out.unrestricted_states = u.states;
    out.counterexample = u.first_disagreement;
    return out;
}

}  // namespace arqsched
