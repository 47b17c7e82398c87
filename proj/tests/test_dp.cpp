#include <doctest.h>

#include <cmath>
#include <functional>

#include "arqsched/dp.hpp"
#include "arqsched/error.hpp"
#include "arqsched/random.hpp"
#include "fixtures.hpp"

using namespace arqsched;
using doctest::Approx;

namespace {

// Unmemoized backward induction over numeric belief vectors. `pick` chooses
// the action from (belief1, belief2); empty means maximize over both.
double brute_force(const TransitionMatrix& p, const RewardVector& a, const Vec3& b1,
                   const Vec3& b2, int k,
                   const std::function<int(const Vec3&, const Vec3&)>& pick = {}) {
    if (k == 0) return 0.0;
    auto q = [&](int user) {
        const Vec3& mine = user == 0 ? b1 : b2;
        const Vec3 theirs = row_times(user == 0 ? b2 : b1, p.entries());
        double total = dot(mine, a.values());
        for (int j = 0; j < 3; ++j) {
            const Vec3& fresh = p.row(j);
            total += mine[j] * (user == 0 ? brute_force(p, a, fresh, theirs, k - 1, pick)
                                          : brute_force(p, a, theirs, fresh, k - 1, pick));
        }
        return total;
    };
    if (pick) return q(pick(b1, b2));
    return std::max(q(0), q(1));
}

}  // namespace

TEST_CASE("optimal value matches unmemoized recursion") {
    Rng rng(21);
    for (int t = 0; t < 25; ++t) {
        const auto p = instances::random_valid_matrix(rng);
        const auto a = instances::random_general_reward(rng);
        const Vec3 pi = p.steady_state();
        for (int h = 1; h <= 4; ++h) {
            const auto table = optimal_dp(p, a, h, 8, false);
            CHECK(table.root_value() == Approx(brute_force(p, a, pi, pi, h)).epsilon(1e-12));
        }
    }
}

TEST_CASE("greedy value matches unmemoized recursion") {
    Rng rng(22);
    auto argmax = [](const TransitionMatrix& p, const RewardVector& a) {
        return [&p, &a](const Vec3& b1, const Vec3& b2) {
            (void)p;
            return dot(b2, a.values()) > dot(b1, a.values()) ? 1 : 0;
        };
    };
    for (int t = 0; t < 25; ++t) {
        const auto p = instances::random_valid_matrix(rng);
        const auto a = instances::random_general_reward(rng);
        const Vec3 pi = p.steady_state();
        for (int h = 1; h <= 4; ++h) {
            CHECK(greedy_value(p, a, JointInfoState{}, h) ==
                  Approx(brute_force(p, a, pi, pi, h, argmax(p, a))).epsilon(1e-10));
        }
    }
}

TEST_CASE("horizon 1 actions equal the argmax") {
    Rng rng(23);
    for (int t = 0; t < 20; ++t) {
        const auto p = instances::random_valid_matrix(rng);
        const auto a = instances::random_general_reward(rng);
        const auto table = optimal_dp(p, a, 1, 4, false);
        for (const auto& [s, k] : table.keys()) {
            CHECK(table.find(s, k)->action == greedy_argmax(s, p, a).action);
        }
    }
}

TEST_CASE("memoryless channel makes every action equal") {
    const auto p = fixtures::iid();
    const auto a = fixtures::half();
    const auto table = optimal_dp(p, a, 5, 8, false);
    CHECK(table.root_value() == Approx(2.5).epsilon(1e-14));
    for (const auto& [s, k] : table.keys()) {
        const auto* e = table.find(s, k);
        CHECK(e->q_first == Approx(0.5 * k).epsilon(1e-14));
        CHECK(e->q_second == Approx(0.5 * k).epsilon(1e-14));
    }
    const auto c = compare_greedy_vs_optimal(p, a, 4, 8);
    CHECK(c.restricted_agreement == 1.0);
    CHECK(c.unrestricted_agreement == 1.0);
    CHECK(std::fabs(c.unrestricted_gap) < 1e-12);
}

TEST_CASE("greedy is optimal in the restricted class on the reference constant-middle-column chain") {
    const auto p = fixtures::prop12(16);
    const auto a = RewardVector::make(0, 0.4, 1);
    const auto table = optimal_dp(p, a, 6, 16, true);
    for (const auto& [s, k] : table.keys()) {
        const auto* e = table.find(s, k);
        const User g = greedy_argmax(s, p, a).action;
        const double q = g == User::One ? e->q_first : e->q_second;
        CHECK(q >= e->value - 1e-12);
    }
    const auto c = compare_greedy_vs_optimal(p, a, 6, 16);
    CHECK(std::fabs(c.restricted_gap) <= 1e-12);
    CHECK(c.restricted_agreement == 1.0);
    CHECK_FALSE(c.restricted_counterexample.has_value());
    // Unrestricted gap is reported, not required; record what this chain gives.
    CHECK(c.unrestricted_gap >= -1e-12);
    MESSAGE("unrestricted gap " << c.unrestricted_gap);
}

TEST_CASE("restricted DP excludes switching right after F3") {
    const auto p = fixtures::pa();
    const auto a = fixtures::half();
    const auto table = optimal_dp(p, a, 4, 8, true);
    int forced = 0;
    for (const auto& [s, k] : table.keys()) {
        if (s.scheduled_last && s.belief(*s.scheduled_last) == observe(Feedback::F3)) {
            const auto* e = table.find(s, k);
            CHECK(e->action == *s.scheduled_last);
            CHECK(std::isnan(*s.scheduled_last == User::One ? e->q_second : e->q_first));
            ++forced;
        }
    }
    CHECK(forced > 0);
}

TEST_CASE("restricted value never exceeds the unrestricted value") {
    Rng rng(24);
    for (int t = 0; t < 20; ++t) {
        const auto p = instances::random_valid_matrix(rng);
        const auto a = instances::random_general_reward(rng);
        const auto c = compare_greedy_vs_optimal(p, a, 4, 8);
        CHECK(c.restricted_value <= c.unrestricted_value + 1e-12);
        CHECK(c.greedy_value <= c.unrestricted_value + 1e-12);
    }
}

TEST_CASE("argument checks") {
    CHECK_THROWS_AS(optimal_dp(fixtures::pa(), fixtures::half(), 7, 6, false), Error);
    try {
        optimal_dp(fixtures::pa(), fixtures::half(), 7, 6, false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CapTooSmall);
    }
    CHECK_THROWS_AS(optimal_dp(fixtures::pa(), fixtures::half(), 0, 6, false), Error);
}
