#include <doctest.h>

#include "arqsched/error.hpp"
#include "arqsched/policy.hpp"
#include "arqsched/random.hpp"
#include "fixtures.hpp"

using namespace arqsched;
using doctest::Approx;

namespace {

JointInfoState joint(BeliefState a, BeliefState b, std::optional<User> last = std::nullopt) {
    JointInfoState s;
    s.first = a;
    s.second = b;
    s.scheduled_last = last;
    return s;
}

BeliefState obs(int state, int lag) { return BeliefState::observed(state - 1, lag); }

}  // namespace

TEST_CASE("classification") {
    CHECK(classify_system(fixtures::iid(), fixtures::half()) == SystemType::TypeI);
    CHECK(classify_system(fixtures::pa(), fixtures::half()) == SystemType::TypeII);
    CHECK(classify_system(fixtures::pa(), RewardVector::make(0, 0.9, 1)) == SystemType::TypeI);
    CHECK(classify_system(fixtures::prop12(), RewardVector::make(0, 0.4, 1)) ==
          SystemType::TypeI);
}

TEST_CASE("threshold L") {
    CHECK(threshold_L(fixtures::iid(), fixtures::half()) == 0);
    const auto a = RewardVector::make(0, 0.9, 1);
    CHECK(threshold_L(fixtures::pa(), a) == 3);
    const auto r3 = reward_curve(fixtures::pa(), a, 2, 4);
    CHECK(r3[2] == Approx(0.8393).epsilon(1e-4));
    CHECK(r3[3] == Approx(0.8062).epsilon(1e-4));
    // p_2 alpha equals the limit: r_3 never reaches it.
    CHECK_FALSE(threshold_L(fixtures::ps(), fixtures::half()).has_value());
    CHECK_THROWS_AS(threshold_L(fixtures::pa(), fixtures::half()), Error);
}

TEST_CASE("threshold L is the first crossing on random Type I instances") {
    Rng rng(3);
    int seen = 0;
    while (seen < 100) {
        const auto p = instances::random_valid_matrix(rng);
        const auto a = instances::random_normalized_reward(rng);
        if (classify_system(p, a) != SystemType::TypeI) continue;
        ++seen;
        const auto l = threshold_L(p, a);
        if (!l) continue;
        const auto r3 = reward_curve(p, a, 2, *l);
        const double p2a = fresh_reward(p, a, 1);
        CHECK(r3[*l] <= p2a);
        for (int k = 0; k < *l; ++k) CHECK(r3[k] > p2a);
    }
}

TEST_CASE("argmax decisions") {
    const auto p = fixtures::pa();
    const auto a = fixtures::half();
    CHECK(greedy_argmax(joint(obs(3, 0), obs(1, 5)), p, a).action == User::One);
    const auto tie = greedy_argmax(joint(BeliefState::steady(), BeliefState::steady()), p, a);
    CHECK(tie.action == User::One);
    CHECK(tie.rationale == Rationale::ArgmaxTie);
    CHECK(greedy_argmax(joint(BeliefState::steady(), BeliefState::steady(), User::Two), p, a)
              .action == User::Two);
    const auto d = greedy_argmax(joint(obs(2, 0), obs(3, 1)), p, a);
    CHECK(d.action == User::Two);
    CHECK(d.expected_immediate == Approx(0.78875));
}

TEST_CASE("structured decisions") {
    const auto p = fixtures::pa();
    const auto a1 = RewardVector::make(0, 0.9, 1);
    const auto r3 = greedy_structured(Feedback::F3, joint(obs(3, 0), obs(1, 2), User::One),
                                      SystemType::TypeI, p, a1);
    CHECK(r3.action == User::One);
    CHECK(r3.rationale == Rationale::RetainOnF3);
    for (int k : {0, 1, 5, 40}) {
        const auto d = greedy_structured(Feedback::F2, joint(obs(1, k), obs(2, 0), User::Two),
                                         SystemType::TypeI, p, a1);
        CHECK(d.action == User::Two);
        CHECK(d.rationale == Rationale::RetainOnF2);
    }
    const auto sw = greedy_structured(Feedback::F2, joint(obs(2, 0), obs(3, 1), User::One),
                                      SystemType::TypeII, p, fixtures::half());
    CHECK(sw.action == User::Two);
    CHECK(sw.rationale == Rationale::ComparedRewards);
    const auto f1 = greedy_structured(Feedback::F1, joint(obs(1, 0), obs(1, 3), User::One),
                                      SystemType::TypeII, p, fixtures::half());
    CHECK(f1.action == User::Two);
    CHECK(f1.rationale == Rationale::SwitchOnF1);
    CHECK_THROWS_AS(greedy_structured(Feedback::F1, joint(obs(1, 0), obs(1, 3)),
                                      SystemType::TypeII, p, fixtures::half()),
                    Error);
}

TEST_CASE("genie") {
    CHECK(genie_decide(2, 1, std::nullopt) == User::One);
    CHECK(genie_decide(0, 0, User::Two) == User::Two);
    CHECK(genie_decide(0, 0, std::nullopt) == User::One);
    CHECK(genie_decide(1, 2, User::One) == User::Two);
}

TEST_CASE("joint state transitions") {
    const auto s = joint(BeliefState::steady(), obs(1, 4), User::Two);
    const auto n = s.after(User::One, Feedback::F3, 64);
    CHECK(n.first == obs(3, 0));
    CHECK(n.second == obs(1, 5));
    CHECK(n.scheduled_last == User::One);
    CHECK(n.render() == "(3@0,1@5,1)");
    CHECK(s.after(User::One, Feedback::F1, 4).second.is_steady());
}
