#include <doctest.h>

#include "arqsched/belief.hpp"
#include "fixtures.hpp"

using namespace arqsched;
using doctest::Approx;

TEST_CASE("observation resets the belief to a fresh row") {
    CHECK(observe(Feedback::F1) == BeliefState::observed(0, 0));
    CHECK(observe(Feedback::F2) == BeliefState::observed(1, 0));
    const auto b = observe(Feedback::F3);
    CHECK(b == BeliefState::observed(2, 0));
    const Vec3 v = materialize(b, fixtures::pa());
    CHECK(v[0] == 0.05);
    CHECK(v[1] == 0.15);
    CHECK(v[2] == 0.8);
}

TEST_CASE("advance ages beliefs and clamps at the cap") {
    CHECK(advance(BeliefState::observed(2, 0)) == BeliefState::observed(2, 1));
    CHECK(advance(BeliefState::steady()).is_steady());
    CHECK(advance(BeliefState::observed(1, 5), 5).is_steady());
    CHECK(advance(BeliefState::observed(1, 4), 5) == BeliefState::observed(1, 5));
}

TEST_CASE("materialize") {
    const Vec3 s = materialize(BeliefState::steady(), fixtures::pa());
    CHECK(s[0] == Approx(4.0 / 15.0));
    CHECK(s[2] == Approx(0.4));

    const Vec3 v = materialize(BeliefState::observed(2, 1), fixtures::ps());
    CHECK(v[0] == Approx(0.21).epsilon(1e-15));
    CHECK(v[1] == Approx(0.33).epsilon(1e-15));
    CHECK(v[2] == Approx(0.46).epsilon(1e-15));

    // Lag beyond the cache still gives row j of P^{l+1}.
    const auto p = TransitionMatrix::validate(fixtures::pa().entries(), 4);
    const Vec3 far = materialize(BeliefState::observed(0, 9), p);
    const Mat3 m = fixtures::slow_power(p.entries(), 10);
    for (int j = 0; j < 3; ++j) CHECK(far[j] == Approx(m[0][j]).epsilon(1e-14));
}

TEST_CASE("expected reward") {
    CHECK(expected_reward(BeliefState::observed(2, 0), fixtures::ps(), fixtures::half()) ==
          Approx(0.75));
    CHECK(expected_reward(BeliefState::steady(), fixtures::iid(), fixtures::half()) ==
          Approx(0.5));
    CHECK(expected_reward(BeliefState::observed(0, 0), fixtures::pa(), fixtures::half()) ==
          Approx(0.125));
}

TEST_CASE("render and parse round trip") {
    for (const auto& b : {BeliefState::steady(), BeliefState::observed(0, 0),
                          BeliefState::observed(2, 17)}) {
        const auto parsed = parse_belief(b.render());
        REQUIRE(parsed.has_value());
        CHECK(*parsed == b);
    }
    CHECK(BeliefState::observed(2, 1).render() == "3@1");
    CHECK_FALSE(parse_belief("4@1").has_value());
    CHECK_FALSE(parse_belief("1@").has_value());
    CHECK_FALSE(parse_belief("1@x").has_value());
    CHECK_FALSE(parse_belief("").has_value());
}

TEST_CASE("codes are distinct") {
    CHECK(BeliefState::steady().code() == 0);
    CHECK(BeliefState::observed(0, 0).code() != BeliefState::observed(1, 0).code());
    CHECK(BeliefState::observed(0, 1).code() != BeliefState::observed(0, 0).code());
}
