#include "arqsched/belief.hpp"

#include <charconv>

#include "arqsched/error.hpp"

namespace arqsched {

BeliefState BeliefState::observed(int origin, int lag) {
    if (origin < 0 || origin > 2 || lag < 0) {
        throw Error(ErrorCode::InvalidConfig, "observed belief needs origin 0..2 and lag >= 0");
    }
    return BeliefState(origin, lag);
}

std::string BeliefState::render() const {
    if (is_steady()) return "S";
    return std::to_string(origin_ + 1) + "@" + std::to_string(lag_);
}

BeliefState observe(Feedback feedback) { return BeliefState::observed(state_of(feedback), 0); }

BeliefState advance(const BeliefState& b, int lag_cap) {
    if (b.is_steady() || b.lag() + 1 > lag_cap) return BeliefState::steady();
    return BeliefState::observed(b.origin(), b.lag() + 1);
}

Vec3 materialize(const BeliefState& b, const TransitionMatrix& p) {
    if (b.is_steady()) return p.steady_state();
    // p_j P^l is row j of P^{l+1}.
    return p.n_step(b.lag() + 1)[static_cast<std::size_t>(b.origin())];
}

double expected_reward(const BeliefState& b, const TransitionMatrix& p,
                       const RewardVector& alpha) {
    return dot(materialize(b, p), alpha.values());
}

std::optional<BeliefState> parse_belief(const std::string& text) {
    if (text == "S") return BeliefState::steady();
    const auto at = text.find('@');
    if (at != 1 || text.size() < 3) return std::nullopt;
    const int origin = text[0] - '1';
    if (origin < 0 || origin > 2) return std::nullopt;
    int lag = 0;
    const char* first = text.data() + 2;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, lag);
    if (ec != std::errc() || ptr != last || lag < 0) return std::nullopt;
    return BeliefState::observed(origin, lag);
}

}  // namespace arqsched
