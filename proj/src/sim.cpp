#include "arqsched/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "arqsched/error.hpp"
#include "arqsched/random.hpp"

namespace arqsched {

namespace {

constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kPolicyStream = 2;
constexpr std::uint64_t kEpisodeStream = 0x5eed;

struct EpisodeTotals {
    double reward = 0.0;
    std::int64_t slots = 0;
    std::vector<double> batch_means;  // filled only for single-episode runs
};

class Engine {
public:
    Engine(const SimConfig& config)
        : config_(config), system_(classify_system(config.p, config.alpha)) {}

    template <class Sink>
    void run(std::uint64_t seed, Sink&& sink) const {
        const auto& p = config_.p;
        const auto& alpha = config_.alpha;
        Rng channel(derive_seed(seed, kChannelStream, 0));
        Rng chooser(derive_seed(seed, kPolicyStream, 0));

        // The genie needs the states of the slot before the first.
        std::array<int, 2> prev{channel.categorical(p.steady_state()),
                                channel.categorical(p.steady_state())};
        std::array<int, 2> cur{channel.categorical(p.row(prev[0])),
                               channel.categorical(p.row(prev[1]))};
        JointInfoState info;
        std::optional<Feedback> last_feedback;

        for (int slot = 1; slot <= config_.horizon; ++slot) {
            User user = User::One;
            std::optional<Rationale> rationale;
            switch (config_.policy) {
                case PolicyKind::GreedyArgmax: {
                    const auto d = greedy_argmax(info, p, alpha);
                    user = d.action;
                    rationale = d.rationale;
                    break;
                }
                case PolicyKind::GreedyStructured: {
                    const auto d = last_feedback
                                       ? greedy_structured(*last_feedback, info, system_, p, alpha)
                                       : greedy_argmax(info, p, alpha);
                    user = d.action;
                    rationale = d.rationale;
                    break;
                }
                case PolicyKind::Genie:
                    user = genie_decide(prev[0], prev[1], info.scheduled_last);
                    break;
                case PolicyKind::RoundRobin:
                    user = slot % 2 == 1 ? User::One : User::Two;
                    break;
                case PolicyKind::Random:
                    user = chooser.coin() == 0 ? User::One : User::Two;
                    break;
            }

            const int state = cur[static_cast<std::size_t>(index_of(user))];
            const Feedback feedback = feedback_of(state);
            sink(SlotRecord{slot, cur, user, feedback, alpha[state], info.first, info.second,
                            rationale});

            info = info.after(user, feedback, config_.lag_cap);
            last_feedback = feedback;
            prev = cur;
            cur = {channel.categorical(p.row(prev[0])), channel.categorical(p.row(prev[1]))};
        }
    }

private:
    const SimConfig& config_;
    SystemType system_;
};

constexpr int kBatches = 20;

EpisodeTotals accumulate(const SimConfig& config, std::uint64_t seed, bool batches) {
    EpisodeTotals totals;
    const int accounted = config.horizon - config.burn_in;
    const int batch_len = std::max(1, accounted / kBatches);
    double batch_sum = 0.0;
    int batch_count = 0;
    Engine(config).run(seed, [&](const SlotRecord& r) {
        if (r.slot <= config.burn_in) return;
        totals.reward += r.reward;
        ++totals.slots;
        if (batches) {
            batch_sum += r.reward;
            if (++batch_count == batch_len) {
                totals.batch_means.push_back(batch_sum / batch_len);
                batch_sum = 0.0;
                batch_count = 0;
            }
        }
    });
    return totals;
}

double std_error(const std::vector<double>& means) {
    const auto n = static_cast<double>(means.size());
    if (means.size() < 2) return 0.0;
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= n;
    double ss = 0.0;
    for (double m : means) ss += (m - mean) * (m - mean);
    return std::sqrt(ss / (n - 1.0) / n);
}

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(count, 1));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) fn(i);
        });
    }
}

SimResult reduce(PolicyKind policy, std::uint64_t seed, const std::vector<EpisodeTotals>& eps) {
    SimResult out;
    out.policy = policy;
    out.seed = seed;
    out.episodes = static_cast<int>(eps.size());
    double total = 0.0;
    std::vector<double> means;
    for (const auto& e : eps) {
        total += e.reward;
        out.slots += e.slots;
        means.push_back(e.reward / static_cast<double>(e.slots));
    }
    out.eta_hat = total / static_cast<double>(out.slots);
    out.std_err = eps.size() >= 2 ? std_error(means) : std_error(eps.front().batch_means);
    return out;
}

}  // namespace

std::string_view to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::GreedyStructured: return "greedy";
        case PolicyKind::GreedyArgmax: return "greedy-argmax";
        case PolicyKind::Genie: return "genie";
        case PolicyKind::RoundRobin: return "round-robin";
        case PolicyKind::Random: return "random";
    }
    return "?";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
    for (auto k : {PolicyKind::GreedyStructured, PolicyKind::GreedyArgmax, PolicyKind::Genie,
                   PolicyKind::RoundRobin, PolicyKind::Random}) {
        if (to_string(k) == name) return k;
    }
    if (name == "greedy-structured") return PolicyKind::GreedyStructured;
    return std::nullopt;
}

void SimConfig::check() const {
    if (horizon < 1) throw Error(ErrorCode::InvalidConfig, "horizon must be at least 1");
    if (episodes < 1) throw Error(ErrorCode::InvalidConfig, "episodes must be at least 1");
    if (burn_in < 0 || burn_in >= horizon) {
        throw Error(ErrorCode::InvalidConfig, "burn-in must lie in [0, horizon)");
    }
    if (lag_cap < 1) throw Error(ErrorCode::InvalidConfig, "lag cap must be at least 1");
}

SimConfig make_sim_config(const TransitionMatrix& p, const RewardVector& alpha,
                          PolicyKind policy, int horizon, int episodes, std::uint64_t seed) {
    SimConfig c{p, alpha};
    c.policy = policy;
    c.horizon = horizon;
    c.episodes = episodes;
    c.seed = seed;
    c.burn_in = horizon / 10;
    return c;
}

std::uint64_t episode_seed(std::uint64_t seed, int index) {
    return derive_seed(seed, kEpisodeStream, static_cast<std::uint64_t>(index));
}

EpisodeTrace run_episode(const SimConfig& config, std::uint64_t seed) {
    config.check();
    EpisodeTrace trace;
    trace.seed = seed;
    trace.slots.reserve(static_cast<std::size_t>(config.horizon));
    Engine(config).run(seed, [&](const SlotRecord& r) { trace.slots.push_back(r); });
    return trace;
}

std::string EpisodeTrace::to_csv() const {
    std::ostringstream out;
    out.precision(12);
    out << "slot,s1,s2,action,feedback,reward,belief1,belief2\n";
    for (const auto& r : slots) {
        out << r.slot << ',' << r.states[0] + 1 << ',' << r.states[1] + 1 << ','
            << number_of(r.action) << ",F" << state_of(r.feedback) + 1 << ',' << r.reward << ','
            << r.belief_first.render() << ',' << r.belief_second.render() << '\n';
    }
    return out.str();
}

SimResult estimate_sum_reward(const SimConfig& config) {
    config.check();
    std::vector<EpisodeTotals> eps(static_cast<std::size_t>(config.episodes));
    const bool batches = config.episodes == 1;
    parallel_for(config.episodes, config.threads, [&](int i) {
        eps[static_cast<std::size_t>(i)] = accumulate(config, episode_seed(config.seed, i), batches);
    });
    return reduce(config.policy, config.seed, eps);
}

SimResult estimate_two_state_greedy(const Mat2& reduced, double reward_bad, double reward_good,
                                    int horizon, int episodes, std::uint64_t seed, int burn_in,
                                    int threads) {
    if (horizon < 1 || episodes < 1 || burn_in < 0 || burn_in >= horizon) {
        throw Error(ErrorCode::InvalidConfig, "invalid two-state simulation budget");
    }
    const double to_good = reduced[0][1];
    const double to_bad = reduced[1][0];
    const double steady_good = to_good / (to_good + to_bad);

    // good_prob[j][l]: P(good) for a user observed in state j, l + 1 slots ago.
    std::array<std::vector<double>, 2> good_prob;
    for (int j = 0; j < 2; ++j) {
        double g = reduced[static_cast<std::size_t>(j)][1];
        for (int l = 0; l <= kDefaultLagCap; ++l) {
            good_prob[static_cast<std::size_t>(j)].push_back(g);
            g = g * reduced[1][1] + (1.0 - g) * reduced[0][1];
        }
    }
    auto belief_good = [&](const BeliefState& b) {
        return b.is_steady() ? steady_good
                             : good_prob[static_cast<std::size_t>(b.origin())]
                                        [static_cast<std::size_t>(b.lag())];
    };

    std::vector<EpisodeTotals> eps(static_cast<std::size_t>(episodes));
    const bool batches = episodes == 1;
    parallel_for(episodes, threads, [&](int i) {
        Rng channel(derive_seed(episode_seed(seed, i), kChannelStream, 0));
        auto step = [&](int s) {
            const double p_good = reduced[static_cast<std::size_t>(s)][1];
            return channel.uniform() < p_good ? 1 : 0;
        };
        std::array<int, 2> cur{channel.uniform() < steady_good ? 1 : 0,
                               channel.uniform() < steady_good ? 1 : 0};
        std::array<BeliefState, 2> belief{BeliefState::steady(), BeliefState::steady()};
        int last = 0;
        EpisodeTotals totals;
        const int batch_len = std::max(1, (horizon - burn_in) / kBatches);
        double batch_sum = 0.0;
        int batch_count = 0;
        for (int slot = 1; slot <= horizon; ++slot) {
            const double g0 = belief_good(belief[0]);
            const double g1 = belief_good(belief[1]);
            const int user = g0 == g1 ? last : (g0 > g1 ? 0 : 1);
            const int s = cur[static_cast<std::size_t>(user)];
            const double reward = s == 1 ? reward_good : reward_bad;
            if (slot > burn_in) {
                totals.reward += reward;
                ++totals.slots;
                if (batches) {
                    batch_sum += reward;
                    if (++batch_count == batch_len) {
                        totals.batch_means.push_back(batch_sum / batch_len);
                        batch_sum = 0.0;
                        batch_count = 0;
                    }
                }
            }
            belief[static_cast<std::size_t>(user)] = BeliefState::observed(s, 0);
            belief[static_cast<std::size_t>(1 - user)] = advance(belief[static_cast<std::size_t>(1 - user)]);
            last = user;
            cur = {step(cur[0]), step(cur[1])};
        }
        eps[static_cast<std::size_t>(i)] = std::move(totals);
    });
    return reduce(PolicyKind::GreedyArgmax, seed, eps);
}

bool SandwichReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

namespace {

// x <= y + 3 se, reported as slack in standard errors.
InequalityCheck at_most(std::string name, double x, double y, double se) {
    InequalityCheck c;
    c.name = std::move(name);
    if (se > 0.0) {
        c.margin_sigmas = (y - x) / se + 3.0;
        c.pass = c.margin_sigmas >= 0.0;
    } else {
        c.margin_sigmas = y - x >= -kTolerances.algebraic ? 3.0 : -3.0;
        c.pass = y - x >= -kTolerances.algebraic;
    }
    return c;
}

}  // namespace

SandwichReport sandwich_check(const TransitionMatrix& p, const RewardVector& alpha, int horizon,
                              int episodes, std::uint64_t seed, int threads) {
    SandwichReport out;
    out.bounds = compute_bounds(p, alpha);

    auto greedy_cfg = make_sim_config(p, alpha, PolicyKind::GreedyStructured, horizon, episodes, seed);
    greedy_cfg.threads = threads;
    auto genie_cfg = greedy_cfg;
    genie_cfg.policy = PolicyKind::Genie;
    out.greedy = estimate_sum_reward(greedy_cfg);
    out.genie = estimate_sum_reward(genie_cfg);

    const double g = out.greedy.eta_hat;
    const double gs = out.greedy.std_err;
    const double G = out.genie.eta_hat;
    const double Gs = out.genie.std_err;
    out.checks.push_back(at_most("lower<=greedy", out.bounds.lower, g, gs));
    out.checks.push_back(at_most("greedy<=upper", g, out.bounds.upper, gs));
    out.checks.push_back(at_most("greedy<=genie", g, G, std::hypot(gs, Gs)));
    auto hi = at_most("genie~upper", G, out.bounds.upper, Gs);
    auto lo = at_most("genie~upper", out.bounds.upper, G, Gs);
    out.checks.push_back(hi.margin_sigmas < lo.margin_sigmas ? hi : lo);
    return out;
}

}  // namespace arqsched
