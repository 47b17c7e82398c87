#include "arqsched/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "arqsched/analysis.hpp"
#include "arqsched/bounds.hpp"
#include "arqsched/dp.hpp"
#include "arqsched/error.hpp"
#include "arqsched/instance.hpp"
#include "arqsched/policy.hpp"
#include "arqsched/random.hpp"
#include "arqsched/sim.hpp"

namespace arqsched {

using nlohmann::json;

namespace {

int exit_status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotStochastic:
        case ErrorCode::OrderingViolation:
        case ErrorCode::DegenerateChain:
        case ErrorCode::InvalidReward:
        case ErrorCode::InvalidInstance:
            return kExitInvalidInstance;
        case ErrorCode::NotTypeI:
        case ErrorCode::NotTypeII:
        case ErrorCode::ConditionAFailed:
        case ErrorCode::Prop12ConditionsFailed:
            return kExitCheckFailed;
        case ErrorCode::CapTooSmall:
        case ErrorCode::InvalidConfig:
        case ErrorCode::UnknownCommand:
        case ErrorCode::Usage:
            return kExitUsage;
    }
    return kExitUsage;
}

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Usage, "cannot write '" + path + "'");
    f << text;
}

json threshold_json(const std::optional<int>& l) { return l ? json(*l) : json("inf"); }

VerificationReport condition_A_report(const TransitionMatrix& p, int k_max) {
    const ConditionAReport a = check_condition_A(p, k_max);
    VerificationReport r;
    r.name = "condition_A_direction";
    r.pass = a.direction_predicted;
    r.max_violation = a.direction_predicted ? 0.0 : 1.0;
    r.worst_margin = a.margin;
    std::ostringstream w;
    w << "margin=" << a.margin << " nonincreasing=" << a.nonincreasing
      << " nondecreasing=" << a.nondecreasing;
    r.witness = w.str();
    return r;
}

// Folds `r` into `acc`, keeping the worst case.
void absorb(VerificationReport& acc, const VerificationReport& r, const std::string& tag) {
    if (r.worst_margin < acc.worst_margin) {
        acc.worst_margin = r.worst_margin;
        acc.witness = tag + " " + r.witness;
        acc.witness_lag = r.witness_lag;
    }
    acc.max_violation = std::max(acc.max_violation, r.max_violation);
    acc.pass = acc.pass && r.pass;
}

json verify_suite(const InstanceFile& inst, int k_max, std::uint64_t seed, bool& failed) {
    json reports = json::array();
    auto add = [&](const VerificationReport& r, bool conjecture = false) {
        reports.push_back(to_json(r, conjecture));
        if (!conjecture && !r.pass) failed = true;
    };
    const auto& p = inst.p;
    const auto& alpha = inst.alpha;

    add(verify_reward_ordering(p, alpha, k_max));
    add(verify_monotone_curves(p, alpha, k_max));
    add(condition_A_report(p, k_max));
    if (check_condition_A(p, k_max).holds) add(verify_lemma11(p, k_max));

    if (check_prop12_conditions(p).satisfied) {
        const ConditionSReport s = verify_condition_S(p, alpha, k_max);
        for (const auto& c : s.cases) add(c);
        add(s.symmetry);
        add(s.contraction);
        add(s.premise);
    }

    if (inst.verify.random_instances > 0) {
        VerificationReport ordering;
        ordering.name = "random_reward_ordering";
        ordering.worst_margin = 1.0;
        VerificationReport monotone;
        monotone.name = "random_monotone_curves";
        monotone.worst_margin = 1.0;
        monotone.tolerance = kTolerances.limit;
        for (int i = 0; i < inst.verify.random_instances; ++i) {
            Rng rng(derive_seed(seed, 0x7665726966ULL, static_cast<std::uint64_t>(i)));
            const auto rp = instances::random_valid_matrix(rng);
            const auto ra = instances::random_general_reward(rng);
            const std::string tag = "instance " + std::to_string(i);
            absorb(ordering, verify_reward_ordering(rp, ra, k_max), tag);
            absorb(monotone, verify_monotone_curves(rp, ra, k_max), tag);
        }
        add(ordering);
        add(monotone);
    }
    return reports;
}

struct Options {
    std::string instance;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> kmax;
    std::optional<int> horizon;
    std::optional<int> episodes;
    std::optional<int> burn_in;
    std::optional<std::string> policy;
    std::optional<int> lag_cap;
    bool restricted = false;
    bool restricted_given = false;
    int threads = 0;
};

int dispatch(const std::string& command, const Options& o, std::ostream& out) {
    const InstanceFile inst = load_instance(o.instance);
    const auto& p = inst.p;
    const auto& alpha = inst.alpha;
    const std::uint64_t seed = o.seed.value_or(inst.sim.seed);

    if (command == "validate") {
        const auto mix = p.mixing_lag();
        emit(out, {{"valid", true},
                   {"P", to_json(p.entries())},
                   {"alpha", to_json(alpha.values())},
                   {"regularity_exponent", p.regularity_exponent()},
                   {"mixing_lag", mix ? json(*mix) : json(nullptr)}});
        return kExitOk;
    }
    if (command == "steady-state") {
        emit(out, {{"steady_state", to_json(p.steady_state())},
                   {"pss_alpha", steady_reward(p, alpha)}});
        return kExitOk;
    }
    if (command == "classify") {
        const SystemType t = classify_system(p, alpha);
        json doc{{"type", std::string(to_string(t))},
                 {"p2_alpha", fresh_reward(p, alpha, 1)},
                 {"pss_alpha", steady_reward(p, alpha)}};
        if (t == SystemType::TypeI) doc["threshold_L"] = threshold_json(threshold_L(p, alpha));
        emit(out, doc);
        return kExitOk;
    }
    if (command == "curves") {
        const int k_max = o.kmax.value_or(inst.verify.k_max);
        if (k_max < 0) throw Error(ErrorCode::Usage, "--kmax must be nonnegative");
        const std::string csv = curves_csv(p, alpha, k_max);
        if (o.out.empty()) {
            out << csv;
            return kExitOk;
        }
        write_file(o.out, csv);
        const SystemType t = classify_system(p, alpha);
        json doc{{"csv", o.out},
                 {"rows", k_max + 1},
                 {"type", std::string(to_string(t))},
                 {"pss_alpha", steady_reward(p, alpha)},
                 {"p2_alpha", fresh_reward(p, alpha, 1)}};
        if (t == SystemType::TypeI) doc["threshold_L"] = threshold_json(threshold_L(p, alpha));
        emit(out, doc);
        return kExitOk;
    }
    if (command == "bounds") {
        emit(out, to_json(compute_bounds(p, alpha)));
        return kExitOk;
    }
    if (command == "simulate") {
        PolicyKind policy = inst.sim.policy;
        if (o.policy) {
            auto parsed = parse_policy(*o.policy);
            if (!parsed) throw Error(ErrorCode::Usage, "unknown policy '" + *o.policy + "'");
            policy = *parsed;
        }
        SimConfig cfg = make_sim_config(p, alpha, policy, o.horizon.value_or(inst.sim.horizon),
                                        o.episodes.value_or(inst.sim.episodes), seed);
        if (inst.sim.burn_in) cfg.burn_in = *inst.sim.burn_in;
        if (o.burn_in) cfg.burn_in = *o.burn_in;
        cfg.threads = o.threads;
        cfg.check();
        const SimResult result = estimate_sum_reward(cfg);
        if (!o.out.empty()) write_file(o.out, run_episode(cfg, episode_seed(seed, 0)).to_csv());
        emit(out, to_json(result));
        return kExitOk;
    }
    if (command == "compare-optimal") {
        const int horizon = o.horizon.value_or(inst.dp.horizon);
        const int lag_cap = o.lag_cap.value_or(inst.dp.lag_cap);
        const bool restricted = o.restricted_given ? o.restricted : inst.dp.restricted;
        if (horizon < 1) throw Error(ErrorCode::Usage, "--horizon must be positive");
        const auto capped = TransitionMatrix::validate(p.entries(), lag_cap);
        emit(out, to_json(compare_greedy_vs_optimal(capped, alpha, horizon, lag_cap), restricted));
        return kExitOk;
    }
    if (command == "verify") {
        bool failed = false;
        const int k_max = o.kmax.value_or(inst.verify.k_max);
        if (k_max < 1) throw Error(ErrorCode::Usage, "--kmax must be positive");
        emit(out, verify_suite(inst, k_max, seed, failed));
        return failed ? kExitCheckFailed : kExitOk;
    }
    if (command == "sandwich") {
        const SandwichReport r =
            sandwich_check(p, alpha, o.horizon.value_or(inst.sim.horizon),
                           o.episodes.value_or(inst.sim.episodes), seed, o.threads);
        emit(out, to_json(r));
        return r.all_pass() ? kExitOk : kExitCheckFailed;
    }
    throw Error(ErrorCode::UnknownCommand, "unknown command '" + command + "'");
}

void report_error(std::ostream& out, ErrorCode code, const std::string& message) {
    emit(out, {{"error", std::string(to_string(code))}, {"message", message}});
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-user ARQ scheduling over three-state Markov channels", "arqsched"};
    app.require_subcommand(1);
    Options o;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"validate", "check an instance file"},
        {"steady-state", "stationary distribution and p_ss alpha"},
        {"classify", "Type I / Type II and the threshold L"},
        {"curves", "reward curves r1, r2, r3 over the lag"},
        {"bounds", "lower and upper sum-reward bounds"},
        {"simulate", "Monte Carlo sum-reward estimate"},
        {"compare-optimal", "greedy against the exact finite-horizon optimum"},
        {"verify", "run the numerical check suite"},
        {"sandwich", "simulate greedy and genie against the bounds"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("instance", o.instance, "instance JSON file")->required();
        if (name == "curves" || name == "verify") sub->add_option("--kmax", o.kmax, "largest lag");
        if (name == "curves" || name == "simulate") sub->add_option("--out", o.out, "CSV output path");
        if (name == "simulate" || name == "compare-optimal" || name == "sandwich") {
            sub->add_option("--horizon", o.horizon, "slots per episode or DP horizon");
        }
        if (name == "simulate" || name == "verify" || name == "sandwich") {
            sub->add_option("--seed", o.seed, "master seed");
        }
        if (name == "simulate" || name == "sandwich") {
            sub->add_option("--episodes", o.episodes, "number of episodes");
            sub->add_option("--threads", o.threads, "worker threads, 0 = all cores");
        }
        if (name == "simulate") {
            sub->add_option("--policy", o.policy,
                            "greedy | greedy-argmax | genie | round-robin | random");
            sub->add_option("--burn-in", o.burn_in, "slots discarded per episode");
        }
        if (name == "compare-optimal") {
            sub->add_option("--lag-cap", o.lag_cap, "belief lag cap");
            sub->add_option("--restricted", o.restricted, "exclude switching after F3 (true|false)")
                ->expected(0, 1)
                ->default_str("true");
        }
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        err << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        const bool unknown = !args.empty() && args.front().rfind("-", 0) != 0 &&
                             std::none_of(commands.begin(), commands.end(),
                                          [&](const auto& c) { return c.first == args.front(); });
        if (unknown) {
            report_error(out, ErrorCode::UnknownCommand, "unknown command '" + args.front() + "'");
        } else {
            report_error(out, ErrorCode::Usage, e.what());
        }
        err << app.help();
        return kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "compare-optimal") {
        o.restricted_given = app.get_subcommands().front()->count("--restricted") > 0;
    }
    try {
        return dispatch(command, o, out);
    } catch (const Error& e) {
        report_error(out, e.code(), e.what());
        return exit_status_for(e.code());
    }
}

}  // namespace arqsched
