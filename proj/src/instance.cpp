#include "arqsched/instance.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "arqsched/error.hpp"

namespace arqsched {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) {
    throw Error(ErrorCode::InvalidInstance, what);
}

double number_at(const json& arr, std::size_t i, const char* field) {
    if (!arr.is_array() || i >= arr.size() || !arr[i].is_number()) {
        malformed(std::string(field) + " must be an array of numbers");
    }
    return arr[i].get<double>();
}

template <class T>
T field_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        malformed(std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace

InstanceFile parse_instance(const json& doc) {
    if (!doc.is_object()) malformed("instance must be a JSON object");
    if (!doc.contains("P") || !doc.contains("alpha")) malformed("instance needs 'P' and 'alpha'");

    const json& rows = doc["P"];
    if (!rows.is_array() || rows.size() != 3) malformed("P must have 3 rows");
    Mat3 raw{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!rows[i].is_array() || rows[i].size() != 3) malformed("each row of P needs 3 entries");
        for (std::size_t j = 0; j < 3; ++j) raw[i][j] = number_at(rows[i], j, "P row");
    }
    const json& a = doc["alpha"];
    if (!a.is_array() || a.size() != 3) malformed("alpha must have 3 entries");

    // Channel and reward errors propagate with their own codes.
    InstanceFile out{TransitionMatrix::validate(raw),
                     RewardVector::make(number_at(a, 0, "alpha"), number_at(a, 1, "alpha"),
                                        number_at(a, 2, "alpha")),
                     SimBlock{}, DpBlock{}, VerifyBlock{}};

    if (doc.contains("sim")) {
        const json& s = doc["sim"];
        out.sim.horizon = field_or(s, "horizon", out.sim.horizon);
        out.sim.episodes = field_or(s, "episodes", out.sim.episodes);
        out.sim.seed = field_or<std::uint64_t>(s, "seed", out.sim.seed);
        if (s.contains("burn_in")) out.sim.burn_in = field_or(s, "burn_in", 0);
        if (s.contains("policy")) {
            const auto name = field_or<std::string>(s, "policy", "");
            auto policy = parse_policy(name);
            if (!policy) malformed("unknown policy '" + name + "'");
            out.sim.policy = *policy;
        }
    }
    if (doc.contains("dp")) {
        const json& d = doc["dp"];
        out.dp.horizon = field_or(d, "horizon", out.dp.horizon);
        out.dp.lag_cap = field_or(d, "lag_cap", out.dp.lag_cap);
        out.dp.restricted = field_or(d, "restricted", out.dp.restricted);
    }
    if (doc.contains("verify")) {
        const json& v = doc["verify"];
        out.verify.k_max = field_or(v, "k_max", out.verify.k_max);
        out.verify.random_instances = field_or(v, "random_instances", out.verify.random_instances);
    }
    return out;
}

InstanceFile load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) malformed("cannot open instance file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        malformed("instance file is not valid JSON: " + std::string(e.what()));
    }
    return parse_instance(doc);
}

json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json to_json(const Mat3& m) { return json::array({to_json(m[0]), to_json(m[1]), to_json(m[2])}); }

json to_json(const VerificationReport& r, bool conjecture) {
    json out{{"name", r.name},
             {"pass", r.pass},
             {"max_violation", r.max_violation},
             {"tolerance", r.tolerance},
             {"worst_margin", r.worst_margin},
             {"witness", r.witness},
             {"witness_lag", r.witness_lag}};
    if (conjecture) out["conjecture"] = true;
    return out;
}

json to_json(const BoundsReport& r) {
    return json{{"type", std::string(to_string(r.system))},
                {"lower", r.lower},
                {"upper", r.upper},
                {"weights",
                 {{"best3", r.weights.best3}, {"best2", r.weights.best2}, {"best1", r.weights.best1}}},
                {"fresh_rewards", to_json(r.fresh_rewards)},
                {"pss_alpha", r.steady_reward}};
}

json to_json(const SimResult& r) {
    return json{{"policy", std::string(to_string(r.policy))},
                {"eta_hat", r.eta_hat},
                {"std_err", r.std_err},
                {"episodes", r.episodes},
                {"slots", r.slots},
                {"seed", r.seed}};
}

SimResult sim_result_from_json(const json& doc) {
    SimResult r;
    try {
        auto policy = parse_policy(doc.at("policy").get<std::string>());
        if (!policy) malformed("unknown policy in result");
        r.policy = *policy;
        r.eta_hat = doc.at("eta_hat").get<double>();
        r.std_err = doc.at("std_err").get<double>();
        r.episodes = doc.at("episodes").get<int>();
        r.slots = doc.at("slots").get<std::int64_t>();
        r.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        malformed(std::string("malformed simulation result: ") + e.what());
    }
    return r;
}

json to_json(const OptimalityComparison& c, bool restricted) {
    auto ce = restricted ? c.restricted_counterexample : c.counterexample;
    return json{{"horizon", c.horizon},
                {"restricted_gap", c.restricted_gap},
                {"unrestricted_gap", c.unrestricted_gap},
                {"agreement", restricted ? c.restricted_agreement : c.unrestricted_agreement},
                {"counterexample", ce ? json(*ce) : json(nullptr)},
                {"restricted", restricted},
                {"greedy_value", c.greedy_value},
                {"restricted_value", c.restricted_value},
                {"unrestricted_value", c.unrestricted_value},
                {"restricted_agreement", c.restricted_agreement},
                {"unrestricted_agreement", c.unrestricted_agreement},
                {"restricted_states", c.restricted_states},
                {"unrestricted_states", c.unrestricted_states}};
}

json to_json(const SandwichReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"margin_sigmas", c.margin_sigmas}});
    }
    return json{{"type", std::string(to_string(r.bounds.system))},
                {"lower", r.bounds.lower},
                {"upper", r.bounds.upper},
                {"greedy", to_json(r.greedy)},
                {"genie", to_json(r.genie)},
                {"checks", checks},
                {"pass", r.all_pass()}};
}

std::string curves_csv(const TransitionMatrix& p, const RewardVector& alpha, int k_max) {
    std::string out = "k,r1,r2,r3\n";
    char buf[128];
    const auto curves = reward_curves(p, alpha, k_max);
    for (int k = 0; k <= k_max; ++k) {
        const Vec3& r = curves[static_cast<std::size_t>(k)];
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g\n", k, r[0], r[1], r[2]);
        out += buf;
    }
    return out;
}

}  // namespace arqsched
