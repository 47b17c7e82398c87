#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "arqsched/analysis.hpp"
#include "arqsched/bounds.hpp"
#include "arqsched/dp.hpp"
#include "arqsched/sim.hpp"

namespace arqsched {

struct SimBlock {
    int horizon = 10000;
    int episodes = 100;
    std::uint64_t seed = 0;
    std::optional<int> burn_in;  // default horizon / 10
    PolicyKind policy = PolicyKind::GreedyStructured;
};

struct DpBlock {
    int horizon = 6;
    int lag_cap = 16;
    bool restricted = false;
};

struct VerifyBlock {
    int k_max = kDefaultLagCap;
    int random_instances = 0;
};

/// One instance file drives every subcommand:
///   {"P": [[..3],[..3],[..3]], "alpha": [a1, a2, a3],
///    "sim": {...}, "dp": {...}, "verify": {...}}
struct InstanceFile {
    TransitionMatrix p;
    RewardVector alpha;
    SimBlock sim;
    DpBlock dp;
    VerifyBlock verify;
};

/// Throws Error: channel validation codes pass through unchanged, malformed
/// documents raise InvalidInstance.
InstanceFile parse_instance(const nlohmann::json& doc);
InstanceFile load_instance(const std::string& path);

nlohmann::json to_json(const Mat3& m);
nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const VerificationReport& r, bool conjecture = false);
nlohmann::json to_json(const BoundsReport& r);
nlohmann::json to_json(const SimResult& r);
nlohmann::json to_json(const OptimalityComparison& c, bool restricted);
nlohmann::json to_json(const SandwichReport& r);

SimResult sim_result_from_json(const nlohmann::json& doc);

/// `k,r1,r2,r3` rows for k = 0..k_max with 12 significant digits.
std::string curves_csv(const TransitionMatrix& p, const RewardVector& alpha, int k_max);

}  // namespace arqsched
