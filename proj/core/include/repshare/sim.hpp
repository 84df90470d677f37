#pragma once

#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "repshare/aggregation.hpp"
#include "repshare/filter.hpp"
#include "repshare/ledger.hpp"
#include "repshare/solicitation.hpp"
#include "repshare/types.hpp"

namespace repshare {

enum class Role { Buyer, Seller };

enum class BehaviorKind {
    HonestAdvisor,  // reports own (noisy) view of the seller
    BallotStuffer,  // inflates target sellers by a fixed shift
    BadMouther,     // deflates target sellers by a fixed shift
    RandomRater,    // uniform noise, no collusion
};

struct Behavior {
    BehaviorKind kind = BehaviorKind::HonestAdvisor;
    std::vector<AgentId> targets;  // sellers attacked; others rated honestly
    double shift = 0.0;            // inflation / deflation magnitude, (0, 1)

    bool operator==(const Behavior&) const = default;
};

struct AgentProfile {
    AgentId id = 0;
    Role role = Role::Buyer;
    Behavior behavior;     // buyers only
    double quality = 0.0;  // sellers only: ground-truth service quality in [0, 1)

    bool operator==(const AgentProfile&) const = default;
};

struct TransactionValueDist {
    enum class Kind { Fixed, Uniform };
    Kind kind = Kind::Fixed;
    double value = 1800.0;  // Fixed
    double lo = 0.0;        // Uniform
    double hi = 0.0;

    bool operator==(const TransactionValueDist&) const = default;
};

struct ScenarioConfig {
    EngineParams engine;
    std::vector<AgentProfile> agents;
    std::uint64_t rounds = 1;
    TransactionValueDist transaction_value;
    double ir_noise_sigma = 0.0;  // gaussian noise on individual experience
    std::uint64_t seed = 0;

    bool operator==(const ScenarioConfig&) const = default;
};

/// All violated constraints, engine parameters included. Empty means runnable.
std::vector<std::string> validate_scenario(const ScenarioConfig& config);

/// Everything one sharing round produced, every intermediate included.
struct RoundTrace {
    std::uint64_t round = 0;
    AgentId buyer = 0;
    AgentId seller = 0;
    double transaction_value = 0.0;
    Rating individual;
    SolicitationPlan plan;
    std::vector<Opinion> received;
    std::optional<double> m2;
    std::vector<FilterVerdict> verdicts;  // over admitted opinions only
    SharedReputationResult shared;
    bool insufficient = false;  // aborted before filtering, no ledger updates
};

struct MetricsRow {
    std::uint64_t round = 0;
    std::optional<double> precision;  // absent when no dishonest verdicts issued
    std::optional<double> recall;     // absent when no liar opinions judged
    std::optional<double> agg_error;  // |aggregate - seller quality|, absent with SR
    bool sr_absent = false;
};

struct AdvisorRow {
    std::uint64_t round = 0;
    AgentId advisor = 0;
    double reputation = 0.0;  // mean over every ledger that knows the advisor
    AdvisorCategory category = AdvisorCategory::New;  // majority across ledgers
};

struct SimulationMetrics {
    std::vector<MetricsRow> per_round;
    std::vector<AdvisorRow> advisor_trajectories;
    std::vector<double> contamination;  // per round: liar share of reputed lists
    double final_contamination = 0.0;
    std::optional<double> final_mean_liar_reputation;
    std::optional<double> final_mean_honest_reputation;
};

/// The evolving world: one ledger per buyer plus the static profiles.
struct MarketState {
    ScenarioConfig config;
    std::vector<AgentId> buyers;   // ascending
    std::vector<AgentId> sellers;  // ascending
    std::map<AgentId, AgentProfile> profiles;
    std::map<AgentId, BuyerLedger> ledgers;
};

MarketState make_market(const ScenarioConfig& config);

/// What an advisor actually reports for a seller of the given true quality.
Rating apply_attack(Rating true_quality, const Behavior& behavior, AgentId seller,
                    double noise_sigma, std::mt19937_64& rng);

/// One full sharing round: individual experience, solicitation, admission,
/// filtering, weighting, aggregation, ledger updates, delta decay. A round
/// short of min_advisors records an SR-absent trace and touches nothing.
RoundTrace run_round(MarketState& state, AgentId seller, AgentId buyer, double transaction_value,
                     std::mt19937_64& rng);

/// Round-robin schedule over (buyer, seller) pairs, fully deterministic for
/// a given config. Throws std::invalid_argument on an invalid config.
SimulationMetrics run_scenario(const ScenarioConfig& config);

/// As run_scenario, but also hands back the traces and final state.
SimulationMetrics run_scenario(const ScenarioConfig& config, std::vector<RoundTrace>* traces_out,
                               MarketState* final_state_out);

/// Classification quality and aggregation error, judged against the
/// profiles' ground truth. Undefined ratios stay absent rather than 0.
SimulationMetrics compute_metrics(std::span<const RoundTrace> traces,
                                  const ScenarioConfig& config);

}  // namespace repshare
