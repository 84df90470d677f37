#pragma once

#include <set>
#include <span>
#include <utility>
#include <vector>

#include "repshare/ledger.hpp"
#include "repshare/types.hpp"

namespace repshare {

/// Who to ask this round. Dis-reputed advisors are never present.
struct SolicitationPlan {
    std::vector<AgentId> targets;         // ascending agent id
    std::vector<AgentId> delta_recruits;  // subset of targets picked by exploration
    bool used_reputed = false;
    bool used_nonreputed = false;
    bool used_new = false;
    double delta_used = 0.0;
};

/// Builds the round's solicitation plan from the buyer's ledger:
///   - every reputed advisor is asked;
///   - when the reputed tier alone cannot reach min_advisors, all
///     non-reputed advisors are added;
///   - independently, each agent without an established reputation
///     (unknown, or still in the new list) is asked with probability delta;
///   - dis-reputed advisors are excluded unconditionally.
/// Deterministic for a given (ledger, pool, seed).
SolicitationPlan select_advisors(const BuyerLedger& ledger, const std::set<AgentId>& known_agents,
                                 const EngineParams& params, std::uint64_t seed);

struct AdmissionResult {
    std::vector<Opinion> admitted;  // arrival order preserved
    std::vector<std::pair<Opinion, ExclusionReason>> excluded;
    bool sufficient = false;  // admitted count reached min_advisors
};

/// Screens received opinions: dis-reputed senders are always dropped;
/// below-threshold senders are dropped when the reputed responders alone
/// satisfy min_advisors; exploration recruits named in the plan are
/// admitted regardless of their (empty) history.
AdmissionResult admit_opinions(const SolicitationPlan& plan, std::span<const Opinion> received,
                               const BuyerLedger& ledger, const EngineParams& params);

/// Geometric decay with a floor: max(delta_floor, delta * delta_rate).
double decay_delta(double delta, const EngineParams& params);

enum class ResponsePolicy { MustRespond, MayDecline };

/// Reciprocity: a request from anyone on the responder's reputed list
/// must be answered; everyone else may be declined.
ResponsePolicy respond_policy(const BuyerLedger& responder, AgentId requester);

}  // namespace repshare
