#include "repshare/solicitation.hpp"

#include <algorithm>

#include "repshare/random.hpp"

namespace repshare {

SolicitationPlan select_advisors(const BuyerLedger& ledger, const std::set<AgentId>& known_agents,
                                 const EngineParams& params, std::uint64_t seed) {
    SolicitationPlan plan;
    plan.delta_used = ledger.delta;

    std::vector<AgentId> reputed;
    std::vector<AgentId> non_reputed;
    std::vector<AgentId> explorable;  // unknown agents and new-list advisors
    for (AgentId id : known_agents) {
        if (id == ledger.owner) {
            continue;
        }
        auto it = ledger.records.find(id);
        if (it == ledger.records.end()) {
            explorable.push_back(id);
            continue;
        }
        switch (it->second.category) {
            case AdvisorCategory::Reputed: reputed.push_back(id); break;
            case AdvisorCategory::NonReputed: non_reputed.push_back(id); break;
            case AdvisorCategory::New: explorable.push_back(id); break;
            case AdvisorCategory::DisReputed: break;  // never asked
        }
    }

    plan.targets = reputed;
    plan.used_reputed = !reputed.empty();

    if (reputed.size() < params.min_advisors && !non_reputed.empty()) {
        plan.targets.insert(plan.targets.end(), non_reputed.begin(), non_reputed.end());
        plan.used_nonreputed = true;
    }

    std::mt19937_64 gen(seed);
    for (AgentId id : explorable) {  // ascending, one draw each
        if (uniform01(gen) < ledger.delta) {
            plan.targets.push_back(id);
            plan.delta_recruits.push_back(id);
        }
    }
    plan.used_new = !plan.delta_recruits.empty();

    std::sort(plan.targets.begin(), plan.targets.end());
    return plan;
}

AdmissionResult admit_opinions(const SolicitationPlan& plan, std::span<const Opinion> received,
                               const BuyerLedger& ledger, const EngineParams& params) {
    const auto category_of = [&](AgentId id) {
        auto it = ledger.records.find(id);
        return it == ledger.records.end() ? AdvisorCategory::New : it->second.category;
    };

    std::size_t reputed_responders = 0;
    for (const Opinion& op : received) {
        if (category_of(op.advisor) == AdvisorCategory::Reputed) {
            ++reputed_responders;
        }
    }
    const bool reputed_tier_suffices = reputed_responders >= params.min_advisors;

    AdmissionResult result;
    for (const Opinion& op : received) {
        const AdvisorCategory cat = category_of(op.advisor);
        if (cat == AdvisorCategory::DisReputed) {
            result.excluded.emplace_back(op, ExclusionReason::DisReputedSender);
            continue;
        }
        if (cat == AdvisorCategory::Reputed) {
            result.admitted.push_back(op);
            continue;
        }
        const bool recruited = std::binary_search(plan.delta_recruits.begin(),
                                                  plan.delta_recruits.end(), op.advisor);
        if (recruited || !reputed_tier_suffices) {
            result.admitted.push_back(op);
        } else {
            result.excluded.emplace_back(op, ExclusionReason::BelowRepThreshold);
        }
    }
    result.sufficient = result.admitted.size() >= params.min_advisors;
    return result;
}

double decay_delta(double delta, const EngineParams& params) {
    return std::max(params.delta_floor, delta * params.delta_rate);
}

ResponsePolicy respond_policy(const BuyerLedger& responder, AgentId requester) {
    auto it = responder.records.find(requester);
    if (it != responder.records.end() && it->second.category == AdvisorCategory::Reputed) {
        return ResponsePolicy::MustRespond;
    }
    return ResponsePolicy::MayDecline;
}

}  // namespace repshare
