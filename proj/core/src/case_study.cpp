#include <cmath>
#include <cstdio>

#include "repshare/io.hpp"

namespace repshare {

namespace {

// Reference marketplace replay: buyer 2 asks about one seller, advisors
// 1/3/5/7 are reputed, advisor 4 is below the reputation threshold, and
// advisor 5 reports an inflated value. Expected values are frozen from an
// independent extended-precision evaluation of the update formulas.

constexpr AgentId kBuyer = 2;
constexpr AgentId kSeller = 104;
constexpr double kIndividual = 0.389;
constexpr double kTransactionValue = 1800.0;

constexpr double kExpectedM2 = 0.0091505;
constexpr double kExpectedOr = 0.38746;
constexpr double kExpectedOmega = 0.017751;
constexpr double kExpectedPhi = 0.026627;

struct AdvisorFixture {
    AgentId id;
    double reputation;
    std::uint32_t honest_count;
    std::uint32_t total_count;
    AdvisorCategory category;
    double reported;
    OpinionLabel expected_label;
};

// total_count back-solved from the recorded honest percentages.
constexpr AdvisorFixture kAdvisors[] = {
    {1, 0.450, 20, 26, AdvisorCategory::Reputed, 0.380, OpinionLabel::Honest},
    {3, 0.490, 14, 17, AdvisorCategory::Reputed, 0.387, OpinionLabel::Honest},
    {4, 0.310, 8, 17, AdvisorCategory::NonReputed, 0.490, OpinionLabel::Honest},
    {5, 0.510, 11, 14, AdvisorCategory::Reputed, 0.580, OpinionLabel::Dishonest},
    {7, 0.465, 9, 10, AdvisorCategory::Reputed, 0.395, OpinionLabel::Honest},
};

struct ExpectedUpdate {
    AgentId id;
    double reputation;
};

constexpr ExpectedUpdate kExpectedUpdates[] = {
    {1, 0.459763},
    {3, 0.499053},
    {5, 0.496953},
    {7, 0.474496},
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.7f", v);
    return buf;
}

void check_close(const char* what, double computed, double expected, double tol,
                 std::vector<std::string>& mismatches) {
    if (!(std::fabs(computed - expected) <= tol)) {
        mismatches.push_back(std::string(what) + ": expected " + fmt(expected) + " +/- " +
                             fmt(tol) + ", computed " + fmt(computed));
    }
}

}  // namespace

RunReport run_case_study() {
    const EngineParams params;  // defaults are the fixture constants

    BuyerLedger ledger;
    ledger.owner = kBuyer;
    ledger.delta = params.delta_floor;
    std::set<AgentId> pool;
    std::vector<Opinion> received;
    for (const AdvisorFixture& a : kAdvisors) {
        ledger.records[a.id] = AdvisorRecord{
            a.id, Rating(a.reputation), {a.honest_count, a.total_count}, a.category};
        pool.insert(a.id);
        received.push_back(Opinion{a.id, kSeller, Rating(a.reported), 0});
    }

    const Rating individual(kIndividual);
    const SolicitationPlan plan = select_advisors(ledger, pool, params, 0);
    const AdmissionResult admission = admit_opinions(plan, received, ledger, params);
    const std::vector<FilterVerdict> verdicts = classify(admission.admitted, individual, params);

    CaseStudyCheck cs;
    {
        std::vector<Rating> reported;
        for (const Opinion& op : admission.admitted) reported.push_back(op.reported);
        cs.m2 = second_moment(reported, individual);
    }

    std::vector<Contribution> honest;
    for (const FilterVerdict& v : verdicts) {
        cs.verdicts.emplace_back(v.opinion.advisor, v.label);
        if (v.label == OpinionLabel::Honest) {
            const BehaviorStats stats = ledger.records.at(v.opinion.advisor).stats;
            honest.push_back(
                {v.opinion.advisor, advisor_weight(stats, params), v.opinion.reported});
        } else {
            cs.excluded.emplace_back(v.opinion.advisor, ExclusionReason::ClassifiedDishonest);
        }
    }
    for (const auto& [op, reason] : admission.excluded) {
        cs.excluded.emplace_back(op.advisor, reason);
    }
    cs.contributors = honest;

    const std::optional<AggregateResult> aggregated = aggregate(honest);
    cs.or_others = aggregated ? aggregated->value.value() : -1.0;
    cs.omega_value = omega(kTransactionValue, params);
    cs.phi_value = phi(kTransactionValue, params);

    for (const FilterVerdict& v : verdicts) {
        record_outcome(ledger, v.opinion.advisor, v.label, kTransactionValue, params);
        cs.updated_reputation[v.opinion.advisor] =
            ledger.records.at(v.opinion.advisor).reputation.value();
    }

    // Golden checks.
    check_close("m2", cs.m2, kExpectedM2, 1e-6, cs.mismatches);
    check_close("or_others", cs.or_others, kExpectedOr, 1e-4, cs.mismatches);
    check_close("omega", cs.omega_value, kExpectedOmega, 1e-5, cs.mismatches);
    check_close("phi", cs.phi_value, kExpectedPhi, 1e-5, cs.mismatches);

    bool excluded_b4 = false;
    for (const auto& [advisor, reason] : cs.excluded) {
        if (advisor == 4 && reason == ExclusionReason::BelowRepThreshold) {
            excluded_b4 = true;
        }
    }
    if (!excluded_b4) {
        cs.mismatches.push_back("advisor 4 was not excluded before filtering");
    }
    for (const AdvisorFixture& a : kAdvisors) {
        if (a.id == 4) {
            continue;
        }
        bool found = false;
        for (const auto& [advisor, label] : cs.verdicts) {
            if (advisor == a.id) {
                found = true;
                if (label != a.expected_label) {
                    cs.mismatches.push_back("advisor " + std::to_string(a.id) +
                                            ": expected " + to_string(a.expected_label) +
                                            ", computed " + to_string(label));
                }
            }
        }
        if (!found) {
            cs.mismatches.push_back("advisor " + std::to_string(a.id) + ": no verdict");
        }
    }
    for (const ExpectedUpdate& u : kExpectedUpdates) {
        auto it = cs.updated_reputation.find(u.id);
        if (it == cs.updated_reputation.end()) {
            cs.mismatches.push_back("advisor " + std::to_string(u.id) + ": no update");
            continue;
        }
        check_close(("ar_" + std::to_string(u.id)).c_str(), it->second, u.reputation, 1e-5,
                    cs.mismatches);
    }
    cs.pass = cs.mismatches.empty();

    // Report envelope: one judged round, advisor 5 being the only planted liar.
    RunReport report;
    report.engine = params;
    report.scenario_digest = digest_bytes("case-study fixture v1");
    report.case_study = cs;

    MetricsRow row;
    row.round = 0;
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (const auto& [advisor, label] : cs.verdicts) {
        const bool liar = advisor == 5;
        if (label == OpinionLabel::Dishonest) {
            (liar ? tp : fp) += 1;
        } else if (liar) {
            fn += 1;
        }
    }
    if (tp + fp > 0) row.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) row.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    row.sr_absent = !aggregated.has_value();
    report.metrics.per_round.push_back(row);
    for (const auto& [advisor, record] : ledger.records) {
        report.metrics.advisor_trajectories.push_back(
            AdvisorRow{0, advisor, record.reputation.value(), record.category});
    }
    return report;
}

}  // namespace repshare
