#include "repshare/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace repshare {

using nlohmann::ordered_json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failure on " + path.string());
    }
    return std::move(buf).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw IoError("write failure on " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                      ec.message());
    }
}

std::string locate(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

ordered_json parse_json(std::string_view text, const std::string& what) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(what + ": parse error at " + locate(text, e.byte) + ": " + e.what());
    }
}

void check_keys(const ordered_json& j, std::span<const std::string_view> allowed,
                const std::string& ctx, std::vector<std::string>& issues) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (std::string_view a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            issues.push_back(ctx + ": unknown key \"" + key + "\"");
        }
    }
}

void check_keys(const ordered_json& j, std::initializer_list<std::string_view> allowed,
                const std::string& ctx, std::vector<std::string>& issues) {
    check_keys(j, std::span<const std::string_view>(allowed.begin(), allowed.size()), ctx,
               issues);
}

void check_version(const ordered_json& j, const std::string& what,
                   std::vector<std::string>& issues) {
    if (!j.contains("version")) {
        issues.push_back(what + ": missing \"version\"");
    } else if (!j["version"].is_number_integer() || j["version"].get<int>() != 1) {
        issues.push_back(what + ": unsupported schema version (expected 1)");
    }
}

// Round metric values to six decimals; report files are display artifacts.
double metric6(double v) {
    return std::round(v * 1e6) / 1e6;
}

ordered_json opt6(const std::optional<double>& v) {
    if (!v) {
        return nullptr;
    }
    return metric6(*v);
}

// ---- engine params ----

constexpr std::string_view kEngineKeys[] = {
    "kappa",         "alpha_hat",        "epsilon_hat", "lambda_decay", "penalty_p",
    "exp_base",      "j_step",           "rep_threshold", "disrep_threshold",
    "min_advisors",  "delta_init",       "delta_rate",  "delta_floor",  "classify_eps",
};

ordered_json engine_to_json(const EngineParams& p) {
    return ordered_json{
        {"kappa", p.kappa},
        {"alpha_hat", p.alpha_hat},
        {"epsilon_hat", p.epsilon_hat},
        {"lambda_decay", p.lambda_decay},
        {"penalty_p", p.penalty_p},
        {"exp_base", p.exp_base},
        {"j_step", p.j_step},
        {"rep_threshold", p.rep_threshold},
        {"disrep_threshold", p.disrep_threshold},
        {"min_advisors", p.min_advisors},
        {"delta_init", p.delta_init},
        {"delta_rate", p.delta_rate},
        {"delta_floor", p.delta_floor},
        {"classify_eps", p.classify_eps},
    };
}

EngineParams engine_from_json(const ordered_json& j, std::vector<std::string>& issues) {
    EngineParams p;
    check_keys(j, kEngineKeys, "engine", issues);
    auto num = [&](const char* key, double& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_number()) {
            issues.push_back(std::string("engine.") + key + " must be a number");
            return;
        }
        out = j[key].get<double>();
    };
    num("kappa", p.kappa);
    num("alpha_hat", p.alpha_hat);
    num("epsilon_hat", p.epsilon_hat);
    num("lambda_decay", p.lambda_decay);
    num("penalty_p", p.penalty_p);
    num("exp_base", p.exp_base);
    num("j_step", p.j_step);
    num("rep_threshold", p.rep_threshold);
    num("disrep_threshold", p.disrep_threshold);
    num("delta_init", p.delta_init);
    num("delta_rate", p.delta_rate);
    num("delta_floor", p.delta_floor);
    num("classify_eps", p.classify_eps);
    if (j.contains("min_advisors")) {
        if (!j["min_advisors"].is_number_unsigned()) {
            issues.push_back("engine.min_advisors must be a non-negative integer");
        } else {
            p.min_advisors = j["min_advisors"].get<std::uint32_t>();
        }
    }
    return p;
}

// ---- agents ----

Behavior behavior_from_json(const ordered_json& j, const std::string& ctx,
                            std::vector<std::string>& issues) {
    Behavior b;
    check_keys(j, {"type", "targets", "shift"}, ctx, issues);
    const std::string type = j.value("type", "honest");
    if (type == "honest") {
        b.kind = BehaviorKind::HonestAdvisor;
    } else if (type == "ballot_stuffer") {
        b.kind = BehaviorKind::BallotStuffer;
    } else if (type == "bad_mouther") {
        b.kind = BehaviorKind::BadMouther;
    } else if (type == "random") {
        b.kind = BehaviorKind::RandomRater;
    } else {
        issues.push_back(ctx + ": unknown behavior type \"" + type + "\"");
    }
    if (j.contains("targets")) {
        for (const auto& t : j["targets"]) {
            b.targets.push_back(t.get<AgentId>());
        }
    }
    b.shift = j.value("shift", 0.0);
    return b;
}

AgentProfile agent_from_json(const ordered_json& j, std::vector<std::string>& issues) {
    AgentProfile a;
    if (!j.contains("id") || !j["id"].is_number_unsigned()) {
        issues.push_back("agent: missing or non-integer \"id\"");
        return a;
    }
    a.id = j["id"].get<AgentId>();
    const std::string ctx = "agent " + std::to_string(a.id);
    const std::string role = j.value("role", "");
    if (role == "buyer") {
        a.role = Role::Buyer;
        check_keys(j, {"id", "role", "behavior"}, ctx, issues);
        if (j.contains("behavior")) {
            a.behavior = behavior_from_json(j["behavior"], ctx + ".behavior", issues);
        }
    } else if (role == "seller") {
        a.role = Role::Seller;
        check_keys(j, {"id", "role", "quality"}, ctx, issues);
        if (!j.contains("quality") || !j["quality"].is_number()) {
            issues.push_back(ctx + ": seller requires numeric \"quality\"");
        } else {
            a.quality = j["quality"].get<double>();
        }
    } else {
        issues.push_back(ctx + ": role must be \"buyer\" or \"seller\"");
    }
    return a;
}

}  // namespace

ValidationError::ValidationError(const std::vector<std::string>& issues_in)
    : std::runtime_error([&] {
          std::string msg = "validation failed:";
          for (const std::string& s : issues_in) {
              msg += "\n  - " + s;
          }
          return msg;
      }()),
      issues(issues_in) {}

ScenarioConfig parse_scenario_text(std::string_view text) {
    const ordered_json j = parse_json(text, "scenario");
    if (!j.is_object()) {
        throw ParseError("scenario: top level must be an object");
    }

    std::vector<std::string> issues;
    check_version(j, "scenario", issues);
    check_keys(j,
               {"version", "engine", "agents", "rounds", "transaction_value", "ir_noise_sigma",
                "seed"},
               "scenario", issues);

    ScenarioConfig config;
    try {
        if (j.contains("engine")) {
            config.engine = engine_from_json(j["engine"], issues);
        }
        if (!j.contains("agents") || !j["agents"].is_array()) {
            issues.push_back("scenario: \"agents\" array is required");
        } else {
            for (const auto& a : j["agents"]) {
                config.agents.push_back(agent_from_json(a, issues));
            }
        }
        auto uint_field = [&](const char* key, auto& out) {
            if (!j.contains(key)) return;
            if (!j[key].is_number_unsigned()) {
                issues.push_back(std::string("scenario: \"") + key +
                                 "\" must be a non-negative integer");
                return;
            }
            out = j[key].get<std::decay_t<decltype(out)>>();
        };
        uint_field("rounds", config.rounds);
        uint_field("seed", config.seed);
        config.ir_noise_sigma = j.value("ir_noise_sigma", 0.0);
        if (j.contains("transaction_value")) {
            const ordered_json& tx = j["transaction_value"];
            check_keys(tx, {"type", "value", "lo", "hi"}, "transaction_value", issues);
            const std::string type = tx.value("type", "fixed");
            if (type == "fixed") {
                config.transaction_value.kind = TransactionValueDist::Kind::Fixed;
                config.transaction_value.value = tx.value("value", 1800.0);
            } else if (type == "uniform") {
                config.transaction_value.kind = TransactionValueDist::Kind::Uniform;
                config.transaction_value.lo = tx.value("lo", 0.0);
                config.transaction_value.hi = tx.value("hi", 0.0);
            } else {
                issues.push_back("transaction_value: type must be \"fixed\" or \"uniform\"");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        issues.push_back(std::string("scenario: ") + e.what());
    }

    for (std::string& s : validate_scenario(config)) {
        issues.push_back(std::move(s));
    }
    if (!issues.empty()) {
        throw ValidationError(issues);
    }
    return config;
}

ScenarioConfig parse_scenario(const std::filesystem::path& path) {
    return parse_scenario_text(read_file(path));
}

std::vector<Opinion> parse_opinions(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    const ordered_json j = parse_json(text, "opinions");
    if (!j.is_array()) {
        throw ParseError("opinions: top level must be an array");
    }
    std::vector<std::string> issues;
    std::vector<Opinion> out;
    for (const auto& item : j) {
        check_keys(item, {"advisor", "seller", "reported"}, "opinion", issues);
        Opinion op;
        try {
            op.advisor = item.at("advisor").get<AgentId>();
            op.seller = item.value("seller", AgentId{0});
            op.reported = Rating(item.at("reported").get<double>());
        } catch (const nlohmann::json::exception& e) {
            issues.push_back(std::string("opinion: ") + e.what());
            continue;
        } catch (const std::domain_error& e) {
            issues.push_back("opinion from advisor " + std::to_string(op.advisor) + ": " +
                             e.what());
            continue;
        }
        out.push_back(op);
    }
    if (!issues.empty()) {
        throw ValidationError(issues);
    }
    return out;
}

std::string digest_bytes(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---- ledger persistence ----

void persist_ledger(const BuyerLedger& ledger, const std::filesystem::path& path) {
    ordered_json j;
    j["version"] = 1;
    j["owner"] = ledger.owner;
    j["delta"] = ledger.delta;
    ordered_json records = ordered_json::array();
    for (const auto& [advisor, record] : ledger.records) {
        records.push_back(ordered_json{
            {"advisor", advisor},
            {"reputation", record.reputation.value()},
            {"honest_count", record.stats.honest_count},
            {"total_count", record.stats.total_count},
            {"category", to_string(record.category)},
        });
    }
    j["records"] = std::move(records);
    write_file_atomic(path, j.dump(2) + "\n");
}

BuyerLedger load_ledger(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    const ordered_json j = parse_json(text, "ledger");

    std::vector<std::string> issues;
    check_version(j, "ledger", issues);
    check_keys(j, {"version", "owner", "delta", "records"}, "ledger", issues);
    if (!issues.empty()) {
        throw ValidationError(issues);
    }

    BuyerLedger ledger;
    try {
        ledger.owner = j.at("owner").get<AgentId>();
        ledger.delta = j.at("delta").get<double>();
        for (const auto& r : j.at("records")) {
            check_keys(r, {"advisor", "reputation", "honest_count", "total_count", "category"},
                       "ledger record", issues);
            AdvisorRecord record;
            record.advisor = r.at("advisor").get<AgentId>();
            record.reputation = Rating(r.at("reputation").get<double>());
            record.stats.honest_count = r.at("honest_count").get<std::uint32_t>();
            record.stats.total_count = r.at("total_count").get<std::uint32_t>();
            const std::string cat = r.at("category").get<std::string>();
            if (cat == "new") {
                record.category = AdvisorCategory::New;
            } else if (cat == "reputed") {
                record.category = AdvisorCategory::Reputed;
            } else if (cat == "non_reputed") {
                record.category = AdvisorCategory::NonReputed;
            } else if (cat == "dis_reputed") {
                record.category = AdvisorCategory::DisReputed;
            } else {
                issues.push_back("ledger record " + std::to_string(record.advisor) +
                                 ": unknown category \"" + cat + "\"");
            }
            if (record.stats.honest_count > record.stats.total_count) {
                issues.push_back("ledger record " + std::to_string(record.advisor) +
                                 ": honest_count exceeds total_count");
            }
            ledger.records[record.advisor] = record;
        }
    } catch (const nlohmann::json::exception& e) {
        issues.push_back(std::string("ledger: ") + e.what());
    } catch (const std::domain_error& e) {
        issues.push_back(std::string("ledger: ") + e.what());
    }
    if (!(ledger.delta >= 0.0 && ledger.delta <= 1.0)) {
        issues.push_back("ledger: delta must be in [0, 1]");
    }
    if (!issues.empty()) {
        throw ValidationError(issues);
    }
    return ledger;
}

// ---- result emission ----

namespace {

std::string csv6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string csv_opt(const std::optional<double>& v) {
    return v ? csv6(*v) : std::string{};
}

std::string metrics_csv(const SimulationMetrics& m) {
    std::string out = "round,precision,recall,agg_error,sr_absent\n";
    for (const MetricsRow& row : m.per_round) {
        out += std::to_string(row.round) + ',' + csv_opt(row.precision) + ',' +
               csv_opt(row.recall) + ',' + csv_opt(row.agg_error) + ',' +
               (row.sr_absent ? '1' : '0') + '\n';
    }
    return out;
}

std::string advisors_csv(const SimulationMetrics& m) {
    std::string out = "round,advisor,reputation,category\n";
    for (const AdvisorRow& row : m.advisor_trajectories) {
        out += std::to_string(row.round) + ',' + std::to_string(row.advisor) + ',' +
               csv6(row.reputation) + ',' + to_string(row.category) + '\n';
    }
    return out;
}

ordered_json metrics_to_json(const SimulationMetrics& m) {
    ordered_json per_round = ordered_json::array();
    for (const MetricsRow& row : m.per_round) {
        per_round.push_back(ordered_json{
            {"round", row.round},
            {"precision", opt6(row.precision)},
            {"recall", opt6(row.recall)},
            {"agg_error", opt6(row.agg_error)},
            {"sr_absent", row.sr_absent},
        });
    }
    ordered_json advisors = ordered_json::array();
    for (const AdvisorRow& row : m.advisor_trajectories) {
        advisors.push_back(ordered_json{
            {"round", row.round},
            {"advisor", row.advisor},
            {"reputation", metric6(row.reputation)},
            {"category", to_string(row.category)},
        });
    }
    ordered_json contamination = ordered_json::array();
    for (double c : m.contamination) {
        contamination.push_back(metric6(c));
    }
    return ordered_json{
        {"per_round", std::move(per_round)},
        {"advisors", std::move(advisors)},
        {"contamination", std::move(contamination)},
        {"final",
         ordered_json{
             {"contamination", metric6(m.final_contamination)},
             {"mean_liar_reputation", opt6(m.final_mean_liar_reputation)},
             {"mean_honest_reputation", opt6(m.final_mean_honest_reputation)},
         }},
    };
}

ordered_json verdicts_to_json(const std::vector<FilterVerdict>& verdicts) {
    ordered_json out = ordered_json::array();
    for (const FilterVerdict& v : verdicts) {
        out.push_back(ordered_json{
            {"advisor", v.opinion.advisor},
            {"reported", metric6(v.opinion.reported.value())},
            {"label", to_string(v.label)},
            {"deviation", metric6(v.deviation)},
        });
    }
    return out;
}

ordered_json contributions_to_json(const std::vector<Contribution>& contributors) {
    ordered_json out = ordered_json::array();
    for (const Contribution& c : contributors) {
        out.push_back(ordered_json{
            {"advisor", c.advisor},
            {"weight", metric6(c.weight)},
            {"reported", metric6(c.reported.value())},
        });
    }
    return out;
}

ordered_json exclusions_to_json(const std::vector<std::pair<AgentId, ExclusionReason>>& excluded) {
    ordered_json out = ordered_json::array();
    for (const auto& [advisor, reason] : excluded) {
        out.push_back(ordered_json{{"advisor", advisor}, {"reason", to_string(reason)}});
    }
    return out;
}

ordered_json trace_to_json(const RoundTrace& t) {
    ordered_json j{
        {"round", t.round},
        {"buyer", t.buyer},
        {"seller", t.seller},
        {"transaction_value", metric6(t.transaction_value)},
        {"individual", metric6(t.individual.value())},
        {"targets", t.plan.targets},
        {"delta_recruits", t.plan.delta_recruits},
        {"delta_used", metric6(t.plan.delta_used)},
        {"m2", opt6(t.m2)},
        {"verdicts", verdicts_to_json(t.verdicts)},
        {"contributors", contributions_to_json(t.shared.contributors)},
        {"aggregate", t.shared.aggregate
                          ? ordered_json(metric6(t.shared.aggregate->value.value()))
                          : ordered_json(nullptr)},
        {"unweighted_fallback",
         t.shared.aggregate ? t.shared.aggregate->unweighted_fallback : false},
        {"excluded", exclusions_to_json(t.shared.excluded)},
        {"insufficient", t.insufficient},
    };
    return j;
}

ordered_json case_study_to_json(const CaseStudyCheck& cs) {
    ordered_json verdicts = ordered_json::array();
    for (const auto& [advisor, label] : cs.verdicts) {
        verdicts.push_back(ordered_json{{"advisor", advisor}, {"label", to_string(label)}});
    }
    ordered_json updated = ordered_json::array();
    for (const auto& [advisor, ar] : cs.updated_reputation) {
        updated.push_back(ordered_json{{"advisor", advisor}, {"reputation", metric6(ar)}});
    }
    return ordered_json{
        {"m2", metric6(cs.m2)},
        {"verdicts", std::move(verdicts)},
        {"contributors", contributions_to_json(cs.contributors)},
        {"or_others", metric6(cs.or_others)},
        {"omega", metric6(cs.omega_value)},
        {"phi", metric6(cs.phi_value)},
        {"updated_reputation", std::move(updated)},
        {"excluded", exclusions_to_json(cs.excluded)},
        {"pass", cs.pass},
        {"mismatches", cs.mismatches},
    };
}

}  // namespace

void emit_results(const RunReport& report, const std::set<OutputFormat>& formats,
                  const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    }

    if (formats.contains(OutputFormat::Csv)) {
        write_file_atomic(out_dir / "metrics.csv", metrics_csv(report.metrics));
        write_file_atomic(out_dir / "advisors.csv", advisors_csv(report.metrics));
    }
    if (formats.contains(OutputFormat::Json)) {
        ordered_json j;
        j["version"] = 1;
        j["scenario_digest"] = report.scenario_digest;
        j["engine"] = engine_to_json(report.engine);
        j["metrics"] = metrics_to_json(report.metrics);
        if (report.case_study) {
            j["case_study"] = case_study_to_json(*report.case_study);
        }
        if (report.include_traces) {
            ordered_json traces = ordered_json::array();
            for (const RoundTrace& t : report.traces) {
                traces.push_back(trace_to_json(t));
            }
            j["round_traces"] = std::move(traces);
        }
        write_file_atomic(out_dir / "report.json", j.dump(2) + "\n");
    }
}

}  // namespace repshare
