#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "repshare/io.hpp"
#include "repshare/random.hpp"

using namespace repshare;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("repshare_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& p, std::string_view text) {
    std::ofstream out(p, std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

BuyerLedger fixture_ledger() {
    BuyerLedger ledger;
    ledger.owner = 2;
    ledger.delta = 0.05;
    ledger.records[1] = {1, Rating(0.450), {20, 26}, AdvisorCategory::Reputed};
    ledger.records[3] = {3, Rating(0.490), {14, 17}, AdvisorCategory::Reputed};
    ledger.records[4] = {4, Rating(0.310), {8, 17}, AdvisorCategory::NonReputed};
    ledger.records[5] = {5, Rating(0.510), {11, 14}, AdvisorCategory::Reputed};
    ledger.records[7] = {7, Rating(0.465), {9, 10}, AdvisorCategory::Reputed};
    return ledger;
}

BuyerLedger random_ledger(std::mt19937_64& gen) {
    BuyerLedger ledger;
    ledger.owner = static_cast<AgentId>(gen() % 100);
    ledger.delta = uniform01(gen);
    const std::size_t n = gen() % 12;
    for (std::size_t i = 0; i < n; ++i) {
        AdvisorRecord record;
        record.advisor = static_cast<AgentId>(gen());
        record.reputation = Rating(uniform01(gen));
        record.stats.total_count = static_cast<std::uint32_t>(gen() % 1000);
        record.stats.honest_count =
            record.stats.total_count == 0
                ? 0
                : static_cast<std::uint32_t>(gen() % (record.stats.total_count + 1));
        record.category = static_cast<AdvisorCategory>(gen() % 4);
        ledger.records[record.advisor] = record;
    }
    return ledger;
}

}  // namespace

TEST_CASE("shipped case-study scenario parses to the reference constants") {
    const ScenarioConfig config = parse_scenario(fs::path(REPSHARE_CONFIG_DIR) / "case_study.json");
    CHECK(config.engine.kappa == 0.95);
    CHECK(config.engine.alpha_hat == 0.6);
    CHECK(config.engine.epsilon_hat == 0.3);
    CHECK(config.engine.lambda_decay == 0.001);
    CHECK(config.engine.penalty_p == 1.5);
    CHECK(config.engine.exp_base == 1.01);
    CHECK(config.engine.rep_threshold == 0.38);
    CHECK(config.engine.disrep_threshold == 0.15);
    CHECK(config.engine.min_advisors == 2);
    CHECK(config.transaction_value.kind == TransactionValueDist::Kind::Fixed);
    CHECK(config.transaction_value.value == 1800.0);
    std::size_t buyers = 0, sellers = 0;
    for (const AgentProfile& a : config.agents) {
        (a.role == Role::Buyer ? buyers : sellers) += 1;
    }
    CHECK(buyers == 8);
    CHECK(sellers == 5);
}

TEST_CASE("scenario parsing is strict") {
    TempDir dir;

    SUBCASE("invalid engine constant") {
        spit(dir.path / "bad.json", R"({"version":1,"engine":{"penalty_p":0.5},
            "agents":[{"id":1,"role":"buyer"},{"id":2,"role":"seller","quality":0.5}]})");
        CHECK_THROWS_WITH_AS(parse_scenario(dir.path / "bad.json"),
                             doctest::Contains("penalty_p"), ValidationError);
    }
    SUBCASE("empty file is a parse error, not a partial config") {
        spit(dir.path / "empty.json", "");
        CHECK_THROWS_AS(parse_scenario(dir.path / "empty.json"), ParseError);
    }
    SUBCASE("unknown keys are rejected") {
        spit(dir.path / "unknown.json", R"({"version":1,"agents":[
            {"id":1,"role":"buyer"},{"id":2,"role":"seller","quality":0.5}],"typo_key":3})");
        CHECK_THROWS_WITH_AS(parse_scenario(dir.path / "unknown.json"),
                             doctest::Contains("typo_key"), ValidationError);
    }
    SUBCASE("missing version is reported") {
        spit(dir.path / "nover.json", R"({"agents":[
            {"id":1,"role":"buyer"},{"id":2,"role":"seller","quality":0.5}]})");
        CHECK_THROWS_WITH_AS(parse_scenario(dir.path / "nover.json"),
                             doctest::Contains("version"), ValidationError);
    }
    SUBCASE("every issue is reported together") {
        spit(dir.path / "multi.json", R"({"version":1,"engine":{"penalty_p":0.5,"kappa":7},
            "agents":[{"id":1,"role":"buyer"}],"rounds":0})");
        try {
            parse_scenario(dir.path / "multi.json");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.issues.size() >= 4);  // penalty, kappa, no seller, rounds
        }
    }
    SUBCASE("missing file is an io error") {
        CHECK_THROWS_AS(parse_scenario(dir.path / "nope.json"), IoError);
    }
}

TEST_CASE("parse errors carry a position") {
    TempDir dir;
    spit(dir.path / "broken.json", "{\n  \"version\": 1,\n  oops\n}");
    CHECK_THROWS_WITH_AS(parse_scenario(dir.path / "broken.json"), doctest::Contains("line 3"),
                         ParseError);
}

TEST_CASE("case-study replay matches the frozen values") {
    const RunReport report = run_case_study();
    REQUIRE(report.case_study.has_value());
    const CaseStudyCheck& cs = *report.case_study;

    CHECK(cs.pass);
    CHECK(cs.mismatches.empty());
    CHECK(std::fabs(cs.m2 - 0.0091505) <= 1e-6);
    CHECK(std::fabs(cs.or_others - 0.38746) <= 1e-4);
    CHECK(std::fabs(cs.omega_value - 0.017751) <= 1e-5);
    CHECK(std::fabs(cs.phi_value - 0.026627) <= 1e-5);

    REQUIRE(cs.verdicts.size() == 4);
    CHECK(cs.verdicts[0] == std::pair<AgentId, OpinionLabel>{1, OpinionLabel::Honest});
    CHECK(cs.verdicts[1] == std::pair<AgentId, OpinionLabel>{3, OpinionLabel::Honest});
    CHECK(cs.verdicts[2] == std::pair<AgentId, OpinionLabel>{5, OpinionLabel::Dishonest});
    CHECK(cs.verdicts[3] == std::pair<AgentId, OpinionLabel>{7, OpinionLabel::Honest});

    CHECK(std::fabs(cs.updated_reputation.at(1) - 0.459763) <= 1e-5);
    CHECK(std::fabs(cs.updated_reputation.at(3) - 0.499053) <= 1e-5);
    CHECK(std::fabs(cs.updated_reputation.at(5) - 0.496953) <= 1e-5);
    CHECK(std::fabs(cs.updated_reputation.at(7) - 0.474496) <= 1e-5);

    // Weights rise with past behaviour, as the fixture's advisors are ordered.
    REQUIRE(cs.contributors.size() == 3);
    CHECK(cs.contributors[0].weight < cs.contributors[1].weight);
    CHECK(cs.contributors[1].weight < cs.contributors[2].weight);
}

TEST_CASE("emit_results output shape") {
    TempDir dir;

    SUBCASE("zero-round report gives headers only") {
        RunReport report;
        emit_results(report, {OutputFormat::Csv}, dir.path);
        CHECK(slurp(dir.path / "metrics.csv") == "round,precision,recall,agg_error,sr_absent\n");
        CHECK(slurp(dir.path / "advisors.csv") == "round,advisor,reputation,category\n");
        CHECK_FALSE(fs::exists(dir.path / "report.json"));
    }
    SUBCASE("emitting the same report twice is byte identical") {
        const RunReport report = run_case_study();
        emit_results(report, {OutputFormat::Csv, OutputFormat::Json}, dir.path / "a");
        emit_results(report, {OutputFormat::Csv, OutputFormat::Json}, dir.path / "b");
        for (const char* name : {"metrics.csv", "advisors.csv", "report.json"}) {
            CHECK(slurp(dir.path / "a" / name) == slurp(dir.path / "b" / name));
        }
    }
    SUBCASE("case-study advisors.csv carries the updated reputations") {
        const RunReport report = run_case_study();
        emit_results(report, {OutputFormat::Csv}, dir.path);
        const std::string advisors = slurp(dir.path / "advisors.csv");
        CHECK(advisors.find("0,1,0.459763,reputed") != std::string::npos);
        CHECK(advisors.find("0,3,0.499053,reputed") != std::string::npos);
        CHECK(advisors.find("0,5,0.496953,reputed") != std::string::npos);
        CHECK(advisors.find("0,7,0.474497,reputed") != std::string::npos);
    }
    SUBCASE("absent ratios become empty cells, not zeros") {
        RunReport report;
        MetricsRow row;
        row.round = 3;
        row.recall = 0.25;
        row.sr_absent = true;
        report.metrics.per_round.push_back(row);
        emit_results(report, {OutputFormat::Csv}, dir.path);
        CHECK(slurp(dir.path / "metrics.csv") ==
              "round,precision,recall,agg_error,sr_absent\n3,,0.250000,,1\n");
    }
    SUBCASE("unwritable destination surfaces the path") {
        RunReport report;
        CHECK_THROWS_AS(emit_results(report, {OutputFormat::Csv}, "/proc/no_such_dir"),
                        IoError);
    }
}

TEST_CASE("ledger persistence round-trips exactly") {
    TempDir dir;

    SUBCASE("fixture ledger") {
        const BuyerLedger ledger = fixture_ledger();
        persist_ledger(ledger, dir.path / "ledger.json");
        CHECK(load_ledger(dir.path / "ledger.json") == ledger);
    }
    SUBCASE("empty ledger") {
        BuyerLedger ledger;
        ledger.owner = 9;
        ledger.delta = 1.0;
        persist_ledger(ledger, dir.path / "empty.json");
        CHECK(load_ledger(dir.path / "empty.json") == ledger);
    }
    SUBCASE("random ledgers, exact field equality") {
        std::mt19937_64 gen(71);
        for (int iter = 0; iter < 200; ++iter) {
            const BuyerLedger ledger = random_ledger(gen);
            persist_ledger(ledger, dir.path / "r.json");
            CHECK(load_ledger(dir.path / "r.json") == ledger);
        }
    }
    SUBCASE("truncated file refuses to load") {
        const BuyerLedger ledger = fixture_ledger();
        persist_ledger(ledger, dir.path / "full.json");
        const std::string full = slurp(dir.path / "full.json");
        spit(dir.path / "cut.json", std::string_view(full).substr(0, full.size() / 2));
        CHECK_THROWS_AS(load_ledger(dir.path / "cut.json"), ParseError);
    }
    SUBCASE("schema version mismatch is explicit") {
        spit(dir.path / "v9.json", R"({"version":9,"owner":1,"delta":0.5,"records":[]})");
        CHECK_THROWS_WITH_AS(load_ledger(dir.path / "v9.json"),
                             doctest::Contains("version"), ValidationError);
    }
    SUBCASE("invalid record fields are rejected") {
        spit(dir.path / "badrec.json",
             R"({"version":1,"owner":1,"delta":0.5,"records":[
                 {"advisor":3,"reputation":1.2,"honest_count":1,"total_count":2,"category":"new"}]})");
        CHECK_THROWS_AS(load_ledger(dir.path / "badrec.json"), ValidationError);
    }
}

TEST_CASE("digest tracks every byte") {
    CHECK(digest_bytes("abc") != digest_bytes("abd"));
    CHECK(digest_bytes("abc") != digest_bytes("abc "));
    CHECK(digest_bytes("abc") == digest_bytes("abc"));
    CHECK(digest_bytes("").size() == 16);
}

TEST_CASE("opinion files parse and validate") {
    TempDir dir;
    spit(dir.path / "ops.json",
         R"([{"advisor":1,"reported":0.38},{"advisor":3,"reported":0.387}])");
    const auto ops = parse_opinions(dir.path / "ops.json");
    REQUIRE(ops.size() == 2);
    CHECK(ops[0].advisor == 1);
    CHECK(ops[0].reported.value() == 0.38);

    spit(dir.path / "bad.json", R"([{"advisor":1,"reported":1.5}])");
    CHECK_THROWS_AS(parse_opinions(dir.path / "bad.json"), ValidationError);
}
