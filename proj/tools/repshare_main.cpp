// repshare CLI: replay the packaged case study, run simulation scenarios,
// or one-shot-filter a hand-written opinion file.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "repshare/repshare.hpp"

namespace {

using namespace repshare;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) {
        return flag_value;
    }
    if (const char* env = std::getenv("REPSHARE_OUT_DIR")) {
        return env;
    }
    return "out";
}

std::set<OutputFormat> resolve_formats(const std::vector<std::string>& names) {
    if (names.empty()) {
        return {OutputFormat::Csv, OutputFormat::Json};
    }
    std::set<OutputFormat> formats;
    for (const std::string& n : names) {
        if (n == "csv") {
            formats.insert(OutputFormat::Csv);
        } else if (n == "json") {
            formats.insert(OutputFormat::Json);
        } else {
            throw ValidationError({"--format must be csv or json, got \"" + n + "\""});
        }
    }
    return formats;
}

void print4(const char* label, double v) {
    std::printf("%s = %.4f\n", label, v);
}

int cmd_case_study(const std::string& out_flag, const std::vector<std::string>& formats) {
    const RunReport report = run_case_study();
    const CaseStudyCheck& cs = *report.case_study;

    print4("second moment m2", cs.m2);
    for (const auto& [advisor, label] : cs.verdicts) {
        std::printf("opinion from advisor %u: %s\n", advisor, to_string(label));
    }
    for (const auto& [advisor, reason] : cs.excluded) {
        std::printf("excluded advisor %u: %s\n", advisor, to_string(reason));
    }
    for (const Contribution& c : cs.contributors) {
        std::printf("weight of advisor %u = %.4f\n", c.advisor, c.weight);
    }
    print4("aggregated shared reputation or_others", cs.or_others);
    print4("reward factor omega", cs.omega_value);
    print4("penalty factor phi", cs.phi_value);
    for (const auto& [advisor, ar] : cs.updated_reputation) {
        std::printf("updated reputation of advisor %u = %.4f\n", advisor, ar);
    }

    emit_results(report, resolve_formats(formats), resolve_out_dir(out_flag));

    if (!cs.pass) {
        std::fprintf(stderr, "case study FAILED:\n");
        for (const std::string& m : cs.mismatches) {
            std::fprintf(stderr, "  %s\n", m.c_str());
        }
        return kExitValidation;
    }
    std::printf("case study OK\n");
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag,
                 const std::vector<std::string>& formats, bool verbose, bool seed_set,
                 std::uint64_t seed) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + config_path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = std::move(buf).str();

    ScenarioConfig config = parse_scenario_text(bytes);
    if (seed_set) {
        config.seed = seed;
        bytes += "\nseed-override=" + std::to_string(seed);
    }

    RunReport report;
    report.scenario_digest = digest_bytes(bytes);
    report.engine = config.engine;
    report.include_traces = verbose;

    std::vector<RoundTrace> traces;
    report.metrics = run_scenario(config, &traces, nullptr);
    if (verbose) {
        report.traces = std::move(traces);
    }

    const auto out_dir = resolve_out_dir(out_flag);
    emit_results(report, resolve_formats(formats), out_dir);

    std::uint64_t sr_absent = 0;
    for (const MetricsRow& row : report.metrics.per_round) {
        sr_absent += row.sr_absent ? 1 : 0;
    }
    std::printf("scenario %s: %zu rounds, %llu without shared reputation\n",
                report.scenario_digest.c_str(), report.metrics.per_round.size(),
                static_cast<unsigned long long>(sr_absent));
    print4("final reputed-list contamination", report.metrics.final_contamination);
    if (report.metrics.final_mean_honest_reputation) {
        print4("final mean advisor reputation (honest)",
               *report.metrics.final_mean_honest_reputation);
    }
    if (report.metrics.final_mean_liar_reputation) {
        print4("final mean advisor reputation (liars)",
               *report.metrics.final_mean_liar_reputation);
    }
    std::printf("results written to %s\n", out_dir.string().c_str());
    return kExitOk;
}

int cmd_filter(const std::string& opinions_path, double individual) {
    const std::vector<Opinion> opinions = parse_opinions(opinions_path);
    if (opinions.empty()) {
        std::fprintf(stderr, "no opinions to filter\n");
        return kExitValidation;
    }
    const EngineParams params;
    const Rating r(individual);
    const std::vector<FilterVerdict> verdicts = classify(opinions, r, params);

    std::vector<Rating> reported;
    for (const Opinion& op : opinions) reported.push_back(op.reported);
    print4("second moment m2", second_moment(reported, r));
    for (const FilterVerdict& v : verdicts) {
        std::printf("advisor %u: %s (deviation %+.4f)\n", v.opinion.advisor,
                    to_string(v.label), v.deviation);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic reputation sharing engine and e-market simulator"};
    app.require_subcommand(1);

    std::string out_flag;
    std::vector<std::string> formats;

    auto* case_study = app.add_subcommand("case-study", "replay the packaged golden fixture");
    case_study->add_option("--out", out_flag, "output directory (default $REPSHARE_OUT_DIR or ./out)");
    case_study->add_option("--format", formats, "csv and/or json (default both)")->delimiter(',');

    std::string config_path;
    std::uint64_t seed = 0;
    bool verbose = false;
    auto* simulate = app.add_subcommand("simulate", "run a scenario config");
    simulate->add_option("--config", config_path, "scenario JSON")->required();
    auto* seed_opt = simulate->add_option("--seed", seed, "override the config seed");
    simulate->add_option("--out", out_flag, "output directory (default $REPSHARE_OUT_DIR or ./out)");
    simulate->add_option("--format", formats, "csv and/or json (default both)")->delimiter(',');
    simulate->add_flag("--verbose", verbose, "include full round traces in report.json");

    std::string opinions_path;
    double individual = 0.0;
    auto* filter = app.add_subcommand("filter", "classify an opinion file against one rating");
    filter->add_option("--opinions", opinions_path, "JSON array of {advisor, reported}")->required();
    filter->add_option("--individual", individual, "the buyer's own rating in [0, 1)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (case_study->parsed()) {
            return cmd_case_study(out_flag, formats);
        }
        if (simulate->parsed()) {
            return cmd_simulate(config_path, out_flag, formats, verbose, seed_opt->count() > 0,
                                seed);
        }
        if (filter->parsed()) {
            return cmd_filter(opinions_path, individual);
        }
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitOk;
}
