// Command-line front end. Subcommands: solve, stability, mech, audit,
// generate. Every report embeds the run configuration and library version,
// and identical configurations produce byte-identical output.
//
// Exit codes: 0 success / clean audit, 1 usage or parse error, 2 the audit
// found a profitable deviation, 3 undecidable (enumeration or retry limits).
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stableloc/audit.hpp"
#include "stableloc/generators.hpp"
#include "stableloc/instance.hpp"
#include "stableloc/json_io.hpp"
#include "stableloc/kmedian.hpp"
#include "stableloc/mechanisms.hpp"
#include "stableloc/stability.hpp"
#include "stableloc/version.hpp"

namespace {

using stableloc::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitProfitable = 2;
constexpr int kExitUndecidable = 3;

stableloc::Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    Json j;
    in >> j;
    return stableloc::instance_from_json(j);
}

// JSON-lines suite: each line is either a bare instance object or an object
// with an "instance" field (the generate output format). Blank lines skipped.
std::vector<stableloc::Instance> load_suite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open suite file: " + path);
    std::vector<stableloc::Instance> instances;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            Json j = Json::parse(line);
            const Json& body = j.is_object() && j.contains("instance") ? j.at("instance") : j;
            instances.push_back(stableloc::instance_from_json(body));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (instances.empty()) throw std::runtime_error(path + ": suite contains no instances");
    return instances;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

std::string render_report(const Json& config, const Json& result) {
    Json report{{"version", stableloc::kVersion}, {"config", config}, {"result", result}};
    return report.dump(2) + "\n";
}

stableloc::MechanismRule parse_rule(const std::string& name) {
    if (name == "optimal") return stableloc::MechanismRule::Optimal;
    if (name == "unguarded-optimal") return stableloc::MechanismRule::UnguardedOptimal;
    if (name == "almost-rightmost") return stableloc::MechanismRule::AlmostRightmost;
    if (name == "random") return stableloc::MechanismRule::Random;
    throw std::runtime_error("unknown rule: " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-facility location on the line: solver, stability oracle, "
                 "mechanisms, strategyproofness audit, instance generators"};
    app.require_subcommand(1);

    std::string input;
    std::string suite;
    std::string rule = "optimal";
    std::string format = "json";
    std::string out_path;
    double gamma = 0.0;
    bool want_max = false;
    double eps = stableloc::kDefaultEps;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int gen_n = 8;
    int gen_k = 2;
    int gen_count = 1;
    double gen_margin = 1.25;
    bool no_singletons = false;
    double grid_divisions = 500.0;
    double span_multiplier = 30.0;
    bool no_structural = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--eps", eps, "numerical tolerance")->capture_default_str();
        cmd->add_option("--out", out_path, "write the report to this path instead of stdout");
    };

    CLI::App* solve = app.add_subcommand("solve", "optimal clustering of one instance");
    solve->add_option("-i,--input", input, "instance JSON file")->required();
    add_common(solve);

    CLI::App* stability = app.add_subcommand("stability", "stability decision or supremum factor");
    stability->add_option("-i,--input", input, "instance JSON file")->required();
    auto* query = stability->add_option_group("query", "what to compute");
    query->add_option("--gamma", gamma, "decide gamma-stability for this factor");
    query->add_flag("--max", want_max, "compute the supremum stability factor");
    query->require_option(1);
    add_common(stability);

    CLI::App* mech = app.add_subcommand("mech", "run an allocation rule on one instance");
    mech->add_option("-i,--input", input, "instance JSON file")->required();
    mech->add_option("--rule", rule, "allocation rule")
        ->required()
        ->check(CLI::IsMember({"optimal", "unguarded-optimal", "almost-rightmost", "random"}));
    mech->add_option("--seed", seed, "also draw one sample of the randomized rule")
        ->each([&](const std::string&) { seed_given = true; });
    add_common(mech);

    CLI::App* audit = app.add_subcommand("audit", "profitable-deviation search over a suite");
    auto* source = audit->add_option_group("source", "where the instances come from");
    source->add_option("-i,--input", input, "single instance JSON file");
    source->add_option("--suite", suite, "JSON-lines suite file");
    source->require_option(1);
    audit->add_option("--rule", rule, "allocation rule")
        ->required()
        ->check(CLI::IsMember({"optimal", "unguarded-optimal", "almost-rightmost", "random"}));
    audit->add_option("--format", format, "report format")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
    audit->add_option("--grid-divisions", grid_divisions, "candidate grid resolution")
        ->capture_default_str();
    audit->add_option("--span-multiplier", span_multiplier, "far-report distance in spans")
        ->capture_default_str();
    audit->add_flag("--no-structural", no_structural, "drop structural candidate reports");
    add_common(audit);

    CLI::App* generate = app.add_subcommand("generate", "emit certified stable instances (JSONL)");
    generate->add_option("--n", gen_n, "agents per instance")->capture_default_str();
    generate->add_option("--k", gen_k, "clusters per instance")->capture_default_str();
    generate->add_option("--gamma", gamma, "stability target")->required();
    generate->add_option("--seed", seed, "base seed; instance i uses seed + i")->required();
    generate->add_option("--count", gen_count, "number of instances")->capture_default_str();
    generate->add_option("--margin", gen_margin, "initial inter-cluster gap inflation")
        ->capture_default_str();
    generate->add_flag("--no-singletons", no_singletons, "force every cluster size >= 2");
    add_common(generate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(solve)) {
            Json config{{"command", "solve"}, {"input", input}, {"eps", eps}, {"out", out_path}};
            auto inst = load_instance(input);
            auto oc = stableloc::optimal_clustering(inst, eps);
            emit(render_report(config, stableloc::clustering_to_json(oc)), out_path);
            return kExitOk;
        }

        if (app.got_subcommand(stability)) {
            Json config{{"command", "stability"},
                        {"input", input},
                        {"gamma", want_max ? Json(nullptr) : Json(gamma)},
                        {"max", want_max},
                        {"eps", eps},
                        {"out", out_path}};
            auto inst = load_instance(input);
            try {
                Json result;
                if (want_max) {
                    auto factor = stableloc::max_stability_factor(inst, eps);
                    result["max_stability_factor"] = stableloc::stability_factor_to_json(factor);
                    result["binding_rival"] =
                        factor.binding_rival ? Json(*factor.binding_rival) : Json(nullptr);
                } else {
                    result = stableloc::stability_report_to_json(
                        stableloc::is_gamma_stable(inst, gamma, eps));
                }
                emit(render_report(config, result), out_path);
                return kExitOk;
            } catch (const stableloc::EnumerationLimitError& e) {
                Json result{{"status", "unknown"}, {"error", e.what()}};
                emit(render_report(config, result), out_path);
                return kExitUndecidable;
            }
        }

        if (app.got_subcommand(mech)) {
            Json config{{"command", "mech"},
                        {"input", input},
                        {"rule", rule},
                        {"seed", seed_given ? Json(seed) : Json(nullptr)},
                        {"eps", eps},
                        {"out", out_path}};
            auto inst = load_instance(input);
            Json result;
            switch (parse_rule(rule)) {
                case stableloc::MechanismRule::Optimal:
                    result = stableloc::outcome_to_json(stableloc::run_optimal_mechanism(inst, eps));
                    break;
                case stableloc::MechanismRule::UnguardedOptimal:
                    result = stableloc::outcome_to_json(stableloc::run_unguarded_optimal(inst, eps));
                    break;
                case stableloc::MechanismRule::AlmostRightmost:
                    result = stableloc::outcome_to_json(stableloc::run_almost_rightmost(inst, eps));
                    break;
                case stableloc::MechanismRule::Random: {
                    auto dist = stableloc::random_mechanism_distribution(inst, eps);
                    result["distribution"] = stableloc::distribution_to_json(dist);
                    if (seed_given) {
                        result["sample"] = stableloc::outcome_to_json(
                            stableloc::sample_random_mechanism(inst, seed, eps));
                    }
                    break;
                }
            }
            emit(render_report(config, result), out_path);
            return kExitOk;
        }

        if (app.got_subcommand(audit)) {
            Json config{{"command", "audit"},
                        {"input", input},
                        {"suite", suite},
                        {"rule", rule},
                        {"format", format},
                        {"grid_divisions", grid_divisions},
                        {"span_multiplier", span_multiplier},
                        {"structural", !no_structural},
                        {"eps", eps},
                        {"out", out_path}};
            std::vector<stableloc::Instance> instances;
            if (!suite.empty()) {
                instances = load_suite(suite);
            } else {
                instances.push_back(load_instance(input));
            }
            stableloc::CandidatePolicy policy;
            policy.grid_divisions = grid_divisions;
            policy.span_multiplier = span_multiplier;
            policy.include_structural = !no_structural;
            auto report = stableloc::audit_strategyproofness(parse_rule(rule), instances, policy, eps);
            if (format == "csv") {
                std::ostringstream text;
                text << "# version=" << stableloc::kVersion << "\n"
                     << "# config=" << config.dump() << "\n"
                     << stableloc::audit_report_to_csv(report);
                emit(text.str(), out_path);
            } else {
                emit(render_report(config, stableloc::audit_report_to_json(report)), out_path);
            }
            return report.findings.empty() ? kExitOk : kExitProfitable;
        }

        if (app.got_subcommand(generate)) {
            Json config{{"command", "generate"}, {"n", gen_n},
                        {"k", gen_k},           {"gamma", gamma},
                        {"seed", seed},         {"count", gen_count},
                        {"margin", gen_margin}, {"allow_singletons", !no_singletons},
                        {"eps", eps},           {"out", out_path}};
            stableloc::StableGenParams params;
            params.n = gen_n;
            params.k = gen_k;
            params.gamma_target = gamma;
            params.margin = gen_margin;
            params.allow_singletons = !no_singletons;
            std::ostringstream lines;
            try {
                for (int i = 0; i < gen_count; ++i) {
                    auto certified = stableloc::generate_stable_instance(params, seed + i);
                    Json line{{"version", stableloc::kVersion}, {"config", config}};
                    line.update(stableloc::certified_instance_to_json(certified));
                    lines << line.dump() << "\n";
                }
            } catch (const stableloc::GenerationError& e) {
                std::cerr << "generate: " << e.what() << "\n";
                return kExitUndecidable;
            }
            emit(lines.str(), out_path);
            return kExitOk;
        }
    } catch (const stableloc::EnumerationLimitError& e) {
        std::cerr << "undecidable: " << e.what() << "\n";
        return kExitUndecidable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    return kExitUsage;
}
