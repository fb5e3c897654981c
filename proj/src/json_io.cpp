#include "stableloc/json_io.hpp"

#include <sstream>

namespace stableloc {

namespace {

Json cost_to_json(ExtendedCost c) {
    if (c.is_infinite()) return nullptr;
    return c.v;
}

std::string cost_to_csv(ExtendedCost c) {
    if (c.is_infinite()) return "inf";
    std::ostringstream out;
    out.precision(17);
    out << c.v;
    return out.str();
}

}  // namespace

Json instance_to_json(const Instance& inst) {
    return Json{{"k", inst.k}, {"locations", inst.locations}};
}

Instance instance_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("k") || !j.contains("locations")) {
        throw std::invalid_argument("instance JSON needs fields \"k\" and \"locations\"");
    }
    if (!j.at("k").is_number_integer()) {
        throw std::invalid_argument("field \"k\" must be an integer");
    }
    if (!j.at("locations").is_array()) {
        throw std::invalid_argument("field \"locations\" must be an array of numbers");
    }
    std::vector<double> locations;
    for (const auto& value : j.at("locations")) {
        if (!value.is_number()) {
            throw std::invalid_argument("field \"locations\" must contain only numbers");
        }
        locations.push_back(value.get<double>());
    }
    return make_instance(std::move(locations), j.at("k").get<int>());
}

Json clustering_to_json(const OptimalClustering& oc) {
    return Json{{"sizes", oc.clustering.sizes},
                {"centers", oc.clustering.centers},
                {"cost", oc.clustering.cost},
                {"unique", oc.unique}};
}

Json outcome_to_json(const Outcome& outcome) {
    Json j;
    j["allocated"] = outcome.allocated();
    if (outcome.refusal) {
        j["reason"] = *outcome.refusal == RefusalReason::SingletonCluster
                          ? "singleton-cluster"
                          : "separation-violation";
    } else {
        j["reason"] = nullptr;
    }
    j["facilities"] = outcome.facilities;
    j["sizes"] = outcome.clustering ? Json(outcome.clustering->sizes) : Json::array();
    return j;
}

Json distribution_to_json(const RandomOutcomeDistribution& dist) {
    Json j;
    j["allocated"] = dist.guard_passed;
    j["reason"] = dist.guard_passed ? Json(nullptr) : Json("separation-violation");
    j["supports"] = dist.supports;
    j["sizes"] = dist.clustering.sizes;
    return j;
}

Json stability_report_to_json(const StabilityReport& report) {
    Json j;
    j["stable"] = report.is_stable;
    j["gamma"] = report.gamma;
    j["unique_at_identity"] = report.unique_at_identity;
    if (report.witness) {
        j["witness"] = Json{{"rival_sizes", report.witness->rival},
                            {"factors", report.witness->factors.factors},
                            {"margin", report.witness->margin}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json stability_factor_to_json(const StabilityFactor& factor) {
    switch (factor.kind) {
        case StabilityFactor::Kind::Finite: return Json(factor.value);
        case StabilityFactor::Kind::Unbounded: return Json("unbounded");
        case StabilityFactor::Kind::NotStable: return Json("not-stable");
    }
    return Json(nullptr);
}

Json finding_to_json(const DeviationFinding& finding) {
    return Json{{"instance", finding.instance_index},
                {"agent", finding.agent_index},
                {"report", finding.report},
                {"truthful_cost", cost_to_json(finding.truthful_cost)},
                {"deviated_cost", cost_to_json(finding.deviated_cost)},
                {"gain", finding.gain},
                {"classification", classification_name(finding.classification)},
                {"monte_carlo", finding.monte_carlo}};
}

Json audit_report_to_json(const AuditReport& report) {
    Json findings = Json::array();
    for (const auto& f : report.findings) findings.push_back(finding_to_json(f));
    return Json{{"instances_checked", report.instances_checked},
                {"deviations_tested", report.deviations_tested},
                {"skipped", report.skipped},
                {"used_monte_carlo", report.used_monte_carlo},
                {"worst_ratio", report.worst_ratio ? Json(*report.worst_ratio) : Json(nullptr)},
                {"findings", findings},
                {"notes", report.notes}};
}

Json certified_instance_to_json(const CertifiedInstance& ci) {
    return Json{{"instance", instance_to_json(ci.instance)},
                {"certificate",
                 Json{{"gamma_target", ci.certificate.gamma_target},
                      {"max_stability_factor", stability_factor_to_json(ci.certificate.factor)},
                      {"margin_used", ci.certificate.margin_used},
                      {"attempts", ci.certificate.attempts},
                      {"seed", ci.certificate.seed}}}};
}

std::string audit_report_to_csv(const AuditReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "instance,agent,report,truthful_cost,deviated_cost,gain,classification,monte_carlo\n";
    for (const auto& f : report.findings) {
        out << f.instance_index << ',' << f.agent_index << ',' << f.report << ','
            << cost_to_csv(f.truthful_cost) << ',' << cost_to_csv(f.deviated_cost) << ','
            << f.gain << ',' << classification_name(f.classification) << ','
            << (f.monte_carlo ? "true" : "false") << '\n';
    }
    return out.str();
}

}  // namespace stableloc
