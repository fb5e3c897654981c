// JSON (de)serialization for the public value types. Object keys are emitted
// in a fixed order so identical values always produce identical bytes.
// Infinite costs serialize as JSON null.
#pragma once

#include <string>

#include "json.hpp"

#include "stableloc/audit.hpp"
#include "stableloc/generators.hpp"
#include "stableloc/instance.hpp"
#include "stableloc/kmedian.hpp"
#include "stableloc/mechanisms.hpp"
#include "stableloc/stability.hpp"

namespace stableloc {

using Json = nlohmann::ordered_json;

Json instance_to_json(const Instance& inst);
// Accepts {"k": <int>, "locations": [...]}; locations may be unsorted.
Instance instance_from_json(const Json& j);

Json clustering_to_json(const OptimalClustering& oc);
Json outcome_to_json(const Outcome& outcome);
Json distribution_to_json(const RandomOutcomeDistribution& dist);
Json stability_report_to_json(const StabilityReport& report);
Json stability_factor_to_json(const StabilityFactor& factor);
Json finding_to_json(const DeviationFinding& finding);
Json audit_report_to_json(const AuditReport& report);
Json certified_instance_to_json(const CertifiedInstance& ci);

// One CSV row per finding, with header:
// instance,agent,report,truthful_cost,deviated_cost,gain,classification,monte_carlo
std::string audit_report_to_csv(const AuditReport& report);

}  // namespace stableloc
