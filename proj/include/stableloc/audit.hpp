// Empirical verification harnesses: profitable-deviation search over finite
// candidate report sets, approximation-ratio measurement, singleton-deviation
// bound checks, and a falsification probe on the well-separated family.
//
// The deviation search is a falsifier, not a prover: it scans a finite,
// deterministic candidate set (grid + structural breakpoints + far reports).
// Outcomes are piecewise constant in the report between clustering-change
// breakpoints, and the structural candidates straddle those breakpoints.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stableloc/instance.hpp"
#include "stableloc/kmedian.hpp"
#include "stableloc/mechanisms.hpp"

namespace stableloc {

enum class MechanismRule { Optimal, UnguardedOptimal, AlmostRightmost, Random };

const char* rule_name(MechanismRule rule);

enum class DeviationClass { Served, TriggeredRefusal, FormedSingleton };

const char* classification_name(DeviationClass c);

struct DeviationFinding {
    int instance_index = 0;
    int agent_index = 0;
    double report = 0.0;            // the misreported location
    ExtendedCost truthful_cost;     // agent's cost when everyone is truthful
    ExtendedCost deviated_cost;     // agent's true-location cost after the misreport
    double gain = 0.0;              // truthful - deviated; positive favors lying
    DeviationClass classification = DeviationClass::Served;
    bool monte_carlo = false;       // an expected cost above was estimated
};

struct CandidatePolicy {
    double grid_divisions = 500.0;  // grid step = instance span / divisions
    double span_multiplier = 30.0;  // far reports at the extremes -+ multiplier*span
    bool include_structural = true; // agent locations, midpoints, boundaries -+ diameter
};

// Finite, deterministic, sorted, duplicate-free report set for one instance.
std::vector<double> candidate_reports(const Instance& inst, const CandidatePolicy& policy,
                                      double eps = kDefaultEps);

struct AuditReport {
    long instances_checked = 0;
    long deviations_tested = 0;
    long skipped = 0;               // deviations dropped on enumeration limits
    bool used_monte_carlo = false;
    std::vector<DeviationFinding> findings;  // profitable deviations (or bound
                                             // violations, for the lemma check)
    std::optional<double> worst_ratio;       // worst ratio over allocating instances
    std::vector<std::string> notes;
};

// Agent's cost under the rule on the truthful instance; expected cost for the
// randomized rule, infinite on refusal.
ExtendedCost truthful_cost(MechanismRule rule, const Instance& inst, int agent,
                           double eps = kDefaultEps);

// Evaluates one misreport: runs the rule on (x_{-agent}, report) and prices
// the outcome at the agent's true location. The classification records what
// the misreport did in the reported instance's optimal clustering.
DeviationFinding evaluate_deviation(MechanismRule rule, const Instance& inst, int agent,
                                    double report, double eps = kDefaultEps);

// Maximum-gain candidate whose gain clears eps (widened by 3 standard errors
// when Monte Carlo estimates are involved); nullopt when no candidate does.
std::optional<DeviationFinding> find_profitable_deviation(MechanismRule rule,
                                                          const Instance& inst, int agent,
                                                          const CandidatePolicy& policy = {},
                                                          double eps = kDefaultEps);

// find_profitable_deviation over every agent of every instance, plus ratio
// tracking. Findings are sorted by (instance, agent, report).
AuditReport audit_strategyproofness(MechanismRule rule, const std::vector<Instance>& instances,
                                    const CandidatePolicy& policy = {},
                                    double eps = kDefaultEps);

// Mechanism social cost (expected for the randomized rule) divided by the
// optimal cost. nullopt when the rule refuses, or when the optimal cost is 0
// and the rule's cost is not (0/0 counts as ratio 1).
std::optional<double> approximation_ratio(MechanismRule rule, const Instance& inst,
                                          double eps = kDefaultEps);

// For every candidate misreport that becomes a singleton cluster in the
// reported instance's optimal clustering, checks the distance bounds
//   gamma_class >= 3:  d(x_i, report) > d(x_i, own center)
//   gamma_class >= 5:  additionally d(x_i, report) > own cluster diameter.
// Each instance must first pass is_gamma_stable at gamma_class (throws
// std::invalid_argument otherwise). Violations are reported as findings with
// truthful_cost = the bound, deviated_cost = d(x_i, report), gain = shortfall.
AuditReport test_singleton_lemmas(const std::vector<Instance>& instances, int gamma_class,
                                  const CandidatePolicy& policy = {}, double eps = kDefaultEps);

// Runs the rule over the well-separated family (0, lambda, 6B+lambda,
// 6B+lambda+epsilon) with k=3 and over systematic single-agent moves within
// it (every agent relocated near every other agent at multiples of epsilon,
// the family's characteristic scale), then audits each variant for profitable
// deviations. Notes flag ratios above rho and rules that refuse the entire
// family. Requires B > 6*rho*lambda and epsilon < lambda/(10*rho).
AuditReport lower_bound_probe(MechanismRule rule, double rho, double lambda, double big_b,
                              double epsilon, const CandidatePolicy& policy = {},
                              double eps = kDefaultEps);

}  // namespace stableloc
