// The three allocation rules, their separation-guard refusal branches, and
// the randomized rule's exact outcome distribution.
//
// Every rule first computes the optimal clustering with left-median centers.
// A refused allocation gives every agent infinite cost; the guards exist so
// that a refusal is never triggered on the instance families the rules are
// meant for, while making boundary-crossing misreports unattractive.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stableloc/instance.hpp"
#include "stableloc/kmedian.hpp"

namespace stableloc {

enum class RefusalReason { SingletonCluster, SeparationViolation };

struct Outcome {
    std::vector<double> facilities;        // k sorted coordinates when allocated
    std::optional<Clustering> clustering;  // clustering the rule worked from
    std::optional<RefusalReason> refusal;

    bool allocated() const { return !refusal.has_value(); }
};

// Distance from a location to the nearest facility; infinite when refused.
ExtendedCost agent_cost(const Outcome& outcome, double location);

// Facilities at the optimal centers. Refuses on any singleton cluster
// (checked first), then on any consecutive pair with
// max{D(C_i), D(C_i+1)} >= d(C_i, C_i+1).
Outcome run_optimal_mechanism(const Instance& inst, double eps = kDefaultEps);

// Same allocation with both guards disabled; kept for audit harnesses that
// demonstrate why the guards are needed.
Outcome run_unguarded_optimal(const Instance& inst, double eps = kDefaultEps);

// Facility at the second-rightmost agent of each cluster (the lone agent for
// singletons). Refuses only on the separation guard above.
Outcome run_almost_rightmost(const Instance& inst, double eps = kDefaultEps);

// Per-cluster uniform supports of the randomized rule: one facility drawn
// uniformly from each optimal cluster's members, independently across
// clusters. Refuses iff some consecutive pair has
// 1.6 * max{D(C_i), D(C_i+1)} >= d(C_i, C_i+1).
struct RandomOutcomeDistribution {
    Clustering clustering;
    std::vector<std::vector<double>> supports;  // member locations per cluster
    bool guard_passed = false;
    std::optional<RefusalReason> refusal;
};

RandomOutcomeDistribution random_mechanism_distribution(const Instance& inst,
                                                        double eps = kDefaultEps);

// One joint draw from the distribution; deterministic per seed. The i-th
// cluster's member index is the i-th draw from Rng(seed).
Outcome sample_random_mechanism(const Instance& inst, std::uint64_t seed,
                                double eps = kDefaultEps);

struct ExpectedCost {
    ExtendedCost cost;
    bool exact = true;        // false when estimated by Monte Carlo
    double std_error = 0.0;   // standard error of the estimate; 0 when exact
};

// E[distance to nearest facility] for an arbitrary location. Enumerates the
// product of cluster supports exactly when its (pruned) size fits the limit:
// clusters whose nearest possible facility cannot beat some other cluster's
// farthest possible facility never decide the minimum and are dropped first.
// Falls back to seeded Monte Carlo beyond the limit, flagged via `exact`.
ExpectedCost expected_agent_cost_detail(const RandomOutcomeDistribution& dist, double location,
                                        std::size_t product_limit = kDefaultEnumerationLimit,
                                        std::uint64_t mc_seed = 0x9e1d5eedULL,
                                        std::size_t mc_samples = 100'000);

ExtendedCost expected_agent_cost(const RandomOutcomeDistribution& dist, double location,
                                 std::size_t product_limit = kDefaultEnumerationLimit);

}  // namespace stableloc
