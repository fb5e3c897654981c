// Gap perturbations and the stability machinery built on them.
//
// A gamma-perturbation keeps the leftmost agent fixed and rescales each
// consecutive gap by a factor in [1/gamma, 1]. An instance is gamma-stable
// when its optimal partition is unique and stays the unique optimum under
// every such perturbation. Because order is preserved, each partition's cost
// is linear in the gap lengths (see gap_coefficients), so the worst case over
// the perturbation box is attained at a box vertex and can be checked exactly.
#pragma once

#include <optional>
#include <vector>

#include "stableloc/instance.hpp"
#include "stableloc/kmedian.hpp"

namespace stableloc {

struct PerturbationFactors {
    std::vector<double> factors;  // one per gap, each in [1/gamma, 1]
    double gamma = 1.0;
};

// x'_1 = x_1, gap'_t = factors[t] * gap_t. Throws when a factor leaves
// [1/gamma, 1] (tolerance kDefaultEps) or sizes mismatch.
Instance apply_perturbation(const Instance& inst, const PerturbationFactors& pf);

struct StabilityWitness {
    Partition rival;             // partition that catches up with the optimum
    PerturbationFactors factors; // box vertex realizing the minimum margin
    double margin = 0.0;         // rival cost - optimal cost at that vertex
};

struct StabilityReport {
    bool is_stable = false;
    double gamma = 1.0;
    bool unique_at_identity = false;
    std::optional<StabilityWitness> witness;  // present whenever unstable
};

// Exact decision: stable iff for every rival partition the minimum over the
// perturbation box of [rival cost - optimal cost] stays above eps. Each
// per-gap coefficient c_t = rival_weight[t] - optimal_weight[t] contributes
// c_t*g_t/gamma when positive (adversary shrinks the gap) and c_t*g_t when
// negative. A zero margin counts as unstable: uniqueness fails at the vertex.
StabilityReport is_gamma_stable(const Instance& inst, double gamma, double eps = kDefaultEps,
                                std::size_t limit = kDefaultEnumerationLimit);

struct StabilityFactor {
    enum class Kind { Finite, Unbounded, NotStable };
    Kind kind = Kind::Finite;
    double value = 0.0;                      // meaningful only when Finite
    std::optional<Partition> binding_rival;  // rival attaining the supremum

    bool finite() const { return kind == Kind::Finite; }
};

// Supremum of the stable gamma range, in closed form: per rival,
// sum of positive coefficient terms / -(sum of negative coefficient terms),
// unbounded when no negative term exists; the result is the minimum over
// rivals. The supremum itself is not attained. NotStable when the identity
// optimum is not unique.
StabilityFactor max_stability_factor(const Instance& inst, double eps = kDefaultEps,
                                     std::size_t limit = kDefaultEnumerationLimit);

// Every agent is more than gamma times closer to its own center than to any
// other center: d(x, c_j) > gamma * d(x, c_i) for all x in C_i, j != i.
bool check_center_proximity(const Instance& inst, const Clustering& c, double gamma,
                            double eps = kDefaultEps);

// Points in different clusters are far apart relative to the first point's
// center distance: d(x, y) > (gamma - 1) * d(x, c_i). Requires gamma >= 2.
bool check_point_separation(const Instance& inst, const Clustering& c, double gamma,
                            double eps = kDefaultEps);

// Inter-cluster distance beats ((gamma-1)^2 / (2*gamma)) * max of the two
// diameters, for every cluster pair.
bool check_cluster_separation(const Clustering& c, double gamma, double eps = kDefaultEps);

double cluster_separation_threshold(double gamma);

}  // namespace stableloc
