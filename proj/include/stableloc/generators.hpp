// Seeded construction of instance families: oracle-certified stable
// instances, near-tight separation instances, the well-separated lower-bound
// family, the singleton-deviation exploit family, and a perturbation sampler.
//
// Construction alone is never trusted: every "certified" output has been
// accepted by the stability oracle before it is returned.
#pragma once

#include <cstdint>
#include <utility>

#include "stableloc/instance.hpp"
#include "stableloc/stability.hpp"

namespace stableloc {

enum class IntraShape { Uniform, ClusteredLeft, ClusteredRight };

struct StableGenParams {
    int n = 8;
    int k = 2;
    double gamma_target = 2.0;
    std::pair<double, double> diameter_range{1.0, 10.0};
    IntraShape shape = IntraShape::Uniform;
    double margin = 1.25;          // inter-cluster gap inflation, > 1
    bool allow_singletons = true;  // when false, every cluster gets >= 2 agents
};

struct StabilityCertificate {
    double gamma_target = 1.0;
    StabilityFactor factor;   // oracle value for the emitted instance
    double margin_used = 0;   // margin after retries
    int attempts = 0;
    std::uint64_t seed = 0;
};

struct CertifiedInstance {
    Instance instance;
    StabilityCertificate certificate;
};

class GenerationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Draws cluster sizes, diameters and layouts from the seed, places
// consecutive clusters gap = margin * gamma_target * max(adjacent diameters,
// 1) apart, then certifies with the oracle. On rejection the margin doubles;
// gives up (GenerationError) after 20 rounds.
CertifiedInstance generate_stable_instance(const StableGenParams& params, std::uint64_t seed);

// Clusters whose left median sits at the fraction (1/2 + 1/(2*gamma)) of the
// cluster diameter from its left end, with inter-cluster gaps a factor
// 1 + 1e-3 above the cluster-separation threshold. Demonstrates that the
// separation bound is nearly sharp. Requires gamma > 1 and n >= 3k (a
// two-agent cluster cannot realize an interior median fraction).
Instance generate_tight_instance(double gamma, int n, int k, std::uint64_t seed);

// The 4-agent, k=3 family (0, lambda, 6B+lambda, 6B+lambda+epsilon): the
// rightmost pair is more than rho times closer together than any other
// consecutive pair. Requires B > 6*rho*lambda and epsilon*rho < lambda.
Instance generate_well_separated(double rho, double lambda, double big_b, double epsilon);

// The 8-agent, k=2 family (0, 1-e, 1, 6g, 6g+e, 6g+1, 6g+1+e, 6g+2) on which
// an unguarded optimal rule invites a far-away misreport: the misreport
// becomes a singleton cluster and drags the remaining center next to the
// deviator. Stable with factor proportional to gamma.
Instance generate_singleton_exploit_instance(double gamma, double epsilon);

// Uniform factor per gap in [1/gamma, 1]; deterministic per seed.
std::pair<PerturbationFactors, Instance> sample_perturbation(const Instance& inst, double gamma,
                                                             std::uint64_t seed);

}  // namespace stableloc
