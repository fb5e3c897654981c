#include "stableloc/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stableloc/rng.hpp"

namespace stableloc {

namespace {

// Guard comparison: refuse when d - threshold * maxD <= eps, matching the
// ">=" refusal branch of the rules under the global tolerance.
bool separation_violated(const Clustering& c, double threshold, double eps) {
    for (std::size_t i = 0; i + 1 < c.sizes.size(); ++i) {
        const double d = inter_cluster_distance(c, static_cast<int>(i), static_cast<int>(i) + 1);
        const double maxD = std::max(c.diameters[i], c.diameters[i + 1]);
        if (d - threshold * maxD <= eps) return true;
    }
    return false;
}

bool has_singleton(const Clustering& c) {
    return std::any_of(c.sizes.begin(), c.sizes.end(), [](int s) { return s == 1; });
}

std::vector<std::vector<double>> cluster_members(const Instance& inst, const Clustering& c) {
    std::vector<std::vector<double>> members;
    members.reserve(c.sizes.size());
    int first = 0;
    for (int s : c.sizes) {
        members.emplace_back(inst.locations.begin() + first, inst.locations.begin() + first + s);
        first += s;
    }
    return members;
}

}  // namespace

ExtendedCost agent_cost(const Outcome& outcome, double location) {
    if (!outcome.allocated()) return ExtendedCost::infinite();
    double nearest = std::numeric_limits<double>::infinity();
    for (double f : outcome.facilities) nearest = std::min(nearest, std::abs(location - f));
    return ExtendedCost::finite(nearest);
}

Outcome run_optimal_mechanism(const Instance& inst, double eps) {
    Outcome out;
    out.clustering = optimal_clustering(inst, eps).clustering;
    if (has_singleton(*out.clustering)) {
        out.refusal = RefusalReason::SingletonCluster;
        return out;
    }
    if (separation_violated(*out.clustering, 1.0, eps)) {
        out.refusal = RefusalReason::SeparationViolation;
        return out;
    }
    out.facilities = out.clustering->centers;
    return out;
}

Outcome run_unguarded_optimal(const Instance& inst, double eps) {
    Outcome out;
    out.clustering = optimal_clustering(inst, eps).clustering;
    out.facilities = out.clustering->centers;
    return out;
}

Outcome run_almost_rightmost(const Instance& inst, double eps) {
    Outcome out;
    out.clustering = optimal_clustering(inst, eps).clustering;
    if (separation_violated(*out.clustering, 1.0, eps)) {
        out.refusal = RefusalReason::SeparationViolation;
        return out;
    }
    int first = 0;
    for (int s : out.clustering->sizes) {
        const int last = first + s - 1;
        out.facilities.push_back(s == 1 ? inst.locations[first] : inst.locations[last - 1]);
        first = last + 1;
    }
    return out;
}

RandomOutcomeDistribution random_mechanism_distribution(const Instance& inst, double eps) {
    RandomOutcomeDistribution dist;
    dist.clustering = optimal_clustering(inst, eps).clustering;
    if (separation_violated(dist.clustering, 1.6, eps)) {
        dist.guard_passed = false;
        dist.refusal = RefusalReason::SeparationViolation;
        return dist;
    }
    dist.guard_passed = true;
    dist.supports = cluster_members(inst, dist.clustering);
    return dist;
}

Outcome sample_random_mechanism(const Instance& inst, std::uint64_t seed, double eps) {
    const auto dist = random_mechanism_distribution(inst, eps);
    Outcome out;
    out.clustering = dist.clustering;
    if (!dist.guard_passed) {
        out.refusal = dist.refusal;
        return out;
    }
    Rng rng(seed);
    for (const auto& support : dist.supports) {
        const int pick = rng.uniform_int(0, static_cast<int>(support.size()) - 1);
        out.facilities.push_back(support[pick]);
    }
    return out;
}

ExpectedCost expected_agent_cost_detail(const RandomOutcomeDistribution& dist, double location,
                                        std::size_t product_limit, std::uint64_t mc_seed,
                                        std::size_t mc_samples) {
    if (!dist.guard_passed) return {ExtendedCost::infinite(), true, 0.0};

    // Distance bounds per cluster decide which clusters can ever be nearest.
    const std::size_t k = dist.supports.size();
    std::vector<double> dmin(k), dmax(k);
    for (std::size_t i = 0; i < k; ++i) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (double m : dist.supports[i]) {
            const double d = std::abs(location - m);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        dmin[i] = lo;
        dmax[i] = hi;
    }
    const std::size_t cover_idx = static_cast<std::size_t>(
        std::min_element(dmax.begin(), dmax.end()) - dmax.begin());
    const double cover = dmax[cover_idx];
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < k; ++i) {
        // The covering cluster is never farther than `cover`, so any cluster
        // that cannot get below `cover` never decides the minimum.
        if (dmin[i] < cover || i == cover_idx) kept.push_back(i);
    }

    std::size_t product = 1;
    bool overflow = false;
    for (std::size_t i : kept) {
        if (product > product_limit / dist.supports[i].size()) {
            overflow = true;
            break;
        }
        product *= dist.supports[i].size();
    }

    if (!overflow && product <= product_limit) {
        // Exact expectation over the pruned product distribution.
        std::vector<std::size_t> odometer(kept.size(), 0);
        double total = 0.0;
        for (std::size_t it = 0; it < product; ++it) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < kept.size(); ++j) {
                const double d = std::abs(location - dist.supports[kept[j]][odometer[j]]);
                nearest = std::min(nearest, d);
            }
            total += nearest;
            for (std::size_t j = 0; j < kept.size(); ++j) {
                if (++odometer[j] < dist.supports[kept[j]].size()) break;
                odometer[j] = 0;
            }
        }
        return {ExtendedCost::finite(total / static_cast<double>(product)), true, 0.0};
    }

    Rng rng(mc_seed);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < mc_samples; ++s) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t i : kept) {
            const auto& support = dist.supports[i];
            const double f = support[rng.uniform_int(0, static_cast<int>(support.size()) - 1)];
            nearest = std::min(nearest, std::abs(location - f));
        }
        sum += nearest;
        sum_sq += nearest * nearest;
    }
    const double mean = sum / static_cast<double>(mc_samples);
    const double var =
        std::max(0.0, sum_sq / static_cast<double>(mc_samples) - mean * mean);
    const double se = std::sqrt(var / static_cast<double>(mc_samples));
    return {ExtendedCost::finite(mean), false, se};
}

ExtendedCost expected_agent_cost(const RandomOutcomeDistribution& dist, double location,
                                 std::size_t product_limit) {
    return expected_agent_cost_detail(dist, location, product_limit).cost;
}

}  // namespace stableloc
