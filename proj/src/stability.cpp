#include "stableloc/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stableloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_factors(const Instance& inst, const PerturbationFactors& pf, double eps) {
    if (pf.gamma < 1.0) throw std::invalid_argument("gamma must be at least 1");
    if (static_cast<int>(pf.factors.size()) != inst.n() - 1) {
        throw std::invalid_argument("need one factor per gap");
    }
    const double lo = 1.0 / pf.gamma;
    for (double f : pf.factors) {
        if (f < lo - eps || f > 1.0 + eps) {
            throw std::invalid_argument("perturbation factor outside [1/gamma, 1]");
        }
    }
}

}  // namespace

Instance apply_perturbation(const Instance& inst, const PerturbationFactors& pf) {
    validate_factors(inst, pf, kDefaultEps);
    GapVector g = gaps(inst);
    for (std::size_t t = 0; t < g.size(); ++t) g[t] *= pf.factors[t];
    return instance_from_gaps(inst.locations.front(), g, inst.k);
}

StabilityReport is_gamma_stable(const Instance& inst, double gamma, double eps,
                                std::size_t limit) {
    if (gamma < 1.0) throw std::invalid_argument("gamma must be at least 1");

    StabilityReport report;
    report.gamma = gamma;

    const auto opt = optimal_clustering(inst, eps);
    report.unique_at_identity = opt.unique;

    const GapVector g = gaps(inst);
    const WeightVector optimal_weights = gap_coefficients(inst, opt.clustering.sizes);
    const auto rivals = all_partitions(inst.n(), inst.k, limit);

    double worst_margin = kInf;
    for (const auto& rival : rivals) {
        if (rival == opt.clustering.sizes) continue;
        const WeightVector w = gap_coefficients(inst, rival);
        double margin = 0.0;
        for (std::size_t t = 0; t < g.size(); ++t) {
            const int c = w[t] - optimal_weights[t];
            margin += c > 0 ? c * g[t] / gamma : c * g[t];
        }
        if (margin < worst_margin) {
            worst_margin = margin;
            if (margin <= eps) {
                PerturbationFactors vertex;
                vertex.gamma = gamma;
                vertex.factors.resize(g.size());
                for (std::size_t t = 0; t < g.size(); ++t) {
                    vertex.factors[t] = w[t] - optimal_weights[t] > 0 ? 1.0 / gamma : 1.0;
                }
                report.witness = StabilityWitness{rival, std::move(vertex), margin};
            }
        }
    }

    report.is_stable = opt.unique && !report.witness.has_value();
    if (!report.is_stable && !report.witness.has_value()) {
        // Non-unique identity optimum with every box minimum above eps cannot
        // happen (the identity vertex ties), but keep the report well-formed.
        report.witness = StabilityWitness{
            opt.clustering.sizes,
            PerturbationFactors{std::vector<double>(g.size(), 1.0), gamma}, 0.0};
    }
    return report;
}

StabilityFactor max_stability_factor(const Instance& inst, double eps, std::size_t limit) {
    const auto opt = optimal_clustering(inst, eps);
    if (!opt.unique) {
        return StabilityFactor{StabilityFactor::Kind::NotStable, 0.0, std::nullopt};
    }

    const GapVector g = gaps(inst);
    const WeightVector optimal_weights = gap_coefficients(inst, opt.clustering.sizes);
    const auto rivals = all_partitions(inst.n(), inst.k, limit);

    StabilityFactor result{StabilityFactor::Kind::Unbounded, 0.0, std::nullopt};
    for (const auto& rival : rivals) {
        if (rival == opt.clustering.sizes) continue;
        const WeightVector w = gap_coefficients(inst, rival);
        double shrinkable = 0.0;  // adversary divides these terms by gamma
        double fixed = 0.0;       // adversary keeps these gaps at full length
        for (std::size_t t = 0; t < g.size(); ++t) {
            if (g[t] == 0.0) continue;
            const int c = w[t] - optimal_weights[t];
            if (c > 0) {
                shrinkable += c * g[t];
            } else if (c < 0) {
                fixed += -c * g[t];
            }
        }
        if (fixed == 0.0) continue;  // rival never catches up
        const double rival_sup = shrinkable / fixed;
        if (!result.finite() || rival_sup < result.value) {
            result.kind = StabilityFactor::Kind::Finite;
            result.value = rival_sup;
            result.binding_rival = rival;
        }
    }
    return result;
}

bool check_center_proximity(const Instance& inst, const Clustering& c, double gamma,
                            double eps) {
    const int k = static_cast<int>(c.sizes.size());
    int first = 0;
    for (int i = 0; i < k; ++i) {
        const int last = first + c.sizes[i] - 1;
        for (int a = first; a <= last; ++a) {
            const double own = std::abs(inst.locations[a] - c.centers[i]);
            for (int j = 0; j < k; ++j) {
                if (j == i) continue;
                const double other = std::abs(inst.locations[a] - c.centers[j]);
                if (!(other - gamma * own > eps)) return false;
            }
        }
        first = last + 1;
    }
    return true;
}

bool check_point_separation(const Instance& inst, const Clustering& c, double gamma,
                            double eps) {
    if (gamma < 2.0 - eps) throw std::invalid_argument("point separation needs gamma >= 2");
    const int k = static_cast<int>(c.sizes.size());
    std::vector<std::pair<int, int>> ranges;
    int first = 0;
    for (int i = 0; i < k; ++i) {
        ranges.emplace_back(first, first + c.sizes[i] - 1);
        first += c.sizes[i];
    }
    for (int i = 0; i < k; ++i) {
        for (int a = ranges[i].first; a <= ranges[i].second; ++a) {
            const double own = std::abs(inst.locations[a] - c.centers[i]);
            for (int j = 0; j < k; ++j) {
                if (j == i) continue;
                for (int b = ranges[j].first; b <= ranges[j].second; ++b) {
                    const double d = std::abs(inst.locations[a] - inst.locations[b]);
                    if (!(d - (gamma - 1.0) * own > eps)) return false;
                }
            }
        }
    }
    return true;
}

double cluster_separation_threshold(double gamma) {
    return (gamma - 1.0) * (gamma - 1.0) / (2.0 * gamma);
}

bool check_cluster_separation(const Clustering& c, double gamma, double eps) {
    const double threshold = cluster_separation_threshold(gamma);
    const int k = static_cast<int>(c.sizes.size());
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const double d = inter_cluster_distance(c, i, j);
            const double bound = threshold * std::max(c.diameters[i], c.diameters[j]);
            if (!(d - bound > eps)) return false;
        }
    }
    return true;
}

}  // namespace stableloc
