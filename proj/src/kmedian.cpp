#include "stableloc/kmedian.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace stableloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// prefix[i] = sum of the first i locations.
std::vector<double> prefix_sums(const std::vector<double>& xs) {
    std::vector<double> prefix(xs.size() + 1, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) prefix[i + 1] = prefix[i] + xs[i];
    return prefix;
}

// Cost of serving locations[first..last] from their left median.
double segment_cost(const std::vector<double>& xs, const std::vector<double>& prefix, int first,
                    int last) {
    const int m = left_median_index(first, last);
    const double xm = xs[m];
    const double left = xm * (m - first + 1) - (prefix[m + 1] - prefix[first]);
    const double right = (prefix[last + 1] - prefix[m + 1]) - xm * (last - m);
    return left + right;
}

// choose(n, k) clamped to the enumeration limit sentinel.
std::size_t binomial_capped(int n, int k, std::size_t cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::size_t result = 1;
    for (int i = 1; i <= k; ++i) {
        // result * (n - k + i) / i is always integral at this point.
        if (result > cap) return cap + 1;
        result = result * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    }
    return result;
}

}  // namespace

void validate_partition(const Instance& inst, const Partition& p) {
    if (static_cast<int>(p.size()) != inst.k) {
        throw std::invalid_argument("partition must have exactly k cluster sizes");
    }
    int total = 0;
    for (int s : p) {
        if (s < 1) throw std::invalid_argument("cluster sizes must be positive");
        total += s;
    }
    if (total != inst.n()) throw std::invalid_argument("cluster sizes must sum to n");
}

Clustering build_clustering(const Instance& inst, const Partition& p) {
    validate_partition(inst, p);
    const auto& xs = inst.locations;
    const auto prefix = prefix_sums(xs);

    Clustering c;
    c.sizes = p;
    int first = 0;
    for (int s : p) {
        const int last = first + s - 1;
        c.centers.push_back(xs[left_median_index(first, last)]);
        c.extents.emplace_back(xs[first], xs[last]);
        c.diameters.push_back(xs[last] - xs[first]);
        c.cost += segment_cost(xs, prefix, first, last);
        first = last + 1;
    }
    return c;
}

OptimalClustering optimal_clustering(const Instance& inst, double eps) {
    const int n = inst.n();
    const int k = inst.k;
    const auto& xs = inst.locations;
    const auto prefix = prefix_sums(xs);

    // best[j][i] / second[j][i]: two smallest costs of splitting the first i
    // locations into j clusters, over distinct partitions.
    std::vector<std::vector<double>> best(k + 1, std::vector<double>(n + 1, kInf));
    std::vector<std::vector<double>> second(k + 1, std::vector<double>(n + 1, kInf));
    std::vector<std::vector<int>> parent(k + 1, std::vector<int>(n + 1, -1));
    best[0][0] = 0.0;

    for (int j = 1; j <= k; ++j) {
        for (int i = j; i <= n - (k - j); ++i) {
            double b1 = kInf, b2 = kInf;
            int arg = -1;
            for (int t = j - 1; t < i; ++t) {
                if (best[j - 1][t] == kInf) continue;
                const double seg = segment_cost(xs, prefix, t, i - 1);
                const double cand1 = best[j - 1][t] + seg;
                if (cand1 < b1) {
                    b2 = b1;
                    b1 = cand1;
                    arg = t;
                } else if (cand1 < b2) {
                    b2 = cand1;
                }
                if (second[j - 1][t] != kInf) {
                    const double cand2 = second[j - 1][t] + seg;
                    if (cand2 < b2) b2 = cand2;
                }
            }
            best[j][i] = b1;
            second[j][i] = b2;
            parent[j][i] = arg;
        }
    }

    Partition sizes(k);
    int at = n;
    for (int j = k; j >= 1; --j) {
        const int t = parent[j][at];
        sizes[j - 1] = at - t;
        at = t;
    }

    OptimalClustering result;
    result.clustering = build_clustering(inst, sizes);
    result.second_best_cost = second[k][n];
    result.unique = !(second[k][n] - best[k][n] <= eps);
    return result;
}

std::vector<Partition> all_partitions(int n, int k, std::size_t limit) {
    if (binomial_capped(n - 1, k - 1, limit) > limit) {
        throw EnumerationLimitError("partition enumeration exceeds the configured limit");
    }
    std::vector<Partition> out;
    Partition current(k);
    // Lexicographic recursion over cluster sizes.
    auto emit = [&](auto&& self, int index, int remaining) -> void {
        if (index == k - 1) {
            current[index] = remaining;
            out.push_back(current);
            return;
        }
        const int max_here = remaining - (k - 1 - index);
        for (int s = 1; s <= max_here; ++s) {
            current[index] = s;
            self(self, index + 1, remaining - s);
        }
    };
    emit(emit, 0, n);
    return out;
}

std::vector<Partition> brute_force_optima(const Instance& inst, double eps, std::size_t limit) {
    const auto partitions = all_partitions(inst.n(), inst.k, limit);
    double bestCost = kInf;
    std::vector<double> costs;
    costs.reserve(partitions.size());
    for (const auto& p : partitions) {
        const double c = clustering_cost(inst, p);
        costs.push_back(c);
        bestCost = std::min(bestCost, c);
    }
    std::vector<Partition> optima;
    for (std::size_t i = 0; i < partitions.size(); ++i) {
        if (costs[i] - bestCost <= eps) optima.push_back(partitions[i]);
    }
    return optima;
}

double clustering_cost(const Instance& inst, const Partition& p) {
    validate_partition(inst, p);
    const auto prefix = prefix_sums(inst.locations);
    double total = 0.0;
    int first = 0;
    for (int s : p) {
        total += segment_cost(inst.locations, prefix, first, first + s - 1);
        first += s;
    }
    return total;
}

double cost_with_centers(const Instance& inst, const std::vector<double>& centers) {
    if (centers.empty()) throw std::invalid_argument("need at least one facility");
    double total = 0.0;
    for (double x : inst.locations) {
        double nearest = kInf;
        for (double c : centers) nearest = std::min(nearest, std::abs(x - c));
        total += nearest;
    }
    return total;
}

WeightVector gap_coefficients(const Instance& inst, const Partition& p) {
    validate_partition(inst, p);
    WeightVector weights(inst.n() - 1, 0);
    int first = 0;
    for (int s : p) {
        const int last = first + s - 1;
        const int m = left_median_index(first, last);
        // Gap t lies between locations t and t+1. Inside a cluster, the gap is
        // crossed once per agent on its far side of the median.
        for (int t = first; t < m; ++t) weights[t] = t - first + 1;
        for (int t = m; t < last; ++t) weights[t] = last - t;
        first = last + 1;
    }
    return weights;
}

double dot(const WeightVector& w, const GapVector& g) {
    double total = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) total += w[t] * g[t];
    return total;
}

double inter_cluster_distance(const Clustering& c, int i, int j) {
    if (i > j) std::swap(i, j);
    return c.extents[j].first - c.extents[i].second;
}

}  // namespace stableloc
