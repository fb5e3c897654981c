// Optimal k-clustering of a line instance under the sum-of-distances
// objective, cost evaluation of arbitrary clusterings, and the per-gap
// linearization of clustering cost that the stability oracle builds on.
//
// Clusters are consecutive runs of agents. The center of a cluster is always
// its left median: the element at offset floor((size-1)/2) from the cluster's
// left end, which is the lower of the two medians for even sizes.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "stableloc/instance.hpp"

namespace stableloc {

// Cluster sizes left to right; each >= 1, summing to n.
using Partition = std::vector<int>;

struct Clustering {
    Partition sizes;
    std::vector<double> centers;                    // left median per cluster
    std::vector<std::pair<double, double>> extents; // (leftmost, rightmost) per cluster
    std::vector<double> diameters;                  // rightmost - leftmost, 0 for singletons
    double cost = 0.0;                              // sum of distances to own center
};

struct OptimalClustering {
    Clustering clustering;
    bool unique = true;          // no other partition within eps of the optimum
    double second_best_cost = 0; // +inf when only one partition exists
};

// Index of a cluster's left median inside the whole instance, given the
// cluster's inclusive index range [first, last].
inline int left_median_index(int first, int last) { return first + (last - first) / 2; }

void validate_partition(const Instance& inst, const Partition& p);

Clustering build_clustering(const Instance& inst, const Partition& p);

// Minimum-cost clustering by O(k*n^2) interval DP over prefix sums, plus a
// second-best pass that decides uniqueness (distinct partitions, not distinct
// costs). Deterministic tie-break: earliest split point wins.
OptimalClustering optimal_clustering(const Instance& inst, double eps = kDefaultEps);

// All compositions of n into k positive parts, lexicographic. Throws
// EnumerationLimitError when choose(n-1, k-1) exceeds the limit.
std::vector<Partition> all_partitions(int n, int k, std::size_t limit = kDefaultEnumerationLimit);

// Every partition attaining the minimum cost (within eps), by exhaustive
// enumeration. Oracle for the DP; same limit semantics as all_partitions.
std::vector<Partition> brute_force_optima(const Instance& inst, double eps = kDefaultEps,
                                          std::size_t limit = kDefaultEnumerationLimit);

double clustering_cost(const Instance& inst, const Partition& p);

// Each agent pays distance to the nearest of the given facility coordinates.
double cost_with_centers(const Instance& inst, const std::vector<double>& centers);

// weights[t] = number of agents whose segment to their own center crosses gap
// t; 0 on gaps separating two clusters. For every gap vector g obtained by
// rescaling the instance's gaps, clustering cost equals dot(weights, g).
using WeightVector = std::vector<int>;

WeightVector gap_coefficients(const Instance& inst, const Partition& p);

double dot(const WeightVector& w, const GapVector& g);

// x_{j,l} - x_{i,r} for clusters i < j (adjacent or not).
double inter_cluster_distance(const Clustering& c, int i, int j);

}  // namespace stableloc
