// Core problem representation: agents on the real line plus a facility count,
// the consecutive-gap view used by the perturbation machinery, and the
// extended cost value that models a refused allocation.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace stableloc {

// Absolute tolerance for order/cost comparisons. Inputs in tests use integer
// or short-decimal coordinates, so no intended comparison lands within eps of
// a tie.
inline constexpr double kDefaultEps = 1e-9;

// Cap on exhaustive partition enumeration, counted in partitions.
inline constexpr std::size_t kDefaultEnumerationLimit = 1'000'000;

// Thrown when an exhaustive enumeration would exceed its configured limit.
class EnumerationLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// n >= k+1 agent locations, sorted non-decreasing. Duplicates are permitted;
// ties among equal locations are broken by index.
struct Instance {
    std::vector<double> locations;
    int k = 1;

    int n() const { return static_cast<int>(locations.size()); }
    double span() const { return locations.empty() ? 0.0 : locations.back() - locations.front(); }
};

// Validates and canonicalizes: sorts the locations, rejects non-finite
// coordinates, k < 1, and n < k+1. Input order is irrelevant.
Instance make_instance(std::vector<double> locations, int k);

// Consecutive gaps, gaps[t] = locations[t+1] - locations[t]; length n-1.
using GapVector = std::vector<double>;

GapVector gaps(const Instance& inst);

// Rebuilds an instance from its leftmost coordinate and gap lengths.
Instance instance_from_gaps(double anchor, const GapVector& g, int k);

// Non-negative cost that may be the distinguished infinite value used for
// refused allocations. Infinite compares strictly greater than every finite
// cost (IEEE semantics).
struct ExtendedCost {
    double v = 0.0;

    static ExtendedCost finite(double value) { return {value}; }
    static ExtendedCost infinite() { return {std::numeric_limits<double>::infinity()}; }
    bool is_infinite() const { return std::isinf(v); }

    friend bool operator==(ExtendedCost a, ExtendedCost b) { return a.v == b.v; }
    friend bool operator<(ExtendedCost a, ExtendedCost b) { return a.v < b.v; }
    friend bool operator<=(ExtendedCost a, ExtendedCost b) { return a.v <= b.v; }
    friend bool operator>(ExtendedCost a, ExtendedCost b) { return a.v > b.v; }
};

// truthful - deviated, with infinities collapsing to 0 when both sides are
// infinite. A positive result means the deviation lowered the agent's cost.
double deviation_gain(ExtendedCost truthful, ExtendedCost deviated);

}  // namespace stableloc
