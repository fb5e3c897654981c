#include "stableloc/instance.hpp"

#include <algorithm>

namespace stableloc {

Instance make_instance(std::vector<double> locations, int k) {
    if (k < 1) {
        throw std::invalid_argument("facility count k must be at least 1");
    }
    if (static_cast<int>(locations.size()) < k + 1) {
        throw std::invalid_argument("need at least k+1 agent locations");
    }
    for (double x : locations) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("agent locations must be finite");
        }
    }
    std::sort(locations.begin(), locations.end());
    return Instance{std::move(locations), k};
}

GapVector gaps(const Instance& inst) {
    GapVector g;
    g.reserve(inst.locations.size() - 1);
    for (std::size_t t = 0; t + 1 < inst.locations.size(); ++t) {
        g.push_back(inst.locations[t + 1] - inst.locations[t]);
    }
    return g;
}

Instance instance_from_gaps(double anchor, const GapVector& g, int k) {
    std::vector<double> locations;
    locations.reserve(g.size() + 1);
    locations.push_back(anchor);
    for (double step : g) {
        if (step < 0.0) {
            throw std::invalid_argument("gap lengths must be non-negative");
        }
        locations.push_back(locations.back() + step);
    }
    return make_instance(std::move(locations), k);
}

double deviation_gain(ExtendedCost truthful, ExtendedCost deviated) {
    if (truthful.is_infinite() && deviated.is_infinite()) return 0.0;
    return truthful.v - deviated.v;
}

}  // namespace stableloc
