#include "stableloc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stableloc/rng.hpp"

namespace stableloc {

namespace {

// Cluster member offsets in [0, diameter], endpoints pinned so the diameter
// is exact. The shape skews interior points toward one end.
std::vector<double> cluster_layout(int size, double diameter, IntraShape shape, Rng& rng) {
    std::vector<double> offsets;
    offsets.reserve(size);
    if (size == 1) {
        offsets.push_back(0.0);
        return offsets;
    }
    offsets.push_back(0.0);
    for (int i = 0; i < size - 2; ++i) {
        double u = rng.uniform(0.0, 1.0);
        if (shape == IntraShape::ClusteredLeft) u = u * u;
        if (shape == IntraShape::ClusteredRight) u = 1.0 - (1.0 - u) * (1.0 - u);
        offsets.push_back(u * diameter);
    }
    offsets.push_back(diameter);
    std::sort(offsets.begin(), offsets.end());
    return offsets;
}

std::vector<int> draw_sizes(int n, int k, int min_size, Rng& rng) {
    std::vector<int> sizes(k, min_size);
    int remaining = n - min_size * k;
    while (remaining > 0) {
        sizes[rng.uniform_int(0, k - 1)] += 1;
        --remaining;
    }
    return sizes;
}

}  // namespace

CertifiedInstance generate_stable_instance(const StableGenParams& params, std::uint64_t seed) {
    if (params.n < params.k + 1) throw std::invalid_argument("need n >= k+1");
    if (params.k < 1) throw std::invalid_argument("need k >= 1");
    if (!(params.margin > 1.0)) throw std::invalid_argument("margin must exceed 1");
    if (params.gamma_target < 1.0) throw std::invalid_argument("gamma target must be >= 1");
    if (params.diameter_range.first > params.diameter_range.second ||
        params.diameter_range.first < 0.0) {
        throw std::invalid_argument("bad diameter range");
    }
    const int min_size = params.allow_singletons ? 1 : 2;
    if (params.n < min_size * params.k) {
        throw std::invalid_argument("n too small for the requested minimum cluster size");
    }

    const Rng base(seed);
    double margin = params.margin;
    for (int attempt = 1; attempt <= 20; ++attempt) {
        Rng sizes_rng = base.split(3 * attempt);
        Rng diam_rng = base.split(3 * attempt + 1);
        Rng layout_rng = base.split(3 * attempt + 2);

        const auto sizes = draw_sizes(params.n, params.k, min_size, sizes_rng);
        std::vector<double> diameters(params.k, 0.0);
        for (int i = 0; i < params.k; ++i) {
            diameters[i] = sizes[i] == 1 ? 0.0
                                         : diam_rng.uniform(params.diameter_range.first,
                                                            params.diameter_range.second);
        }

        std::vector<double> locations;
        locations.reserve(params.n);
        double left = 0.0;
        for (int i = 0; i < params.k; ++i) {
            if (i > 0) {
                const double gap = margin * params.gamma_target *
                                   std::max({diameters[i - 1], diameters[i], 1.0});
                left += diameters[i - 1] + gap;
            }
            for (double off : cluster_layout(sizes[i], diameters[i], params.shape, layout_rng)) {
                locations.push_back(left + off);
            }
        }

        Instance inst = make_instance(std::move(locations), params.k);
        const auto report = is_gamma_stable(inst, params.gamma_target);
        if (report.is_stable) {
            // The certificate also pins the optimal partition to the
            // constructed sizes, so size constraints survive optimization.
            const auto opt = optimal_clustering(inst);
            if (opt.clustering.sizes == sizes) {
                StabilityCertificate cert{params.gamma_target, max_stability_factor(inst),
                                          margin, attempt, seed};
                return CertifiedInstance{std::move(inst), std::move(cert)};
            }
        }
        margin *= 2.0;
    }
    throw GenerationError("no certified instance after 20 margin doublings (n=" +
                          std::to_string(params.n) + ", k=" + std::to_string(params.k) +
                          ", gamma=" + std::to_string(params.gamma_target) + ")");
}

Instance generate_tight_instance(double gamma, int n, int k, std::uint64_t seed) {
    if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
    if (k < 1) throw std::invalid_argument("need k >= 1");
    if (n < 3 * k) throw std::invalid_argument("need n >= 3k for interior median placement");

    Rng rng(seed);
    std::vector<int> sizes(k, n / k);
    for (int i = 0; i < n % k; ++i) sizes[i] += 1;

    const double median_fraction = 0.5 + 0.5 / gamma;  // in (1/2, 1)
    const double gap_scale = (1.0 + 1e-3) * cluster_separation_threshold(gamma);

    std::vector<double> diameters(k);
    for (int i = 0; i < k; ++i) diameters[i] = rng.uniform(1.0, 2.0);

    std::vector<double> locations;
    locations.reserve(n);
    double left = 0.0;
    for (int i = 0; i < k; ++i) {
        if (i > 0) {
            left += diameters[i - 1] + gap_scale * std::max(diameters[i - 1], diameters[i]);
        }
        const int s = sizes[i];
        const int median_offset = (s - 1) / 2;
        const double median_pos = median_fraction * diameters[i];
        // Evenly fill [0, median] with the median_offset+1 left points and
        // (median, diameter] with the rest; endpoints and median exact.
        for (int j = 0; j <= median_offset; ++j) {
            locations.push_back(left + median_pos * j / median_offset);
        }
        const int right_count = s - median_offset - 1;
        for (int j = 1; j <= right_count; ++j) {
            locations.push_back(left + median_pos +
                                (diameters[i] - median_pos) * j / right_count);
        }
    }
    return make_instance(std::move(locations), k);
}

Instance generate_well_separated(double rho, double lambda, double big_b, double epsilon) {
    if (!(big_b > 6.0 * rho * lambda)) {
        throw std::invalid_argument("need B > 6*rho*lambda");
    }
    if (!(epsilon * rho < lambda)) {
        throw std::invalid_argument("need epsilon*rho < lambda");
    }
    const double right = 6.0 * big_b + lambda;
    return make_instance({0.0, lambda, right, right + epsilon}, 3);
}

Instance generate_singleton_exploit_instance(double gamma, double epsilon) {
    if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("need 0 < epsilon < 1");
    const double g6 = 6.0 * gamma;
    return make_instance(
        {0.0, 1.0 - epsilon, 1.0, g6, g6 + epsilon, g6 + 1.0, g6 + 1.0 + epsilon, g6 + 2.0}, 2);
}

std::pair<PerturbationFactors, Instance> sample_perturbation(const Instance& inst, double gamma,
                                                             std::uint64_t seed) {
    if (gamma < 1.0) throw std::invalid_argument("gamma must be at least 1");
    Rng rng(seed);
    PerturbationFactors pf;
    pf.gamma = gamma;
    pf.factors.resize(inst.n() - 1);
    for (auto& f : pf.factors) f = gamma == 1.0 ? 1.0 : rng.uniform(1.0 / gamma, 1.0);
    Instance perturbed = apply_perturbation(inst, pf);
    return {std::move(pf), std::move(perturbed)};
}

}  // namespace stableloc
