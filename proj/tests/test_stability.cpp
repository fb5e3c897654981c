#include <cmath>

#include "doctest.h"
#include "stableloc/generators.hpp"
#include "stableloc/rng.hpp"
#include "stableloc/stability.hpp"
#include "test_support.hpp"

using namespace stableloc;

namespace {

// Smallest gamma at which the oracle flips to unstable, located by bisection.
double bisect_stability_boundary(const Instance& inst, double lo, double hi, double tol) {
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (is_gamma_stable(inst, mid).is_stable) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("apply_perturbation rescales gaps anchored at the leftmost agent") {
    auto pairs = fixtures::two_tight_pairs();

    auto shrunk = apply_perturbation(pairs, {{0.5, 1, 0.5}, 2});
    CHECK(shrunk.locations == std::vector<double>{0, 0.5, 9.5, 10});

    auto identity = apply_perturbation(pairs, {{1, 1, 1}, 7});
    CHECK(identity.locations == pairs.locations);

    auto collapsed = apply_perturbation(pairs, {{1, 1.0 / 9, 1}, 9});
    CHECK(collapsed.locations[0] == 0);
    CHECK(collapsed.locations[1] == 1);
    CHECK(collapsed.locations[2] == doctest::Approx(2).epsilon(1e-12));
    CHECK(collapsed.locations[3] == doctest::Approx(3).epsilon(1e-12));

    CHECK_THROWS_AS(apply_perturbation(pairs, {{0.4, 1, 1}, 2}), std::invalid_argument);
    CHECK_THROWS_AS(apply_perturbation(pairs, {{1, 1.2, 1}, 2}), std::invalid_argument);
    CHECK_THROWS_AS(apply_perturbation(pairs, {{1, 1}, 2}), std::invalid_argument);
}

TEST_CASE("stability decision on the two-pair instance") {
    auto pairs = fixtures::two_tight_pairs();

    auto at5 = is_gamma_stable(pairs, 5);
    CHECK(at5.is_stable);
    CHECK(at5.unique_at_identity);
    CHECK(!at5.witness.has_value());

    // Worst-case margin at gamma = 5, by the linearization directly: the
    // (1,3) rival keeps the left gap (coefficient -1) and shrinks the middle
    // gap (coefficient +1), leaving -1 + 9/5 = 0.8.
    auto g = gaps(pairs);
    auto w_opt = gap_coefficients(pairs, {2, 2});
    auto w_rival = gap_coefficients(pairs, {1, 3});
    double margin = 0;
    for (std::size_t t = 0; t < g.size(); ++t) {
        double c = w_rival[t] - w_opt[t];
        margin += c > 0 ? c * g[t] / 5 : c * g[t];
    }
    CHECK(margin == doctest::Approx(0.8).epsilon(1e-12));

    auto at9 = is_gamma_stable(pairs, 9);
    CHECK(!at9.is_stable);
    CHECK(at9.unique_at_identity);
    REQUIRE(at9.witness.has_value());
    CHECK(at9.witness->rival == Partition{1, 3});
    CHECK(at9.witness->margin == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("non-unique optimum is never stable") {
    auto report = is_gamma_stable(fixtures::four_evenly_spaced(), 1);
    CHECK(!report.is_stable);
    CHECK(!report.unique_at_identity);
}

TEST_CASE("witness perturbation lets the rival catch the optimum") {
    Rng rng(99);
    int checked = 0;
    for (int attempt = 0; attempt < 5000 && checked < 25; ++attempt) {
        int k = rng.uniform_int(2, 4);
        int n = rng.uniform_int(k + 1, 10);
        std::vector<double> xs(n);
        for (auto& x : xs) x = rng.uniform_int(0, 60);
        auto inst = make_instance(std::move(xs), k);
        double gamma = rng.uniform(1.2, 8.0);
        auto report = is_gamma_stable(inst, gamma);
        if (report.is_stable || !report.unique_at_identity) continue;
        ++checked;
        REQUIRE(report.witness.has_value());
        auto perturbed = apply_perturbation(inst, report.witness->factors);
        double opt_sizes_cost =
            clustering_cost(perturbed, optimal_clustering(inst).clustering.sizes);
        double rival_cost = clustering_cost(perturbed, report.witness->rival);
        CHECK(rival_cost <= opt_sizes_cost + 1e-9);
    }
    CHECK(checked == 25);
}

TEST_CASE("stability is monotone in gamma") {
    Rng rng(123);
    for (int trial = 0; trial < 40; ++trial) {
        int k = rng.uniform_int(1, 3);
        int n = rng.uniform_int(k + 1, 9);
        std::vector<double> xs(n);
        for (auto& x : xs) x = rng.uniform_int(0, 40);
        auto inst = make_instance(std::move(xs), k);
        double hi = rng.uniform(1.5, 9.0);
        double lo = rng.uniform(1.0, hi);
        if (is_gamma_stable(inst, hi).is_stable) {
            CHECK(is_gamma_stable(inst, lo).is_stable);
        }
    }
}

TEST_CASE("composing perturbations multiplies their budgets") {
    auto pairs = fixtures::two_tight_pairs();
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        double alpha = rng.uniform(1.0, 3.0);
        double beta = rng.uniform(1.0, 3.0);
        PerturbationFactors first{{}, alpha};
        PerturbationFactors second{{}, beta};
        PerturbationFactors combined{{}, alpha * beta};
        for (int t = 0; t < pairs.n() - 1; ++t) {
            first.factors.push_back(rng.uniform(1 / alpha, 1));
            second.factors.push_back(rng.uniform(1 / beta, 1));
            combined.factors.push_back(first.factors[t] * second.factors[t]);
            CHECK(combined.factors[t] >= 1 / (alpha * beta) - 1e-12);
            CHECK(combined.factors[t] <= 1.0 + 1e-12);
        }
        auto chained = apply_perturbation(apply_perturbation(pairs, first), second);
        auto direct = apply_perturbation(pairs, combined);
        for (int i = 0; i < pairs.n(); ++i) {
            CHECK(chained.locations[i] == doctest::Approx(direct.locations[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("maximum stability factor in closed form") {
    auto factor = max_stability_factor(fixtures::two_tight_pairs());
    REQUIRE(factor.finite());
    CHECK(factor.value == 9.0);
    REQUIRE(factor.binding_rival.has_value());

    CHECK(max_stability_factor(fixtures::four_evenly_spaced()).kind ==
          StabilityFactor::Kind::NotStable);
    CHECK(max_stability_factor(fixtures::three_evenly_spaced()).kind ==
          StabilityFactor::Kind::Unbounded);
}

TEST_CASE("closed-form factor agrees with bisection of the decision oracle") {
    auto pairs = fixtures::two_tight_pairs();
    double boundary = bisect_stability_boundary(pairs, 1.0, 32.0, 1e-4);
    CHECK(boundary == doctest::Approx(9.0).epsilon(1e-3));
    // The supremum itself is not attained.
    CHECK(!is_gamma_stable(pairs, 9.0).is_stable);
    CHECK(is_gamma_stable(pairs, 9.0 - 1e-6).is_stable);
}

TEST_CASE("closed-form factor matches bisection on random stable instances") {
    Rng rng(314);
    int checked = 0;
    for (int attempt = 0; attempt < 5000 && checked < 10; ++attempt) {
        int k = rng.uniform_int(2, 3);
        int n = rng.uniform_int(k + 1, 8);
        std::vector<double> xs(n);
        for (auto& x : xs) x = rng.uniform_int(0, 50);
        auto inst = make_instance(std::move(xs), k);
        auto factor = max_stability_factor(inst);
        if (!factor.finite() || factor.value < 1.05 || factor.value > 30) continue;
        ++checked;
        double boundary = bisect_stability_boundary(inst, 1.0, factor.value * 2 + 1, 1e-6);
        CHECK(boundary == doctest::Approx(factor.value).epsilon(1e-4));
    }
    CHECK(checked == 10);
}

TEST_CASE("center proximity check") {
    auto pairs = fixtures::two_tight_pairs();
    auto oc = optimal_clustering(pairs);
    CHECK(check_center_proximity(pairs, oc.clustering, 5));
    CHECK(!check_center_proximity(pairs, oc.clustering, 9));  // 9 > 9*1 fails strictly

    auto single = fixtures::three_evenly_spaced();
    CHECK(check_center_proximity(single, optimal_clustering(single).clustering, 100));
}

TEST_CASE("point separation check") {
    auto pairs = fixtures::two_tight_pairs();
    auto oc = optimal_clustering(pairs);
    CHECK(check_point_separation(pairs, oc.clustering, 5));    // 9 > 4*1
    CHECK(!check_point_separation(pairs, oc.clustering, 10));  // 9 > 9*1 fails
    CHECK_THROWS_AS(check_point_separation(pairs, oc.clustering, 1.5), std::invalid_argument);

    // Every agent sits on its center: the condition holds vacuously.
    auto stacked = make_instance({0, 0, 10, 10}, 2);
    auto soc = optimal_clustering(stacked);
    CHECK(check_point_separation(stacked, soc.clustering, 50));
}

TEST_CASE("cluster separation check and threshold") {
    CHECK(cluster_separation_threshold(5) == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(cluster_separation_threshold(2 + std::sqrt(3.0)) == doctest::Approx(1.0).epsilon(1e-12));

    auto pairs = fixtures::two_tight_pairs();
    auto oc = optimal_clustering(pairs);
    CHECK(check_cluster_separation(oc.clustering, 5));               // 9 > 1.6
    CHECK(check_cluster_separation(oc.clustering, 2 + std::sqrt(3.0)));

    // Diameters (2, 0) with gap 1 fail at gamma = 5: 1 < 3.2.
    auto tight = build_clustering(make_instance({0, 2, 3}, 2), {2, 1});
    CHECK(!check_cluster_separation(tight, 5));
}

TEST_CASE("enumeration limit surfaces as the dedicated error") {
    // Eleven tight pairs, far apart: the all-pairs partition wins by a wide
    // margin (any other composition spans an inter-pair gap), so the optimum
    // is unique and both entry points reach the rival enumeration, whose
    // choose(21, 10) = 352716 compositions exceed the tiny limit.
    std::vector<double> xs;
    for (int j = 0; j < 11; ++j) {
        xs.push_back(100.0 * j);
        xs.push_back(100.0 * j + 1 + 0.01 * j);
    }
    auto inst = make_instance(std::move(xs), 11);
    REQUIRE(optimal_clustering(inst).unique);
    CHECK_THROWS_AS(is_gamma_stable(inst, 2, kDefaultEps, 1000), EnumerationLimitError);
    CHECK_THROWS_AS(max_stability_factor(inst, kDefaultEps, 1000), EnumerationLimitError);
}
