#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "stableloc/audit.hpp"
#include "stableloc/generators.hpp"
#include "test_support.hpp"

using namespace stableloc;

TEST_CASE("truthful costs per rule") {
    auto pairs = fixtures::two_tight_pairs();
    CHECK(truthful_cost(MechanismRule::Optimal, pairs, 1).v == 1);
    CHECK(truthful_cost(MechanismRule::AlmostRightmost, pairs, 1).v == 1);
    CHECK(truthful_cost(MechanismRule::Random, pairs, 1).v == doctest::Approx(0.5));

    // Touching clusters make every deterministic rule refuse.
    auto touching = make_instance({0, 1, 2, 3.5, 4.5, 5.5}, 2);
    CHECK(truthful_cost(MechanismRule::Optimal, touching, 0).is_infinite());
    CHECK(truthful_cost(MechanismRule::AlmostRightmost, touching, 3).is_infinite());
}

TEST_CASE("the exploit deviation is profitable only without the guard") {
    auto exploit = fixtures::exploit_instance();
    const int agent = 3;  // the agent at 30

    auto finding = evaluate_deviation(MechanismRule::UnguardedOptimal, exploit, agent, 900);
    CHECK(finding.truthful_cost.v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(finding.deviated_cost.v == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(finding.gain == doctest::Approx(0.99).epsilon(1e-9));
    CHECK(finding.classification == DeviationClass::FormedSingleton);

    auto guarded = evaluate_deviation(MechanismRule::Optimal, exploit, agent, 900);
    CHECK(guarded.deviated_cost.is_infinite());
    CHECK(guarded.gain < 0);
    CHECK(guarded.classification == DeviationClass::TriggeredRefusal);

    // The full scan catches it too.
    auto hit = find_profitable_deviation(MechanismRule::UnguardedOptimal, exploit, agent);
    REQUIRE(hit.has_value());
    CHECK(hit->gain >= 0.99 - 1e-9);
}

TEST_CASE("no profitable deviation against the guarded rules on a stable instance") {
    auto pairs = fixtures::two_tight_pairs();
    for (auto rule :
         {MechanismRule::Optimal, MechanismRule::AlmostRightmost, MechanismRule::Random}) {
        for (int agent = 0; agent < pairs.n(); ++agent) {
            auto hit = find_profitable_deviation(rule, pairs, agent);
            CHECK(!hit.has_value());
        }
    }
}

TEST_CASE("candidate reports are deterministic, sorted and cover breakpoints") {
    auto pairs = fixtures::two_tight_pairs();
    CandidatePolicy policy;
    auto reports = candidate_reports(pairs, policy);
    CHECK(reports == candidate_reports(pairs, policy));
    CHECK(std::is_sorted(reports.begin(), reports.end()));
    CHECK(std::adjacent_find(reports.begin(), reports.end()) == reports.end());

    auto contains = [&](double x) {
        return std::find_if(reports.begin(), reports.end(), [&](double r) {
                   return std::abs(r - x) < 1e-12;
               }) != reports.end();
    };
    CHECK(contains(0));     // agent locations
    CHECK(contains(11));
    CHECK(contains(5.5));   // midpoint of the central pair
    CHECK(contains(0 - 30 * pairs.span()));  // far reports
    CHECK(contains(11 + 30 * pairs.span()));

    CandidatePolicy bare;
    bare.include_structural = false;
    CHECK(candidate_reports(pairs, bare).size() < reports.size());
}

TEST_CASE("audit aggregates findings across instances and sorts them") {
    std::vector<Instance> suite{fixtures::two_tight_pairs(), fixtures::exploit_instance()};
    auto report = audit_strategyproofness(MechanismRule::UnguardedOptimal, suite);
    CHECK(report.instances_checked == 2);
    CHECK(report.deviations_tested > 0);
    REQUIRE(!report.findings.empty());
    for (const auto& f : report.findings) {
        CHECK(f.gain > kDefaultEps);
        CHECK(f.instance_index == 1);  // only the exploit instance is vulnerable
    }
    CHECK(std::is_sorted(report.findings.begin(), report.findings.end(),
                         [](const DeviationFinding& a, const DeviationFinding& b) {
                             return std::tie(a.instance_index, a.agent_index, a.report) <
                                    std::tie(b.instance_index, b.agent_index, b.report);
                         }));

    auto clean = audit_strategyproofness(MechanismRule::Optimal, suite);
    CHECK(clean.findings.empty());
    CHECK(clean.worst_ratio.has_value());
    CHECK(*clean.worst_ratio == doctest::Approx(1.0));
}

TEST_CASE("approximation ratios on the two-pair instance") {
    auto pairs = fixtures::two_tight_pairs();
    CHECK(*approximation_ratio(MechanismRule::Optimal, pairs) == doctest::Approx(1.0));
    CHECK(*approximation_ratio(MechanismRule::AlmostRightmost, pairs) == doctest::Approx(1.0));
    CHECK(*approximation_ratio(MechanismRule::Random, pairs) == doctest::Approx(1.0));

    // Refusal has no ratio.
    auto touching = make_instance({0, 1, 2, 3.5, 4.5, 5.5}, 2);
    CHECK(!approximation_ratio(MechanismRule::Optimal, touching).has_value());
}

TEST_CASE("singleton lemma checker validates its preconditions") {
    std::vector<Instance> suite{fixtures::two_tight_pairs()};
    CHECK_THROWS_AS(test_singleton_lemmas(suite, 4), std::invalid_argument);

    // two_tight_pairs is 9-minus stable, so it passes both classes.
    CHECK(test_singleton_lemmas(suite, 3).findings.empty());
    CHECK(test_singleton_lemmas(suite, 5).findings.empty());

    // An instance that is not even 3-stable is rejected outright.
    std::vector<Instance> weak{fixtures::four_evenly_spaced()};
    CHECK_THROWS_AS(test_singleton_lemmas(weak, 3), std::invalid_argument);
}

TEST_CASE("singleton lemma bounds hold on generated stable suites") {
    std::vector<Instance> stable3;
    std::vector<Instance> stable5;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        StableGenParams p3;
        p3.n = 7 + static_cast<int>(seed % 3);
        p3.k = 2 + static_cast<int>(seed % 2);
        p3.gamma_target = 3;
        stable3.push_back(generate_stable_instance(p3, seed).instance);
        StableGenParams p5 = p3;
        p5.gamma_target = 5;
        stable5.push_back(generate_stable_instance(p5, seed).instance);
    }
    auto r3 = test_singleton_lemmas(stable3, 3);
    CHECK(r3.findings.empty());
    CHECK(r3.deviations_tested > 0);
    CHECK(test_singleton_lemmas(stable5, 5).findings.empty());
}

TEST_CASE("lower-bound probe flags the unguarded rule and notes degeneracy") {
    CHECK_THROWS_AS(lower_bound_probe(MechanismRule::Optimal, 10, 100, 100, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(lower_bound_probe(MechanismRule::Optimal, 10, 100, 1e4, 99),
                    std::invalid_argument);

    auto unguarded = lower_bound_probe(MechanismRule::UnguardedOptimal, 10, 100, 1e4, 0.1);
    REQUIRE(!unguarded.findings.empty());
    bool served_profit = false;
    for (const auto& f : unguarded.findings) {
        if (f.classification == DeviationClass::Served && f.gain > kDefaultEps) {
            served_profit = true;
        }
    }
    CHECK(served_profit);

    // The guarded optimal rule refuses the entire family (every optimal
    // clustering of these four points has singleton clusters), which the
    // probe reports as a degenerate mechanism instead of a clean pass.
    auto guarded = lower_bound_probe(MechanismRule::Optimal, 10, 100, 1e4, 0.1);
    CHECK(guarded.findings.empty());
    bool degenerate_note = false;
    for (const auto& note : guarded.notes) {
        if (note.find("refus") != std::string::npos) degenerate_note = true;
    }
    CHECK(degenerate_note);
}
