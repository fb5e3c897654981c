#include <cmath>
#include <limits>

#include "doctest.h"
#include "stableloc/instance.hpp"
#include "test_support.hpp"

using namespace stableloc;

TEST_CASE("make_instance canonicalizes and validates") {
    auto inst = make_instance({11, 0, 10, 1}, 2);
    CHECK(inst.locations == std::vector<double>{0, 1, 10, 11});
    CHECK(inst.n() == 4);
    CHECK(inst.span() == 11);

    CHECK_NOTHROW(make_instance({0, 0, 0, 5}, 2));  // duplicates are fine
    CHECK_THROWS_AS(make_instance({0, 1, 2}, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_instance({0, 1}, 2), std::invalid_argument);  // needs n >= k+1
    CHECK_THROWS_AS(make_instance({0, std::nan("")}, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_instance({0, std::numeric_limits<double>::infinity()}, 1),
                    std::invalid_argument);
}

TEST_CASE("gaps round-trip through instance_from_gaps") {
    auto inst = fixtures::two_tight_pairs();
    auto g = gaps(inst);
    CHECK(g == GapVector{1, 9, 1});

    auto rebuilt = instance_from_gaps(inst.locations.front(), g, inst.k);
    CHECK(rebuilt.locations == inst.locations);
    CHECK(rebuilt.k == inst.k);

    auto shifted = instance_from_gaps(-3.5, {2, 0, 1}, 1);
    CHECK(shifted.locations == std::vector<double>{-3.5, -1.5, -1.5, -0.5});
}

TEST_CASE("extended cost models refusal as larger than everything finite") {
    auto fin = ExtendedCost::finite(4.0);
    auto inf = ExtendedCost::infinite();
    CHECK(fin < inf);
    CHECK(inf > fin);
    CHECK(!inf.is_infinite() == false);
    CHECK(inf == ExtendedCost::infinite());

    CHECK(deviation_gain(ExtendedCost::finite(3), ExtendedCost::finite(1)) == 2);
    // Lying into a refusal can never help.
    CHECK(deviation_gain(fin, inf) < 0);
    // Refused either way: indifferent, not profitable.
    CHECK(deviation_gain(inf, inf) == 0);
    CHECK(deviation_gain(inf, fin) == std::numeric_limits<double>::infinity());
}
