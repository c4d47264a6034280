#include "doctest.h"

#include "helpers.hpp"
#include "permlattice/graphkit.hpp"
#include "permlattice/oracle.hpp"

using namespace permlattice;
using namespace permlattice::testhelpers;

TEST_CASE("brute toral permutations") {
    auto Z = RestrictingSet::from_vec2({{0, 0}});
    CHECK(brute_toral_permutations(Z, BoxShape::of2(3, 2)).count == 1);
    auto E = RestrictingSet::from_vec2({{1, 0}});
    CHECK(brute_toral_permutations(E, BoxShape::of2(3, 3)).count == 1);
    CHECK(brute_toral_permutations(RestrictingSet::AL(), BoxShape::of2(2, 2)).count == 9);
    CHECK(brute_toral_permutations(RestrictingSet::AL(), BoxShape::of2(3, 3)).count == 42);
    CHECK(brute_toral_permutations(RestrictingSet::Aplus(), BoxShape::of2(2, 2)).count == 64);
}

TEST_CASE("budget refusal") {
    Budget tiny;
    tiny.search_nodes = 10;
    CHECK_THROWS_AS(brute_toral_permutations(RestrictingSet::AL(), BoxShape::of2(3, 3), tiny),
                    Error);
    try {
        brute_toral_permutations(RestrictingSet::AL(), BoxShape::of2(3, 3), tiny);
    } catch (const Error& e) {
        CHECK(e.kind() == Err::Capacity);
    }
}

TEST_CASE("brute matchings") {
    auto c4 = square_grid(BoxShape::of2(2, 2));
    CHECK(brute_matchings(c4) == 2);
    auto p3 = square_grid(BoxShape::of2(1, 3));
    CHECK(brute_matchings(p3) == 0);  // odd vertex count
    CHECK(brute_matchings(honeycomb_torus(1)) == 3);
    CHECK(brute_matchings(honeycomb_torus(2)) == 9);
    CHECK(brute_matchings(square_torus(2)) == 8);
    CHECK(brute_matchings(square_grid(BoxShape::of2(4, 4))) == 36);
    auto ms = enumerate_matchings(c4);
    CHECK(ms.size() == 2);
}

TEST_CASE("brute covers") {
    auto c4 = square_grid(BoxShape::of2(2, 2));
    CHECK(brute_covers(c4, {}) == 1);  // empty cover only
    CHECK(brute_covers(c4, {0}) == 2);
    CHECK(brute_covers(c4, {0, 1, 2, 3}) == 2);  // covers of everything = matchings
}

TEST_CASE("brute patterns: decidable criteria") {
    auto AL = RestrictingSet::AL();
    CHECK(brute_patterns(AL, BoxShape::of2(1, 1)).count == 3);
    CHECK(brute_patterns(AL, BoxShape::of2(2, 2)).count == 28);
    CHECK(brute_patterns(AL, BoxShape::of2(3, 3)).count == 459);
    CHECK(brute_patterns(AL, BoxShape::of2(2, 3)).count == 98);
    auto AO = RestrictingSet::Aoplus();
    CHECK(brute_patterns(AO, BoxShape::of2(1, 1)).count == 5);
    CHECK(brute_patterns(AO, BoxShape::of2(2, 2)).count == 377);
    auto AP = RestrictingSet::Aplus();
    auto r11 = brute_patterns(AP, BoxShape::of2(1, 1));
    CHECK(r11.count == 4);
    CHECK(r11.exact);
    CHECK(brute_patterns(AP, BoxShape::of2(2, 2)).count == 196);
    CHECK(brute_patterns(AP, BoxShape::of2(3, 3)).count == 58688);
}

TEST_CASE("brute patterns: sandwich for unsupported sets") {
    auto A = RestrictingSet::from_vec2({{0, 0}, {1, 0}, {1, 1}});
    auto r = brute_patterns(A, BoxShape::of2(2, 2));
    CHECK(r.lower <= r.upper);
    if (r.exact) CHECK(r.lower == r.upper);
    CHECK(r.count >= r.lower);
    CHECK(r.count <= r.upper);
}

TEST_CASE("injective and surjective pattern models") {
    auto Z = RestrictingSet::from_vec2({{0, 0}});
    auto rz = brute_injective_patterns(Z, BoxShape::of2(3, 2));
    CHECK(rz.count == 1);
    CHECK(rz.exact);

    auto AL = RestrictingSet::AL();
    auto ri = brute_injective_patterns(AL, BoxShape::of2(2, 2));
    auto rs = brute_surjective_patterns(AL, BoxShape::of2(2, 2));
    auto rp = brute_patterns(AL, BoxShape::of2(2, 2));
    // B(Omega) is contained in both locally-valid candidate sets
    CHECK(rp.count <= ri.upper);
    CHECK(rp.count <= rs.upper);
    // per-site log of the injective count dominates the permutation count
    CHECK(ri.upper >= rp.count);
}
