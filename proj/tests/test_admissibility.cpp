#include "doctest.h"

#include <set>

#include "helpers.hpp"
#include "permlattice/admissibility.hpp"
#include "permlattice/oracle.hpp"

using namespace permlattice;
using namespace permlattice::testhelpers;

namespace {

// Locally admissible but not globally: all cells move east except (0,1) which
// moves north; the hole at (2,1) is the sole preimage candidate for both (1,1)
// and (3,1).
Pattern locad_pattern() {
    auto AP = RestrictingSet::Aplus();
    std::map<Coords, Coords> m;
    for (std::int64_t y = 0; y < 3; ++y)
        for (std::int64_t x = 0; x < 5; ++x) {
            if (x == 2 && y == 1) continue;
            m[{x, y}] = Coords{1, 0};
        }
    m[{0, 1}] = Coords{0, 1};
    return Pattern::from_map(AP, m);
}

}  // namespace

TEST_CASE("boundary and interior") {
    auto AO = RestrictingSet::Aoplus();
    BoxShape box = BoxShape::of2(4, 3);
    auto cells = box.points();
    auto inner = interior(cells, AO);
    std::set<Coords> got(inner.begin(), inner.end());
    std::set<Coords> expect;
    for (std::int64_t y = 1; y < 2; ++y)
        for (std::int64_t x = 1; x < 3; ++x) expect.insert({x, y});
    CHECK(got == expect);

    std::vector<Coords> single{{5, 5}};
    CHECK(interior(single, AO).empty());

    auto Z = RestrictingSet::from_vec2({{0, 0}});
    CHECK(interior(cells, Z).size() == cells.size());
    CHECK(boundary(cells, Z).empty());
}

TEST_CASE("necessary condition diagnostics") {
    auto AO = RestrictingSet::Aoplus();
    CHECK(necessary_condition(constant_pattern(AO, 3, 3, {0, 0})).ok);

    // two cells collide on (1,0)
    auto collide = box_pattern(AO, 2, 1, {{1, 0}, {0, 0}});
    auto nc = necessary_condition(collide);
    CHECK_FALSE(nc.ok);
    REQUIRE(nc.colliding_cells.has_value());

    // interior cell (1,1) uncovered: its three possible feeders all point away
    auto AL = RestrictingSet::AL();
    auto starve = box_pattern(AL, 2, 2, {{0, 0}, {1, 0}, {0, 1}, {1, 0}});
    auto nc2 = necessary_condition(starve);
    CHECK_FALSE(nc2.ok);
    CHECK(nc2.uncovered_interior_cell.has_value());

    CHECK(necessary_condition(locad_pattern()).ok);
}

TEST_CASE("forbidden set presets") {
    auto F = preset_F_Aplus();
    CHECK(F.patterns.size() == 148);  // 256 - 4*27 single-preimage fields
    auto Fp = preset_Fprime_Aplus();
    CHECK(Fp.patterns.size() == 148 + 10);  // plus C(5,2) collision pairs over A_oplus
}

TEST_CASE("local admissibility distinguishes F from F'") {
    auto AO = RestrictingSet::Aoplus();
    auto pat = box_pattern(AO, 2, 1, {{1, 0}, {0, 0}});  // f collides at (1,0)
    CHECK(local_admissibility(pat, preset_F_Aplus()));        // vacuous: -A_+ never fits
    CHECK_FALSE(local_admissibility(pat, preset_Fprime_Aplus()));  // collision caught
    ForbiddenSet empty;
    empty.alphabet = AO;
    CHECK(local_admissibility(pat, empty));
}

TEST_CASE("local admissibility w.r.t. F' implies injectivity on small sweeps") {
    auto AP = RestrictingSet::Aplus();
    auto Fp = preset_Fprime_Aplus();
    const Vec2 opts[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    auto pat = box_pattern(AP, 2, 2, {opts[a], opts[b], opts[c], opts[d]});
                    if (local_admissibility(pat, Fp))
                        CHECK_FALSE(necessary_condition(pat).colliding_cells.has_value());
                }
}

TEST_CASE("extend_rectangular on the identity") {
    auto AO = RestrictingSet::Aoplus();
    auto cert = extend_rectangular(constant_pattern(AO, 2, 2, {0, 0}));
    for (int v : cert.torus.pattern.values)
        CHECK(v == cert.torus.pattern.set.index_of({0, 0}));
}

TEST_CASE("extend_rectangular routes rays for A_oplus") {
    auto AO = RestrictingSet::Aoplus();
    // east exit at (1,0), hole at (0,0)
    auto pat = box_pattern(AO, 2, 1, {{1, 0}, {1, 0}});
    REQUIRE(necessary_condition(pat).ok);
    auto cert = extend_rectangular(pat);
    for (const auto& c : pat.domain) CHECK(cert.torus.pattern.value_at(c) == pat.value_at(c));
}

TEST_CASE("extension succeeds exactly on the criterion set (A_L 2x2)") {
    auto AL = RestrictingSet::AL();
    const Vec2 opts[3] = {{0, 0}, {1, 0}, {0, 1}};
    int success = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    auto pat = box_pattern(AL, 2, 2, {opts[a], opts[b], opts[c], opts[d]});
                    bool nec = necessary_condition(pat).ok;
                    bool extended = false;
                    try {
                        auto cert = extend_rectangular(pat);
                        extended = true;
                        for (const auto& cc : pat.domain)
                            CHECK(cert.torus.pattern.value_at(cc) == pat.value_at(cc));
                    } catch (const Error& e) {
                        CHECK(e.kind() == Err::NotAdmissible);
                    }
                    CHECK(nec == extended);
                    if (extended) ++success;
                }
    CHECK(success == 28);
}

TEST_CASE("obstruction search reproduces the starved-preimage example") {
    auto pat = locad_pattern();
    auto out = obstruction_search(pat, 2);
    REQUIRE(out.verdict == ObstructionVerdict::No);
    REQUIRE(out.obstruction.has_value());
    std::set<Coords> demands(out.obstruction->demand_cells.begin(),
                             out.obstruction->demand_cells.end());
    std::set<Coords> cands(out.obstruction->candidates.begin(),
                           out.obstruction->candidates.end());
    CHECK(demands == std::set<Coords>{{1, 1}, {3, 1}});
    CHECK(cands == std::set<Coords>{{2, 1}});
    CHECK(cands.size() < demands.size());
}

TEST_CASE("obstruction search is sound on certified patterns") {
    auto AL = RestrictingSet::AL();
    const Vec2 opts[3] = {{0, 0}, {1, 0}, {0, 1}};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    auto pat = box_pattern(AL, 2, 2, {opts[a], opts[b], opts[c], opts[d]});
                    if (!necessary_condition(pat).ok) continue;
                    auto out = obstruction_search(pat, 2);
                    CHECK(out.verdict == ObstructionVerdict::Unknown);
                }
}

TEST_CASE("radius zero with no starved demand is unknown") {
    auto AO = RestrictingSet::Aoplus();
    auto out = obstruction_search(constant_pattern(AO, 2, 2, {0, 0}), 0);
    CHECK(out.verdict == ObstructionVerdict::Unknown);
}

TEST_CASE("evaluate_admissibility wiring") {
    auto AL = RestrictingSet::AL();
    auto good = evaluate_admissibility(constant_pattern(AL, 2, 2, {0, 0}));
    CHECK(good.necessary_ok);
    CHECK(good.global == GlobalVerdict::Yes);
    CHECK(good.certificate.has_value());

    auto bad = evaluate_admissibility(locad_pattern());
    CHECK(bad.necessary_ok);
    CHECK(bad.global == GlobalVerdict::No);
    REQUIRE(bad.obstruction.has_value());

    auto collide = evaluate_admissibility(
        box_pattern(RestrictingSet::Aoplus(), 2, 1, {{1, 0}, {0, 0}}));
    CHECK_FALSE(collide.necessary_ok);
    CHECK(collide.global == GlobalVerdict::No);
}

TEST_CASE("A_+ survivors at (2,2) sandwich the pattern count exactly") {
    auto AP = RestrictingSet::Aplus();
    const Vec2 opts[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    int survivors = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    auto pat = box_pattern(AP, 2, 2, {opts[a], opts[b], opts[c], opts[d]});
                    if (!necessary_condition(pat).ok) continue;
                    if (obstruction_search(pat, 2).verdict != ObstructionVerdict::No)
                        ++survivors;
                }
    CHECK(survivors == 196);  // equals |B_{(2,2)}(A_+)|
    CHECK(brute_patterns(AP, BoxShape::of2(2, 2)).count == 196);
}
