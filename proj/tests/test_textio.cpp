#include "doctest.h"

#include "helpers.hpp"
#include "permlattice/correspond.hpp"
#include "permlattice/textio.hpp"

using namespace permlattice;
using namespace permlattice::testhelpers;

TEST_CASE("pattern text round trip with a hole") {
    auto AP = RestrictingSet::Aplus();
    std::map<Coords, Coords> m;
    for (std::int64_t y = 0; y < 2; ++y)
        for (std::int64_t x = 0; x < 3; ++x) {
            if (x == 1 && y == 1) continue;
            m[{x, y}] = Coords{1, 0};
        }
    auto pat = Pattern::from_map(AP, m);
    std::string text = pattern_to_text(pat);
    CHECK(text.find("U=box(3,2) minus (1,1)") != std::string::npos);
    CHECK(text.find("_") != std::string::npos);
    auto back = pattern_from_text(text);
    CHECK(back.domain == pat.domain);
    CHECK(back.values == pat.values);
    CHECK(back.set == pat.set);
    // emission is canonical: a second round trip is byte-identical
    CHECK(pattern_to_text(back) == text);
}

TEST_CASE("pattern text accepts preset tokens") {
    std::string text = "d=2 A=AL U=box(2,1)\n(0,0) (1,0)\n";
    auto pat = pattern_from_text(text);
    CHECK(pat.set == RestrictingSet::AL());
    CHECK(pat.size() == 2);
    std::string plus = "d=2 A=Aplus U=box(1,1)\n(0,1)\n";
    CHECK(pattern_from_text(plus).set == RestrictingSet::Aplus());
}

TEST_CASE("pattern text rejects malformed input") {
    CHECK_THROWS_AS(pattern_from_text(""), Error);
    CHECK_THROWS_AS(pattern_from_text("d=3 A=AL U=box(1,1)\n(0,0)\n"), Error);
    CHECK_THROWS_AS(pattern_from_text("d=2 A=AL U=box(2,1)\n(0,0)\n"), Error);  // short row
    CHECK_THROWS_AS(pattern_from_text("d=2 A=AL U=box(1,1)\n_\n"), Error);  // undeclared hole
    CHECK_THROWS_AS(pattern_from_text("d=2 A=AL U=box(1,1)\n(5,5)\n"), Error);  // not in A
}

TEST_CASE("graph text round trip") {
    auto g = square_grid(BoxShape::of2(2, 3));
    std::string text = graph_to_text(g);
    auto back = graph_from_text(text);
    CHECK(back.canonical_signature() == g.canonical_signature());
    CHECK(text.find("v 0 (0,0)") != std::string::npos);
}

TEST_CASE("matching and cover serialization headers") {
    auto host = io_double_cover(torus_quotient(RestrictingSet::AL(), BoxShape::of2(2, 2)));
    auto id = ToralPermutation::checked(
        BoxShape::of2(2, 2), constant_pattern(RestrictingSet::AL(), 2, 2, {0, 0}));
    auto m = psi(host, id);
    std::string mt = matching_to_text(m);
    CHECK(mt.rfind("# matching", 0) == 0);

    auto w = al_window(1, 1);
    auto pat = constant_pattern(RestrictingSet::AL(), 1, 1, {0, 0});
    auto cover = pattern_to_cover(w, pat);
    std::string ct = cover_to_text(cover);
    CHECK(ct.rfind("# cover target=", 0) == 0);
}

TEST_CASE("entropy report CSV layout") {
    EntropyReport rep;
    rep.set_name = "AL";
    EntropyRow row;
    row.n = 1;
    row.fix_count = 3;
    row.box_count = 1;
    row.pattern_count = 3;
    row.log_fix_per_site = 1.0986;
    row.log_box_per_site = 0;
    row.log_pattern_per_site = 1.0986;
    rep.rows.push_back(row);
    rep.quadrature.value = 0.3231;
    rep.quadrature.error_estimate = 1e-6;
    std::string csv = entropy_report_to_csv(rep);
    CHECK(csv.find("n,fix_count,box_perm_count,pattern_count") == 0);
    CHECK(csv.find("\r") == std::string::npos);  // LF only
    CHECK(csv.find("quadrature,AL") != std::string::npos);
    CHECK(csv.find("1,3,1,3,") != std::string::npos);
}
