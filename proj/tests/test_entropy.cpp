#include "doctest.h"

#include <cmath>

#include "permlattice/entropy.hpp"

using namespace permlattice;

namespace {

double catalan_series() {
    // alternating series, summed far past the needed accuracy
    double g = 0;
    for (long k = 200000; k >= 0; --k) {
        double t = 1.0 / ((2.0 * k + 1) * (2.0 * k + 1));
        g += (k % 2 == 0) ? t : -t;
    }
    return g;
}

}  // namespace

TEST_CASE("mahler measure of a constant") {
    LaurentPolynomial2 p;
    p.set(0, 0, BigRat(5));
    auto r = mahler_measure(p, 16);
    CHECK(r.value == doctest::Approx(std::log(5.0)).epsilon(1e-12));
    CHECK(r.excluded_zeros == 0);
    LaurentPolynomial2 zero;
    CHECK_THROWS_AS(mahler_measure(zero, 16), Error);
    CHECK_THROWS_AS(mahler_measure(p, 4), Error);
}

TEST_CASE("honeycomb integrand hits the known value") {
    auto r = mahler_measure(LaurentPolynomial2::honeycomb_characteristic(), 512);
    CHECK(std::fabs(r.value - 0.3230659472) < 5e-4);
    CHECK(r.error_estimate < 5e-4);
}

TEST_CASE("square integrand matches the Catalan series") {
    auto r = mahler_measure(LaurentPolynomial2::square_characteristic(), 512);
    double target = 2.0 * catalan_series() / M_PI;
    CHECK(std::fabs(0.5 * r.value - target) < 5e-4);
    CHECK(r.excluded_zeros == 1);  // the origin point of the grid
}

TEST_CASE("grid zeros of 1+z+w are excluded and reported") {
    auto r = mahler_measure(LaurentPolynomial2::honeycomb_characteristic(), 384);
    CHECK(r.excluded_zeros == 2);  // the two cube-root points
    CHECK(std::fabs(r.value - 0.3230659472) < 5e-4);
}

TEST_CASE("mahler multiplicativity") {
    auto p = LaurentPolynomial2::honeycomb_characteristic();
    auto r1 = mahler_measure(p, 256);
    auto r2 = mahler_measure(p * p, 256);
    CHECK(std::fabs(r2.value - 2.0 * r1.value) < 1e-9);  // pointwise log doubling
}

TEST_CASE("mahler symmetries are exact under the sorted sum") {
    auto p = LaurentPolynomial2::honeycomb_characteristic();
    auto a = mahler_measure(p, 128);
    auto b = mahler_measure(p.swap_vars(), 128);
    auto c = mahler_measure(p.invert_z(), 128);
    CHECK(a.value == b.value);
    CHECK(a.value == c.value);
}

TEST_CASE("laurent parse and print") {
    auto p = LaurentPolynomial2::parse("1:0,0;1:1,0;1:0,1");
    CHECK(p.terms().size() == 3);
    auto q = LaurentPolynomial2::parse("4:0,0;-1:1,0;-1:-1,0;-1:0,1;-1:0,-1");
    CHECK(q.terms() == LaurentPolynomial2::square_characteristic().terms());
    CHECK_THROWS_AS(LaurentPolynomial2::parse("garbage"), Error);
    // cancelling terms vanish
    auto z = LaurentPolynomial2::parse("1:0,0;-1:0,0");
    CHECK(z.zero());
}

TEST_CASE("entropy report for A_L") {
    auto rep = entropy_report(RestrictingSet::AL(), 3, 256);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].fix_count == 3);
    CHECK(rep.rows[1].fix_count == 9);
    CHECK(rep.rows[2].fix_count == 42);
    CHECK(rep.rows[0].box_count == 1);
    CHECK(rep.rows[2].box_count == 1);
    CHECK(rep.rows[0].pattern_count == 3);
    CHECK(rep.rows[1].pattern_count == 28);
    CHECK(rep.rows[2].pattern_count == 459);
    for (const auto& r : rep.rows) {
        CHECK(r.fekete_ok);
        CHECK(r.log_pattern_per_site >= rep.fekete_floor);
    }
}

TEST_CASE("entropy report for A_+") {
    auto rep = entropy_report(RestrictingSet::Aplus(), 3, 256);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].fix_count == 4);
    CHECK(rep.rows[1].fix_count == 64);
    CHECK(rep.rows[2].fix_count == 448);
    CHECK(rep.rows[0].box_count == 0);
    CHECK(rep.rows[1].box_count == 4);
    CHECK(rep.rows[2].box_count == 0);  // odd box: log renders as -inf
    CHECK(std::isinf(rep.rows[2].log_box_per_site));
    CHECK(rep.rows[0].pattern_count == 4);
    CHECK(rep.rows[1].pattern_count == 196);
    CHECK(rep.rows[2].pattern_count == 58688);
}

TEST_CASE("universal lower bound") {
    auto b = universal_lower_bound(512);
    CHECK(std::fabs(b.value - 0.323066) < 5e-4);
    CHECK(lower_bound_applies(RestrictingSet::Aplus()));
    CHECK(lower_bound_applies(RestrictingSet::AL()));
    CHECK_FALSE(lower_bound_applies(RestrictingSet::from_vec2({{0, 0}, {1, 0}})));
    // consistency of the two quadratures: bound below the A_+ value
    auto plus = mahler_measure(LaurentPolynomial2::square_characteristic(), 512);
    CHECK(b.value <= 0.5 * plus.value);
}
