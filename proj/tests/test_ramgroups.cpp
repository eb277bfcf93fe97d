#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ramify/errors.hpp"
#include "ramify/ramgroups.hpp"

using namespace ramify;
using V = std::vector<std::int64_t>;

TEST_CASE("depth index parsing") {
    CHECK(DepthIndex::parse("inf").is_infinite());
    CHECK(DepthIndex::parse("5/2").value() == Rational(5, 2));
    CHECK(DepthIndex::parse("5/2").ceil() == 3);
    CHECK(DepthIndex(2).to_string() == "2/1");
    CHECK_THROWS_AS(DepthIndex(-1), input_error);
    CHECK_THROWS_AS(DepthIndex::infinity().value(), input_error);
}

TEST_CASE("quadratic fields at 2 by brute force") {
    CHECK(quadratic_filtration(2, 2).orders() == V{2, 2, 2});
    CHECK(quadratic_filtration(-2, 2).orders() == V{2, 2, 2});
    CHECK(quadratic_filtration(-1, 2).orders() == V{2, 2});
    CHECK(quadratic_filtration(3, 2).orders() == V{2, 2});
    CHECK(quadratic_filtration(-7, 2).orders() == V{1});
    CHECK(quadratic_filtration(-7, 7).orders() == V{2});
    CHECK_THROWS_AS(quadratic_at_prime(-7, 2), input_error);
    auto ext = quadratic_at_prime(2, 2);
    CHECK(norm(ext, {3, 1}) == 7);
}

TEST_CASE("cyclotomic oracle") {
    CHECK(filtration_monogenic(cyclotomic_local(3, 1)).orders() == V{2});
    CHECK(filtration_monogenic(cyclotomic_local(5, 1)).orders() == V{4});
    CHECK(filtration_monogenic(cyclotomic_local(2, 1)).orders() == V{1});
    CHECK(filtration_monogenic(cyclotomic_local(2, 2)).orders() == V{2, 2});
    CHECK(filtration_monogenic(cyclotomic_local(2, 3)).orders() == V{4, 4, 2, 2});
    auto z9 = cyclotomic_local(3, 2);
    CHECK(filtration_monogenic(z9).orders() == V{6, 3, 3});
    CHECK(different_valuation(filtration_monogenic(z9)) == 9);
    CHECK(filtration_monogenic(z9, cyclotomic_subgroup(z9, 1)).orders() == V{3, 3, 3});
    CHECK(quotient_filtration(z9, cyclotomic_subgroup(z9, 1)).orders() == V{2});
    // the largest catalog entry
    auto z243 = cyclotomic_local(3, 5);
    CHECK(z243.degree() == 162);
    CHECK(different_valuation(filtration_monogenic(z243)) == 162 * 5 - 81);
    CHECK_THROWS_AS(cyclotomic_local(7, 1), input_error);
    CHECK_THROWS_AS(cyclotomic_local(2, 8), input_error);
}

TEST_CASE("transitivity on the cyclotomic towers") {
    for (auto [p, n] : {std::pair{3, 2}, std::pair{2, 3}, std::pair{5, 2}, std::pair{2, 5}}) {
        auto top = cyclotomic_local(p, n);
        auto h = cyclotomic_subgroup(top, n - 1);
        Filtration whole = filtration_monogenic(top);
        Filtration upper = filtration_monogenic(top, h);
        Filtration lower = quotient_filtration(top, h);
        CHECK(lower == filtration_monogenic(cyclotomic_local(p, n - 1)));
        CHECK(compose(phi_from_filtration(lower), phi_from_filtration(upper)) == phi_from_filtration(whole));
        CHECK(compose(psi_from_filtration(upper), psi_from_filtration(lower)) == psi_from_filtration(whole));
        // Hasse-Arf: abelian entries have integral upper jumps
        for (const auto& f : {whole, upper, lower})
            for (const auto& j : upper_jumps(f)) CHECK(j.is_integer());
        // lifting twice equals lifting once; depth statements along the tower
        for (int k = 0; k <= 8; ++k) {
            DepthIndex y(Rational(k, 2));
            CHECK(lift_depth(upper, lift_depth(lower, y)) == lift_depth(whole, y));
            if (is_depth_at_most(whole, y)) CHECK(is_depth_at_most(upper, lift_depth(lower, y)));
            if (is_depth_at_most(upper, lift_depth(lower, y)) && is_depth_at_most(lower, y))
                CHECK(is_depth_at_most(whole, y));
        }
    }
}

TEST_CASE("depth predicates") {
    Filtration tame({5});
    CHECK(is_depth_at_most(tame, 1));
    CHECK_FALSE(is_depth_at_most(tame, 0));
    Filtration f({2, 2, 2});
    CHECK(is_depth_at_most(f, 3));
    CHECK_FALSE(is_depth_at_most(f, 2));
    CHECK(is_depth_at_most(f, DepthIndex::infinity()));
    CHECK(lift_depth(f, Rational(5, 2)) == DepthIndex(3));
    CHECK(lift_depth(Filtration::unramified(), Rational(7, 3)) == DepthIndex(Rational(7, 3)));
    CHECK(lift_depth(f, DepthIndex::infinity()).is_infinite());
    CHECK(wild_vanishing_check(Filtration::unramified(), 2, 1));
    CHECK(wild_vanishing_check(f, 2, 1));
    CHECK(wild_vanishing_check(Filtration({3, 3}), 3, Rational(1, 2)));
    CHECK_THROWS_AS(wild_vanishing_check(tame, 2, 1), input_error);
    // D_1 vanishes iff D^1 does, on abelian entries
    for (const char* name : {"quadratic:2:2", "quadratic:-7:7", "cyclotomic:3:1", "cyclotomic:3:2", "cyclotomic:2:3",
                             "cyclotomic:5:2"}) {
        Filtration g = filtration_of(catalog_entry(name));
        CHECK(is_depth_at_most(g, 1) == (g.g(1) == 1));
    }
}

TEST_CASE("biquadratic field at 2") {
    auto report = depth_three_example();
    CHECK(report.base.orders() == V{2, 2, 2});
    CHECK(report.lifted.orders() == V{2, 2, 2, 2});
    CHECK(report.compositum.orders() == V{4, 4, 2, 2});
    CHECK(report.base_depth_at_most_3);
    CHECK_FALSE(report.lifted_depth_at_most_3);
    CHECK(report.compositum_depth_at_most_3);
    CHECK(upper_jumps(report.compositum) == std::vector<Rational>{1, 2});
    // v_2(disc) = 8 for Q(sqrt2, sqrt3)
    CHECK(different_valuation(report.compositum) * 1 == 8);
    auto ext = biquadratic_2_3();
    CHECK(norm(ext, {0, 0, 0, 1}) == 1);  // (sqrt2+sqrt6)/2 is a unit: t^2 = 2 + sqrt3
}

TEST_CASE("catalog file") {
    auto entries = load_catalog(default_catalog_path());
    CHECK(entries.size() >= 6);
    CHECK(filtration_of(catalog_entry("Q2(sqrt2,sqrt3)/Q2")).orders() == V{4, 4, 2, 2});
    CHECK(filtration_of(catalog_entry("Q2(sqrt3,sqrt2)/Q2(sqrt3)")).orders() == V{2, 2, 2, 2});
    CHECK(filtration_of(catalog_entry("Q2(sqrt-3)/Q2")).orders() == V{1});
    CHECK(filtration_of(catalog_entry("Q3(zeta9)/Q3(zeta3)")).orders() == V{3, 3, 3});
    CHECK(filtration_of(catalog_entry("cyclotomic:2:3/2")).orders() == V{2, 2, 2, 2});
    CHECK(filtration_of(catalog_entry("quadratic:-1:2")).orders() == V{2, 2});
    CHECK_THROWS_AS(catalog_entry("no-such-field"), input_error);
    CHECK_THROWS_AS(catalog_entry("cyclotomic:7:1"), input_error);
}

TEST_CASE("bad local models are rejected") {
    MonogenicLocalExtension ext;
    ext.name = "bad";
    ext.p = 2;
    ext.e = 2;
    ext.minpoly = {-3, 0, 1};  // not Eisenstein
    ext.automorphisms = {{0, 1}, {0, -1}};
    CHECK_THROWS_AS(validate(ext), input_error);
    ext.minpoly = {-2, 0, 1};
    ext.automorphisms = {{0, 1}, {1, 1}};  // 1 + x is not a root of x^2 - 2
    CHECK_THROWS_AS(validate(ext), input_error);
    ext.automorphisms = {{0, 1}, {0, -1}};
    CHECK_NOTHROW(validate(ext));
    CHECK(filtration_monogenic(ext).orders() == V{2, 2, 2});
}
