#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ramify/errors.hpp"
#include "ramify/localfields.hpp"
#include "ramify/numtheory.hpp"

using namespace ramify;
using V = std::vector<std::int64_t>;

namespace {

std::vector<LocalFieldSpec> small_catalog() {
    return {make_local_field(LocalFieldTag::Qp, 2),
            make_local_field(LocalFieldTag::Qp, 3),
            make_local_field(LocalFieldTag::Qp, 5),
            make_local_field(LocalFieldTag::UnramifiedQuadratic, 2, -3),
            make_local_field(LocalFieldTag::UnramifiedQuadratic, 3, 2),
            make_local_field(LocalFieldTag::UnramifiedQuadratic, 5, 2),
            make_local_field(LocalFieldTag::RamifiedQuadraticOver2, 2, -1),
            make_local_field(LocalFieldTag::RamifiedQuadraticOver2, 2, 2),
            make_local_field(LocalFieldTag::RamifiedQuadraticOver2, 2, -2),
            make_local_field(LocalFieldTag::RamifiedQuadraticOver2, 2, 3),
            make_local_field(LocalFieldTag::RamifiedQuadraticOver2, 2, 6),
            make_local_field(LocalFieldTag::RamifiedQuadraticOver2, 2, -6),
            make_local_field(LocalFieldTag::CyclotomicLocal, 2, 2),
            make_local_field(LocalFieldTag::CyclotomicLocal, 2, 3),
            make_local_field(LocalFieldTag::CyclotomicLocal, 2, 4),
            make_local_field(LocalFieldTag::CyclotomicLocal, 3, 1),
            make_local_field(LocalFieldTag::CyclotomicLocal, 3, 2),
            make_local_field(LocalFieldTag::CyclotomicLocal, 5, 1)};
}

}  // namespace

TEST_CASE("unit quotients") {
    auto q2 = make_local_field(LocalFieldTag::Qp, 2);
    auto q3 = make_local_field(LocalFieldTag::Qp, 3);
    CHECK(unit_quotient(q2, 1, 3).structure.invariants() == V{2, 2});
    CHECK(unit_quotient(q3, 1, 2).structure.invariants() == V{3});
    CHECK(unit_quotient(q3, 0, 2).structure.invariants() == V{6});
    CHECK(unit_quotient(q3, 2, 2).structure.is_trivial());
    for (int b = 3; b <= 12; ++b)
        CHECK(unit_quotient(q2, 1, b).structure.invariants() == V{std::int64_t{1} << (b - 2), 2});
    CHECK_THROWS_AS(unit_quotient(q2, 3, 2), input_error);
}

TEST_CASE("orders of graded pieces") {
    for (const auto& spec : small_catalog()) {
        const std::int64_t q = ipow(spec.p, spec.f);
        for (int a = 1; a <= 3; ++a)
            for (int b = a; b <= a + 2; ++b)
                CHECK(unit_quotient(spec, a, b).structure.order() == ipow(q, b - a));
        CHECK(unit_quotient(spec, 0, 1).structure.order() == q - 1);
    }
}

TEST_CASE("p-ranks of U1/Unu") {
    auto q2 = make_local_field(LocalFieldTag::Qp, 2);
    CHECK(prank_u1_mod_unu(q2, 1) == 0);
    CHECK(prank_u1_mod_unu(q2, 2) == 1);
    CHECK(prank_u1_mod_unu(q2, 3) == 2);
    CHECK(prank_u1_mod_unu(q2, 4) == 2);
    CHECK(prank_u1_mod_unu(q2, Rational(5, 2)) == 2);
    CHECK(prank_u1_mod_unu(q2, DepthIndex::infinity()) == 2);
    CHECK(prank_u1_mod_unu(q2, Rational(1, 2)) == 0);
    for (const auto& spec : small_catalog()) {
        const int stable = spec.degree() + delta_p(spec);
        const std::int64_t level = pth_power_level(spec.p, spec.e);
        int prev = 0;
        for (std::int64_t nu = 1; nu <= level; ++nu) {
            int r = prank_u1_mod_unu(spec, nu);
            CHECK(r >= prev);
            prev = r;
        }
        INFO(spec.name());
        CHECK(prev == stable);
        CHECK(prank_u1_mod_unu(spec, DepthIndex::infinity()) == stable);
    }
}

TEST_CASE("delta indicators") {
    CHECK(delta_p(make_local_field(LocalFieldTag::Qp, 2)) == 1);
    CHECK(delta_p(make_local_field(LocalFieldTag::Qp, 3)) == 0);
    CHECK(delta_p(make_local_field(LocalFieldTag::CyclotomicLocal, 3, 1)) == 1);
    CHECK(delta_p(make_local_field(LocalFieldTag::UnramifiedQuadratic, 3, 2)) == 0);
    auto q2 = make_local_field(LocalFieldTag::Qp, 2);
    CHECK(delta_p_nu(q2, 1) == 1);
    CHECK(delta_p_nu(q2, 2) == 0);
    CHECK(delta_p_nu(q2, DepthIndex::infinity()) == 0);
    CHECK(delta_p_nu(make_local_field(LocalFieldTag::Qp, 3), 1) == 0);
    for (const auto& spec : small_catalog())
        for (int nu = 0; nu <= 6; ++nu)
            if (delta_p_nu(spec, nu)) {
                CHECK(delta_p(spec) == 1);
                for (int lower = 0; lower < nu; ++lower) CHECK(delta_p_nu(spec, lower) == 1);
            }
    // zeta_p = 1 + pi in the cyclotomic models really has order p
    for (auto [p, n] : {std::pair{3, 1}, std::pair{5, 1}, std::pair{3, 2}}) {
        auto spec = make_local_field(LocalFieldTag::CyclotomicLocal, p, n);
        LocalRing ring(model_of(spec), 3 * spec.e);
        auto zeta = ring.one();
        zeta[1] = 1;
        auto zp = ring.power(zeta, ipow(p, n));
        CHECK(zp == ring.one());
    }
    CHECK_THROWS_AS(make_local_field(LocalFieldTag::UnramifiedQuadratic, 3, 7), input_error);
    CHECK_THROWS_AS(make_local_field(LocalFieldTag::RamifiedQuadraticOver2, 2, 5), input_error);
    CHECK_THROWS_AS(make_local_field(LocalFieldTag::CyclotomicLocal, 7, 1), input_error);
}

TEST_CASE("ring arithmetic and division by the uniformizer") {
    auto model = model_of(make_local_field(LocalFieldTag::CyclotomicLocal, 3, 2));
    LocalRing ring(model, 20);
    auto pi = ring.zero();
    pi[1] = 1;
    auto u = ring.add(ring.one(), ring.add(pi, pi));  // 1 + 2 pi
    auto x = ring.mul(ring.power(pi, 5), u);
    CHECK(ring.valuation(x) == 5);
    auto y = x;
    for (int b = 20; b > 15; --b) y = LocalRing(model, b).divide_by_uniformizer(y);
    LocalRing small(model, 15);
    CHECK(small.reduce(y) == small.reduce(u));
    auto three = ring.zero();
    three[0] = 3;
    CHECK(ring.valuation(three) == 6);
    CHECK(ring.valuation(ring.zero()) == 20);
}

TEST_CASE("p-th power classes") {
    auto q2 = model_of(make_local_field(LocalFieldTag::Qp, 2));
    LocalRing ring(q2, 12);
    auto val = [&](std::int64_t v) { return ring.from_integers({mpz_class(static_cast<long>(v))}); };
    CHECK(in_pth_powers_times_units(ring, val(-1), 1));
    CHECK_FALSE(in_pth_powers_times_units(ring, val(-1), 2));
    CHECK(in_pth_powers_times_units(ring, val(17), DepthIndex::infinity()));
    CHECK_FALSE(in_pth_powers_times_units(ring, val(5), DepthIndex::infinity()));
    CHECK(in_pth_powers_times_units(ring, val(5), 2));
    CHECK(in_pth_powers_times_units(ring, val(4 * 17), DepthIndex::infinity()));
    CHECK_FALSE(in_pth_powers_times_units(ring, val(2), 0));

    auto z3 = model_of(make_local_field(LocalFieldTag::CyclotomicLocal, 3, 1));
    LocalRing r3(z3, 10);
    auto zeta = r3.one();
    zeta[1] = 1;
    CHECK(in_pth_powers_times_units(r3, zeta, 1));
    CHECK_FALSE(in_pth_powers_times_units(r3, zeta, 2));
    CHECK_FALSE(in_pth_powers_times_units(r3, zeta, DepthIndex::infinity()));
    auto minus_one = r3.sub(r3.zero(), r3.one());
    CHECK(in_pth_powers_times_units(r3, minus_one, DepthIndex::infinity()));
}

TEST_CASE("guard") {
    auto q2 = model_of(make_local_field(LocalFieldTag::Qp, 2));
    CHECK_THROWS_AS(unit_quotient(q2, 1, 30), guard_error);
}

TEST_CASE("p-th power classes for p different from the residue characteristic") {
    const LocalModel q3 = model_of(make_local_field(LocalFieldTag::Qp, 3));
    const LocalModel q5 = model_of(make_local_field(LocalFieldTag::Qp, 5));
    LocalRing r3(q3, 2), r5(q5, 2);
    // -1 is a square mod 5 but not mod 3
    CHECK_FALSE(in_pth_powers_times_units(r3, r3.from_integers({-1}), DepthIndex(1), 2));
    CHECK(in_pth_powers_times_units(r5, r5.from_integers({-1}), DepthIndex(1), 2));
    CHECK(in_pth_powers_times_units(r5, r5.from_integers({-1}), DepthIndex::infinity(), 2));
    // 3 = 3 * 1 has odd valuation at 3
    CHECK_FALSE(in_pth_powers_times_units(r3, r3.from_integers({3}), DepthIndex(1), 2));
    CHECK(membership_precision(q5, DepthIndex::infinity(), 2) == 1);
    CHECK(membership_precision(q5, DepthIndex::infinity()) == pth_power_level(5, 1));
}
