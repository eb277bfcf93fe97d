#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ramify/bounds.hpp"
#include "ramify/errors.hpp"
#include "ramify/numtheory.hpp"

using namespace ramify;
using F = BoundReport::Factor;

namespace {

BoundReport power(std::int64_t q, std::int64_t num, std::int64_t den = 1) { return BoundReport({{q, Rational(num, den)}}); }

IndexedSet S_of(const std::string& text) { return parse_indexed_set(text); }

}  // namespace

TEST_CASE("bound reports keep exact factored powers") {
    const BoundReport r({{3, Rational(1, 2)}, {2, Rational(1)}, {3, Rational(1, 2)}, {5, Rational(0)}});
    REQUIRE(r.exact().size() == 2);
    CHECK(r.exact()[0] == F{2, Rational(1)});
    CHECK(r.exact()[1] == F{3, Rational(1)});
    CHECK(r.is_rational());
    CHECK(r.value_string() == "6");
    CHECK(r.decimal() == "6");

    CHECK(power(2, -3).value_string() == "1/8");
    CHECK(power(2, -3).decimal() == "0.125");
    CHECK(power(2, 3, 2).value_string() == "2.82842712475");
    CHECK(power(2, 1, 2).with_digits(30).decimal() == "1.41421356237309504880168872421");
    CHECK(power(10, 25).decimal() == "1e25");
    CHECK(power(7, 30).decimal() == "2.25393402907e25");
    CHECK(power(2, -30).decimal() == "9.31322574615e-10");
    CHECK(BoundReport().decimal() == "1");
    CHECK(BoundReport({}, 5).value_string() == "1");

    CHECK(compare(power(2, 3, 2), power(3, 1)) < 0);
    CHECK(compare(power(3, 3, 2), power(5, 1)) > 0);
    CHECK(compare(power(4, 1, 2), power(2, 1)) == 0);
    CHECK(compare(power(2, 3, 2) * power(2, 1, 2), power(4, 1)) == 0);
    CHECK_THROWS_AS(BoundReport({{0, Rational(1)}}), input_error);
    CHECK_THROWS_AS(power(2, 1).with_digits(0), input_error);
}

TEST_CASE("correct rounding of the decimal rendering") {
    // sqrt(2) = 1.41421356237309504880..., 3^(3/2) = 5.19615242270663188058...
    CHECK(power(2, 1, 2).with_digits(1).decimal() == "1");
    CHECK(power(2, 1, 2).with_digits(3).decimal() == "1.41");
    CHECK(power(2, 1, 2).with_digits(5).decimal() == "1.4142");
    CHECK(power(3, 3, 2).with_digits(4).decimal() == "5.196");
    CHECK(power(3, 3, 2).with_digits(5).decimal() == "5.1962");
    // 81^(1/3) = 4.32674871092222...
    CHECK(power(3, 4, 3).with_digits(4).decimal() == "4.327");
    // 999.5 rounds up to the next power of ten
    CHECK(BoundReport({{1999, Rational(1)}, {2, Rational(-1)}}, 3).decimal() == "1000");
    CHECK(BoundReport({{19999, Rational(1)}, {2, Rational(-1)}, {10, Rational(21)}}, 3).decimal() == "1e25");
}

TEST_CASE("bound report json") {
    const auto j = to_json(power(3, 3, 2));
    CHECK(j.dump() == R"({"exact":[{"base":3,"exp":"3/2"}],"decimal":"5.19615242271"})");
}

TEST_CASE("root discriminants") {
    const BoundReport q2 = root_discriminant({{2, 3}}, 2);
    CHECK(q2.exact() == std::vector<F>{{2, Rational(3, 2)}});
    CHECK(q2.decimal() == "2.82842712475");
    CHECK(root_discriminant({}, 7).value_string() == "1");
    const BoundReport z9 = root_discriminant({{3, 9}}, 6);
    CHECK(z9.exact() == std::vector<F>{{3, Rational(3, 2)}});
    CHECK(z9.decimal() == "5.19615242271");
    CHECK_THROWS_AS(root_discriminant({{2, 3}}, 0), input_error);

    CHECK(summarize(BaseField::rationals(), 2).root_discriminant().value_string() == "1");
    CHECK(summarize(BaseField::parse("Q(sqrt-7)"), 2).root_discriminant().exact() == std::vector<F>{{7, Rational(1, 2)}});
}

TEST_CASE("base field summaries") {
    const auto q2 = summarize(BaseField::rationals(), 2);
    CHECK(q2.degree == 1);
    CHECK(q2.r1 == 1);
    CHECK(q2.r2 == 0);
    CHECK(q2.delta_K == 1);
    CHECK(q2.unit_prank == 1);
    CHECK(summarize(BaseField::rationals(), 3).unit_prank == 0);

    const auto z3 = summarize(BaseField::parse("zeta3"), 3);
    CHECK(z3.degree == 2);
    CHECK(z3.r2 == 1);
    CHECK(z3.delta_K == 1);
    CHECK(z3.unit_prank == 1);
    CHECK(z3.disc == Factored{{3, 1}});
    CHECK(z3.theta({}) == 1);
    CHECK(z3.theta(S_of("3.0:2")) == 0);

    const auto m7 = summarize(BaseField::parse("Q(sqrt-7)"), 2);
    CHECK(m7.delta_K == 1);
    CHECK(m7.unit_prank == 1);
    const auto m23 = summarize(BaseField::parse("Q(sqrt-23)"), 3);
    CHECK(m23.delta_K == 0);
    CHECK(m23.unit_prank == 0);
    CHECK(m23.theta({}) == 0);
    CHECK_THROWS_AS(summarize(BaseField::rationals(), 4), input_error);
}

TEST_CASE("root discriminant bounds") {
    const BaseField Q = BaseField::rationals();
    CHECK(rd_bound_thm42(Q, {}, 3).value_string() == "1");
    CHECK(rd_bound_thm42(Q, S_of("3:2"), 3).value_string() == "27");
    CHECK(rd_bound_thm42(Q, S_of("5:1"), 3).value_string() == "5");
    CHECK(rd_bound_thm42(Q, S_of("5:1/2"), 3).value_string() == "5");
    CHECK(rd_bound_thm42(Q, S_of("3:1/2"), 3).exact() == std::vector<F>{{3, Rational(3, 2)}});
    CHECK_THROWS_AS(rd_bound_thm42(Q, S_of("3:inf"), 3), input_error);
    CHECK(rd_bound_thm42(Q, S_of("5:inf"), 3).value_string() == "5");

    CHECK(rd_bound_perret(Q, {}).value_string() == "1");
    CHECK(rd_bound_perret(Q, S_of("3:2")).value_string() == "9");
    CHECK(rd_bound_perret(Q, S_of("3:5/2")).value_string() == "27");
    CHECK_THROWS_AS(rd_bound_perret(Q, S_of("3:inf")), input_error);

    const BaseField m7 = BaseField::parse("Q(sqrt-7)");
    CHECK(rd_bound_thm42(m7, {}, 2).exact() == std::vector<F>{{7, Rational(1, 2)}});
    // two split primes of norm 2 with nu = 4: 7^(1/2) 2^(5/2) 2^(5/2)
    CHECK(rd_bound_thm42(m7, S_of("2.0:4,2.1:4"), 2).exact() == std::vector<F>{{2, Rational(5)}, {7, Rational(1, 2)}});
    // inert 3 has norm 9; tame for p = 2
    CHECK(rd_bound_thm42(m7, S_of("3.0:1"), 2).exact() == std::vector<F>{{3, Rational(1)}, {7, Rational(1, 2)}});

    const BaseField z3 = BaseField::parse("zeta3");
    CHECK(rd_bound_thm42(z3, S_of("3.0:2"), 3).exact() == std::vector<F>{{3, Rational(2)}});
    CHECK(rd_bound_perret(z3, S_of("3.0:2")).exact() == std::vector<F>{{3, Rational(3, 2)}});
}

TEST_CASE("perret bound never exceeds the wild bound and agrees at tame primes") {
    const BaseField Q = BaseField::rationals();
    for (std::int64_t p : {2, 3, 5, 7}) {
        for (std::int64_t num = 1; num <= 12; ++num) {
            for (std::int64_t den : {1, 2, 3}) {
                const IndexedSet S{{{p, 0}, DepthIndex(Rational(num, den))}};
                CHECK(compare(rd_bound_perret(Q, S), rd_bound_thm42(Q, S, p)) <= 0);
            }
        }
        const std::int64_t other = p == 2 ? 3 : 2;
        const IndexedSet tame{{{other, 0}, DepthIndex(1)}};
        CHECK(compare(rd_bound_perret(Q, tame), rd_bound_thm42(Q, tame, p)) == 0);
    }
}

TEST_CASE("layer root discriminants respect the wild bound") {
    const BaseField Q = BaseField::rationals();
    struct Case {
        std::int64_t p;
        std::int64_t nu;
    };
    for (const Case c : {Case{3, 2}, Case{2, 3}, Case{3, 3}, Case{5, 2}, Case{2, 4}, Case{2, 5}, Case{3, 4}}) {
        CAPTURE(c.p);
        CAPTURE(c.nu);
        const AbelianLayer layer = rayclass_layer_q(ipow(c.p, static_cast<int>(c.nu)), c.p);
        const BoundReport rd = root_discriminant(layer.disc, layer.degree);
        const BoundReport bound = rd_bound_thm42(Q, {{{c.p, 0}, DepthIndex(c.nu)}}, c.p);
        CHECK(compare(rd, bound) <= 0);
        CHECK(compare(rd, rd_bound_perret(Q, {{{c.p, 0}, DepthIndex(c.nu)}})) <= 0);
    }
    // Q(zeta_9)^+: disc 81, degree 3
    const AbelianLayer l9 = rayclass_layer_q(9, 3);
    CHECK(l9.degree == 3);
    CHECK(l9.disc == Factored{{3, 4}});
    CHECK(root_discriminant(l9.disc, l9.degree).with_digits(4).decimal() == "4.327");
}

TEST_CASE("tau and the different") {
    CHECK(tau(Filtration({1}), 1) == Rational(0));
    CHECK(tau(Filtration({2, 2, 2}), 2) == Rational(3, 2));
    CHECK(tau(filtration_monogenic(cyclotomic_local(3, 2)), 6) == Rational(3, 2));
    CHECK_THROWS_AS(tau(Filtration({2, 2, 2}), 4), input_error);

    CHECK(different_from_last_jump(Filtration({1})) == 0);
    CHECK(different_from_last_jump(Filtration({2, 2, 2})) == 3);
    CHECK(different_from_last_jump(Filtration({6, 3, 3, 3})) == 11);
    CHECK(different_from_last_jump(Filtration({8, 4, 4, 2, 2, 2, 2})) == 7 + 3 * 2 + 1 * 4);
    for (std::int64_t p : {2, 3, 5}) {
        for (int n = 1; ipow(p, n) <= 81; ++n) {
            const Filtration filt = filtration_monogenic(cyclotomic_local(p, n));
            CHECK(different_from_last_jump(filt) == different_valuation(filt));
        }
    }
}

TEST_CASE("tower root discriminant growth") {
    const auto rows3 = tower_rd_growth(3, 5);
    REQUIRE(rows3.size() == 5);
    for (int n = 1; n <= 5; ++n) {
        CHECK(rows3[n - 1].n == n);
        CHECK(rows3[n - 1].tau == Rational(2 * n - 1, 2));
        CHECK(rows3[n - 1].rd.exact() == std::vector<F>{{3, Rational(2 * n - 1, 2)}});
    }

    const auto rows2 = tower_rd_growth(2, 6);
    REQUIRE(rows2.size() == 6);
    CHECK(rows2[0].rd.exact().empty());  // Q(zeta_2) = Q
    CHECK(rows2[1].rd.value_string() == "2");
    // disc(Q(zeta_8)) = 2^8 over degree 4
    CHECK(rows2[2].rd.value_string() == "4");
    for (std::size_t i = 1; i < rows2.size(); ++i) {
        CHECK(rows2[i - 1].tau < rows2[i].tau);
        CHECK(compare(rows2[i - 1].rd, rows2[i].rd) < 0);
    }
    const auto rows5 = tower_rd_growth(5, 3);
    CHECK(rows5[0].tau == Rational(3, 4));
    CHECK(rows5[1].tau == Rational(7, 4));

    CHECK_THROWS_AS(tower_rd_growth(7, 2), input_error);
    CHECK_THROWS_AS(tower_rd_growth(3, 6), guard_error);
    CHECK_THROWS_AS(tower_rd_growth(2, 7), guard_error);
    CHECK_THROWS_AS(tower_rd_growth(3, 0), input_error);
}

TEST_CASE("generator rank from ray class groups") {
    const BaseField Q = BaseField::rationals();
    CHECK(d_s_nu_rayclass(Q, S_of("3:2"), 3) == 1);
    CHECK(d_s_nu_rayclass(Q, S_of("2:3"), 2) == 1);
    CHECK(d_s_nu_rayclass(BaseField::parse("Q(sqrt-7)"), S_of("2.0:4,2.1:4"), 2) == 3);
    CHECK(d_s_nu_rayclass(BaseField::parse("zeta3"), S_of("3.0:6"), 3) == 2);
    CHECK_THROWS_AS(d_s_nu_rayclass(Q, S_of("3:inf"), 3), input_error);

    const BaseField m7 = BaseField::parse("Q(sqrt-7)");
    int previous = 0;
    for (int k = 1; k <= 7; ++k) {
        const int r = d_s_nu_rayclass(m7, S_of("2.0:" + std::to_string(k) + ",2.1:" + std::to_string(k)), 2);
        CHECK(r >= previous);
        previous = r;
    }
    CHECK(previous == 3);
}

TEST_CASE("idelic generator rank formula") {
    CHECK(d_s_nu_idelic(0, 0, {}, {}) == 0);
    CHECK(d_s_nu_idelic(1, 1, {1}, {2, 2}) == 5);
    CHECK_THROWS_AS(d_s_nu_idelic(0, 0, {2}, {}), input_error);
    CHECK_THROWS_AS(d_s_nu_idelic(-1, 0, {}, {}), input_error);

    const auto in = idelic_ingredients(BaseField::parse("Q(sqrt-7)"), S_of("2.0:4,2.1:4"), 2);
    CHECK(in.delta_rank == 0);
    CHECK(in.unit_prank == 1);
    CHECK(in.tame_deltas.empty());
    CHECK(in.wild_unit_ranks == std::vector<int>{2, 2});
    CHECK(in.value() == 3);

    // with infinite depth the wild ranks are [K_P : Q_p] + delta_P
    const auto inf = idelic_ingredients(BaseField::parse("Q(sqrt-7)"), S_of("2.0:inf,2.1:inf"), 2);
    CHECK(inf.wild_unit_ranks == std::vector<int>{2, 2});
    const auto z3 = idelic_ingredients(BaseField::parse("zeta3"), S_of("3.0:inf"), 3);
    CHECK(z3.wild_unit_ranks == std::vector<int>{3});
    CHECK(z3.value() == 2);
}

TEST_CASE("both sides of the generator rank formula agree") {
    struct Case {
        const char* base;
        const char* S;
        std::int64_t p;
    };
    const Case cases[] = {
        {"Q", "3:2", 3},
        {"Q", "3:3", 3},
        {"Q", "3:4", 3},
        {"Q", "3:inf", 3},
        {"Q", "2:2", 2},
        {"Q", "2:3", 2},
        {"Q", "2:4", 2},
        {"Q", "2:inf", 2},
        {"Q", "3:2,7:1", 3},
        {"Q", "2:3,5:1,7:1", 2},
        {"Q(sqrt-7)", "2.0:2,2.1:2", 2},
        {"Q(sqrt-7)", "2.0:3,2.1:3", 2},
        {"Q(sqrt-7)", "2.0:4,2.1:4", 2},
        {"Q(sqrt-7)", "2.0:inf,2.1:inf", 2},
        {"Q(sqrt-7)", "2.0:4", 2},
        {"Q(sqrt-7)", "2.0:3,2.1:2,3.0:1", 2},
        {"Q(sqrt-23)", "2.0:2,2.1:2", 2},
        {"Q(sqrt-23)", "2.0:3,2.1:3", 2},
        {"Q(sqrt-23)", "2.0:inf,2.1:inf", 2},
        {"Q(sqrt-23)", "3.0:2,3.1:2", 3},
        {"Q(sqrt-23)", "3.0:inf", 3},
        {"Q(sqrt-23)", "", 3},
        {"zeta3", "3.0:2", 3},
        {"zeta3", "3.0:3", 3},
        {"zeta3", "3.0:4", 3},
        {"zeta3", "3.0:inf", 3},
        {"zeta3", "3.0:4,7.0:1", 3},
        {"zeta3", "2.0:1", 3},
    };
    for (const Case& c : cases) {
        CAPTURE(c.base);
        CAPTURE(c.S);
        CAPTURE(c.p);
        const BaseField base = BaseField::parse(c.base);
        const auto check = d_s_nu_both(base, S_of(c.S), c.p);
        CHECK(check.rayclass == check.idelic.value());
        CHECK(check.agree());
    }
}

TEST_CASE("stable indexed sets") {
    const BaseField Q = BaseField::rationals();
    const IndexedSet s = stable_indexed_set(Q, S_of("2:inf,3:inf,5:2"), 2);
    REQUIRE(s.size() == 3);
    CHECK(s[0].nu == DepthIndex(3));
    CHECK(s[1].nu == DepthIndex(1));
    CHECK(s[2].nu == DepthIndex(2));
    CHECK(stable_indexed_set(BaseField::parse("zeta3"), S_of("3.0:inf"), 3)[0].nu == DepthIndex(4));
}

TEST_CASE("relation rank evaluators") {
    CHECK(shafarevich_bound(0, 0, 0, {1}) == -1);
    CHECK(shafarevich_bound(0, 0, 0, {}) == 0);
    CHECK(shafarevich_bound(1, 1, 0, {1, 1}) == -2);
    CHECK(euler_char_full(0) == -1);
    CHECK(euler_char_full(1) == -2);
    CHECK(euler_char_full(3) == -4);
    CHECK_THROWS_AS(shafarevich_bound(0, 2, 0, {}), input_error);
    CHECK_THROWS_AS(euler_char_full(-1), input_error);

    CHECK(relation_bound_thm55(0, 0, 0, {}) == 0);
    CHECK(relation_bound_thm55(2, 0, 1, {1, 1}) == 3);
    CHECK_THROWS_AS(relation_bound_thm55(0, 0, 0, {3}), input_error);

    // Q(sqrt-7) at p = 2 with S the two primes above 2: the bound is b + 1
    const BaseField m7 = BaseField::parse("Q(sqrt-7)");
    const auto sum = summarize(m7, 2);
    std::vector<int> deltas;
    for (const auto& P : m7.primes_above(2)) deltas.push_back(local_delta(m7, completion(m7, P), 2));
    CHECK(deltas == std::vector<int>{1, 1});
    for (int b = 0; b < 4; ++b) CHECK(relation_bound_thm55(b, sum.theta(S_of("2.0:2,2.1:2")), sum.delta_K, deltas) == b + 1);

    CHECK(ker_eta_bound(0, 0, {}, {}, {}) == 0);
    const int d = d_s_nu_rayclass(BaseField::rationals(), S_of("2:3"), 2);
    CHECK(d == 1);
    CHECK(ker_eta_bound(0, d, {{1, 0}}, {}, {2}) == 0);
    CHECK_THROWS_AS(ker_eta_bound(0, 0, {{1, 2}}, {}, {}), input_error);
}

TEST_CASE("kernel bound ingredients are monotone in nu") {
    const BaseField Q = BaseField::rationals();
    const Completion c2 = completion(Q, {2, 0});
    int last_rank = -1;
    int last_delta = 2;
    for (int nu = 1; nu <= 6; ++nu) {
        const int rank = prank_u1_mod_unu(c2.model, DepthIndex(nu), local_delta(Q, c2, 2));
        const LocalFieldSpec spec{LocalFieldTag::Qp, 2, 0, 1, 1};
        const int delta = delta_p_nu(spec, DepthIndex(nu));
        CHECK(rank >= last_rank);
        CHECK(delta <= last_delta);
        last_rank = rank;
        last_delta = delta;
    }
}
