#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ramify/classfield.hpp"
#include "ramify/errors.hpp"
#include "ramify/numtheory.hpp"

using namespace ramify;
using V = std::vector<std::int64_t>;
using Form = BinaryQuadraticForm;

namespace {

QuadraticElement elt(long u, long v, std::int64_t D) { return {u, v, D}; }

bool associates(const QuadraticFieldData& field, const QuadraticElement& x, const QuadraticElement& y) {
    return principal_ideal(field, x) == principal_ideal(field, y);
}

Modulus split_two(std::int64_t k) { return {{{2, 0}, k}, {{2, 1}, k}}; }

}  // namespace

TEST_CASE("reduced forms and reduction") {
    CHECK(reduced_forms(-7) == std::vector<Form>{{1, 1, 2}});
    CHECK(reduced_forms(-23) == std::vector<Form>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}});
    CHECK(reduced_forms(-4) == std::vector<Form>{{1, 0, 1}});
    for (const Form& f : reduced_forms(-420)) CHECK(f.is_reduced());
    CHECK(reduced_forms(-420).size() == 8);

    CHECK(reduce({3, 5, 4}) == Form{2, 1, 3});
    CHECK(reduce({6, 1, 1}) == Form{1, 1, 6});
    CHECK(reduce({2, -2, 3}) == Form{2, 2, 3});
    CHECK(reduce({3, -1, 3}) == Form{3, 1, 3});
    CHECK_THROWS_AS(reduce({1, 3, 1}), input_error);
    CHECK(identity_form(-23) == Form{1, 1, 6});
    CHECK(identity_form(-20) == Form{1, 0, 5});
}

TEST_CASE("composition is a group law on reduced forms") {
    std::mt19937_64 rng(17);
    for (std::int64_t D : {-23, -47, -420, -1155, -3299, -9983, -99971}) {
        if (!is_fundamental_discriminant(D)) continue;
        const auto forms = reduced_forms(D);
        std::uniform_int_distribution<std::size_t> pick(0, forms.size() - 1);
        const Form e = identity_form(D);
        for (int trial = 0; trial < 200; ++trial) {
            const Form f = forms[pick(rng)], g = forms[pick(rng)], h = forms[pick(rng)];
            CHECK(compose(f, e) == f);
            CHECK(compose(e, f) == f);
            CHECK(compose(f, g) == compose(g, f));
            CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
            CHECK(compose(f, inverse(f)) == e);
            CHECK(compose(f, g).discriminant() == D);
        }
    }
    CHECK_THROWS_AS(compose({1, 1, 2}, {1, 1, 6}), input_error);
    CHECK(power(Form{2, 1, 3}, 3) == Form{1, 1, 6});
    CHECK(power(Form{2, 1, 3}, -1) == Form{2, -1, 3});
}

TEST_CASE("class groups") {
    auto f7 = class_group(-7);
    CHECK(f7.h() == 1);
    CHECK(f7.structure.is_trivial());
    CHECK(f7.forms == std::vector<Form>{{1, 1, 2}});
    CHECK(f7.w == 2);
    CHECK(f7.d == -7);

    auto f23 = class_group(-23);
    CHECK(f23.h() == 3);
    CHECK(f23.structure.invariants() == V{3});

    CHECK(class_group(-3).w == 6);
    CHECK(class_group(-4).w == 4);
    CHECK(class_group(-4).d == -1);
    CHECK(class_group(-84).structure.invariants() == V{2, 2});
    CHECK(class_group(-420).structure.invariants() == V{2, 2, 2});
    CHECK(class_group(-4027).structure.invariants() == V{3, 3});
    CHECK(class_group(-3299).structure.invariants() == V{9, 3});

    CHECK_THROWS_AS(class_group(5), input_error);
    CHECK_THROWS_AS(class_group(-12), input_error);
    CHECK_THROWS_AS(class_group(-1'000'003), input_error);

    // every form's log reconstructs it
    auto f = class_group(-3299);
    for (const Form& g : f.forms) {
        Form x = identity_form(f.D);
        const auto e = f.log(g);
        for (std::size_t i = 0; i < e.size(); ++i) x = compose(x, power(f.generators[i], e[i]));
        CHECK(x == g);
    }
}

TEST_CASE("genus theory: h is odd and 2 splits for ell = 7 (mod 8)") {
    for (std::int64_t ell = 7; ell < 5000; ell += 8) {
        if (!is_prime(ell)) continue;
        CHECK(kronecker(-ell, 2) == 1);
        CHECK(class_group(-ell).h() % 2 == 1);
    }
    // 2-rank of Cl = (#ramified primes) - 1
    CHECK(class_group(-84).structure.p_rank(2) == 2);
    CHECK(class_group(-420).structure.p_rank(2) == 3);
}

TEST_CASE("elements and ideals") {
    const auto f = class_group(-7);
    const QuadraticElement w = elt(1, 1, -7);
    CHECK(w.norm() == 2);
    CHECK(w.to_string() == "(1 + 1*sqrt(-7))/2");
    CHECK(elt(4, 1, -4).to_string() == "2 + 1*sqrt(-1)");
    CHECK((w * w) == elt(-3, 1, -7));
    CHECK(power(w, 3) == w * w * w);
    auto [x, y] = w.coordinates();
    CHECK(x == 0);
    CHECK(y == 1);
    CHECK(QuadraticElement::from_coordinates(-7, 0, 1) == w);

    const QuadraticIdeal p = prime_ideal(f, {2, 0}), q = prime_ideal(f, {2, 1});
    CHECK(p.norm() == 2);
    CHECK(contains(p, w));
    CHECK_FALSE(contains(q, w));
    CHECK(multiply(f, p, q) == principal_ideal(f, elt(4, 0, -7)));
    CHECK(principal_ideal(f, w) == p);
    CHECK(prime_ideal(f, {3, 0}).norm() == 9);  // 3 is inert
    CHECK(prime_ideal(f, {7, 0}).norm() == 7);  // 7 ramifies
    CHECK_THROWS_AS(prime_ideal(f, {7, 1}), input_error);

    // ideal classes multiply like forms
    std::mt19937_64 rng(5);
    for (std::int64_t D : {-23, -420, -3299}) {
        const auto field = class_group(D);
        std::vector<QuadraticIdeal> primes;
        for (std::int64_t ell = 2; ell < 60; ++ell) {
            if (!is_prime(ell) || kronecker(D, ell) < 0) continue;
            for (int i = 0; i < (kronecker(D, ell) == 1 ? 2 : 1); ++i) primes.push_back(prime_ideal(field, {ell, i}));
        }
        std::uniform_int_distribution<std::size_t> pick(0, primes.size() - 1);
        for (int t = 0; t < 50; ++t) {
            const auto& I = primes[pick(rng)];
            const auto& J = primes[pick(rng)];
            CHECK(form_of_ideal(field, multiply(field, I, J)) ==
                  compose(form_of_ideal(field, I), form_of_ideal(field, J)));
        }
        for (const Form& g : field.forms) CHECK(form_of_ideal(field, ideal_of_form(field, g)) == g);
    }
}

TEST_CASE("lattice generators") {
    const auto f = class_group(-23);
    for (auto [u, v] : {std::pair{3L, 1L}, {5L, 3L}, {-7L, 1L}, {4L, 0L}, {1L, 5L}}) {
        const QuadraticElement x = elt(u, v, -23);
        auto g = generator_of(f, principal_ideal(f, x));
        REQUIRE(g.has_value());
        CHECK(associates(f, *g, x));
        CHECK(g->norm() == x.norm());
    }
    CHECK_FALSE(generator_of(f, prime_ideal(f, {2, 0})).has_value());
}

TEST_CASE("prime class orders and principal generators") {
    CHECK(prime_class_order(class_group(-7), 2) == 1);
    CHECK(prime_class_order(class_group(-23), 2) == 3);
    CHECK(prime_class_order(class_group(-31), 2) == 3);
    CHECK_THROWS_AS(prime_class_order(class_group(-7), 3), input_error);

    const auto f7 = class_group(-7);
    const QuadraticElement a1 = principal_generator(f7, 2, 1);
    CHECK(a1 == elt(1, 1, -7));
    // 4 N(alpha) = a^2 + 7 b^2 = 2^(n+2)
    CHECK(a1.u * a1.u + 7 * a1.v * a1.v == 8);
    CHECK(associates(f7, principal_generator(f7, 2, 2), a1 * a1));
    CHECK(associates(f7, principal_generator(f7, 2, 6), power(principal_generator(f7, 2, 3), 2)));

    // (alpha) = p^n with p = (2, w): for -23 this is (-3 + sqrt -23)/2; (3 + sqrt -23)/2 = 1 + w generates the conjugate
    const auto f23 = class_group(-23);
    const QuadraticElement a3 = principal_generator(f23, 2, 3);
    CHECK(a3 == elt(-3, 1, -23));
    CHECK(a3.u * a3.u + 23 * a3.v * a3.v == 32);
    CHECK(contains(power(f23, prime_ideal(f23, {2, 0}), 3), a3));
    CHECK(contains(power(f23, prime_ideal(f23, {2, 1}), 3), elt(3, 1, -23)));
    CHECK_THROWS_AS(principal_generator(f23, 2, 1), input_error);
    CHECK_THROWS_AS(principal_generator_search(f23, 2, 2), input_error);

    // the lattice route agrees with the bounded exhaustive search
    for (std::int64_t ell = 7; ell < 400; ell += 8) {
        if (!is_prime(ell)) continue;
        const auto f = class_group(-ell);
        const std::int64_t n = prime_class_order(f, 2);
        CHECK(principal_generator(f, 2, n) == principal_generator_search(f, 2, n));
        CHECK(principal_generator(f, 2, n).v > 0);
        CHECK(principal_generator(f, 2, 2 * n).norm() == mpz_class(1) << (2 * n));
    }
    const auto f4 = class_group(-4);
    CHECK(principal_generator(f4, 5, 1) == principal_generator_search(f4, 5, 1));
    CHECK(principal_generator(f4, 5, 1).norm() == 5);
}

TEST_CASE("the 2-adic criterion") {
    CHECK_FALSE(criterion_515(7));
    CHECK(criterion_515(31));
    CHECK_FALSE(criterion_515(23));
    CHECK_THROWS_AS(criterion_515(13), input_error);
    CHECK_THROWS_AS(criterion_515(15), input_error);

    const auto row7 = criterion_515_details(7);
    CHECK(row7.n == 1);
    CHECK(row7.a == 1);
    CHECK(row7.b == 1);

    const auto rows = criterion_scan(7, 1000, 4);
    REQUIRE(rows.size() > 20);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) CHECK(rows[i - 1].ell < rows[i].ell);
        CHECK(rows[i].verdict == rows[i].mod16);
        if (rows[i].ell > 7) {
            CHECK(rows[i].n >= 3);
            CHECK(rows[i].n % 2 == 1);
            CHECK(rows[i].cond4 == rows[i].cond5);
        }
    }
    CHECK(criterion_scan(7, 200, 1).size() == 12);
}

TEST_CASE("prime descriptors, bases and indexed sets") {
    CHECK(PrimeDescriptor::parse("2.1") == PrimeDescriptor{2, 1});
    CHECK(PrimeDescriptor::parse("3") == PrimeDescriptor{3, 0});
    CHECK_THROWS_AS(PrimeDescriptor::parse("4"), input_error);
    CHECK_THROWS_AS(PrimeDescriptor::parse("2.x"), input_error);

    CHECK(BaseField::parse("Q").is_rational());
    CHECK(BaseField::parse("zeta3").field().D == -3);
    CHECK(BaseField::parse("Q(sqrt-7)").field().D == -7);
    CHECK(BaseField::parse("sqrt-1").field().D == -4);
    CHECK(BaseField::parse("-23").field().h() == 3);
    CHECK(BaseField::parse("Q(sqrt-7)").name() == "Q(sqrt-7)");
    CHECK_THROWS_AS(BaseField::parse("Q(sqrt2)"), input_error);
    CHECK_THROWS_AS(BaseField::parse("K"), input_error);

    const auto K = BaseField::quadratic(-7);
    CHECK(K.primes_above(2).size() == 2);
    CHECK(K.primes_above(3).size() == 1);
    CHECK(K.primes_above(7).size() == 1);
    CHECK(completion(K, {2, 0}).e == 1);
    CHECK(completion(K, {3, 0}).f == 2);
    CHECK(completion(K, {7, 0}).e == 2);

    auto S = parse_indexed_set("2.0:4,2.1:inf");
    REQUIRE(S.size() == 2);
    CHECK(S[1].nu.is_infinite());
    CHECK_THROWS_AS(modulus_of(S), input_error);
    CHECK(modulus_of(parse_indexed_set("3:5/2,5:0")) == Modulus{{{3, 0}, 3}});
    CHECK_THROWS_AS(parse_indexed_set("2.0:1,2.0:2"), input_error);
}

TEST_CASE("local deltas") {
    const auto Z3 = BaseField::quadratic(-3);
    CHECK(local_delta(Z3, completion(Z3, {3, 0}), 3) == 1);
    const auto K = BaseField::quadratic(-15);  // Q3(sqrt -15) = Q3(sqrt -3 * 5): 5 = 2 (mod 3) is not a square
    CHECK(local_delta(K, completion(K, {3, 0}), 3) == 0);
    const auto K7 = BaseField::quadratic(-7);
    CHECK(local_delta(K7, completion(K7, {2, 0}), 2) == 1);
    CHECK(local_delta(K7, completion(K7, {11, 0}), 5) == 1);  // N = 11, 5 | 10
    CHECK(local_delta(K7, completion(K7, {3, 0}), 2) == 1);   // N = 9
    CHECK(local_delta(K7, completion(K7, {3, 0}), 3) == 0);
}

TEST_CASE("ray class groups") {
    const auto Q = BaseField::rationals();
    auto r9 = ray_class_group(Q, {{{3, 0}, 2}}, 3);
    CHECK(r9.full.invariants() == V{3});
    CHECK(r9.p_rank == 1);
    CHECK(ray_class_group(Q, {{{2, 0}, 3}}, 2).full.invariants() == V{2});
    CHECK(ray_class_group(Q, {{{2, 0}, 5}}, 2).full.invariants() == V{8});
    CHECK(ray_class_group(Q, {{{3, 0}, 2}, {{7, 0}, 1}}, 3).full.invariants() == V{6, 3});
    CHECK(ray_class_group(Q, {{{3, 0}, 2}, {{7, 0}, 1}}, 3).p_part.invariants() == V{3, 3});
    CHECK(ray_class_group(Q, {}, 2).full.is_trivial());

    const auto K7 = BaseField::quadratic(-7);
    CHECK(ray_class_group(K7, split_two(2), 2).p_part.invariants() == V{2});
    CHECK(ray_class_group(K7, split_two(3), 2).p_part.invariants() == V{2, 2, 2});
    CHECK(ray_class_group(K7, split_two(4), 2).p_part.invariants() == V{4, 4, 2});

    // order formula on a field with nontrivial class group and mixed primes
    const auto K23 = BaseField::quadratic(-23);
    for (const Modulus& m : {Modulus{}, Modulus{{{2, 0}, 3}}, Modulus{{{3, 0}, 2}, {{23, 0}, 2}}, Modulus{{{5, 0}, 2}}}) {
        auto r = ray_class_group(K23, m, 3);
        CHECK(r.full.order() * r.unit_image == 3 * r.residue_units);
    }
    CHECK(ray_class_group(K23, {}, 3).full.invariants() == V{3});

    // p-rank is nondecreasing in the exponent
    for (const auto& [base, P, p] : {std::tuple{K7, PrimeDescriptor{2, 0}, std::int64_t{2}},
                                     std::tuple{BaseField::quadratic(-3), PrimeDescriptor{3, 0}, std::int64_t{3}},
                                     std::tuple{K23, PrimeDescriptor{3, 1}, std::int64_t{3}},
                                     std::tuple{Q, PrimeDescriptor{5, 0}, std::int64_t{5}}}) {
        int last = 0;
        for (std::int64_t k = 1; k <= 6; ++k) {
            const int r = ray_class_group(base, {{P, k}}, p).p_rank;
            CHECK(r >= last);
            last = r;
        }
    }
    CHECK_THROWS_AS(ray_class_group(Q, {{{3, 0}, 16}}, 3), guard_error);
    CHECK_THROWS_AS(ray_class_group(K7, {{{2, 0}, 2}, {{2, 0}, 3}}, 2), input_error);
}

TEST_CASE("Delta ranks") {
    const auto f7 = class_group(-7);
    CHECK(delta_rank_quadratic_p2(f7, {}) == 1);
    CHECK(delta_rank_quadratic_p2(f7, parse_indexed_set("2.0:1,2.1:1")) == 1);
    CHECK(delta_rank_quadratic_p2(f7, parse_indexed_set("2.0:4,2.1:4")) == 0);
    CHECK(delta_rank_quadratic_p2(f7, parse_indexed_set("2.0:inf,2.1:inf")) == 0);
    // the completion at 2.0 is Q_2, where -1 = 7 (mod 8) is not a square
    CHECK(delta_rank_quadratic_p2(f7, parse_indexed_set("2.0:3")) == 0);

    // S empty: rank Cl[2] + rank of the units = t - 1 + 1
    CHECK(delta_rank_quadratic_p2(class_group(-84), {}) == 3);
    CHECK(delta_rank_quadratic_p2(class_group(-420), {}) == 4);
    CHECK(delta_rank_quadratic_p2(class_group(-23), {}) == 1);

    const auto Q = BaseField::rationals();
    CHECK(delta_rank(Q, parse_indexed_set("2:1"), 2) == 1);
    CHECK(delta_rank(Q, parse_indexed_set("2:2"), 2) == 0);
    CHECK(delta_rank(Q, parse_indexed_set("3:2"), 3) == 0);
    CHECK(delta_rank(Q, parse_indexed_set("5:1"), 2) == 1);  // -1 = 4 is a square mod 5
    CHECK(delta_rank(Q, parse_indexed_set("3:1"), 2) == 0);  // -1 is not a square mod 3

    const auto Z3 = BaseField::quadratic(-3);
    CHECK(delta_rank(Z3, {}, 3) == 1);
    CHECK(delta_rank(Z3, parse_indexed_set("3.0:1"), 3) == 1);
    CHECK(delta_rank(Z3, parse_indexed_set("3.0:2"), 3) == 0);

    // h(-23) = 3: Cl[3] contributes a generator alpha with (alpha) = a^3
    const auto K23 = BaseField::quadratic(-23);
    CHECK(delta_rank(K23, {}, 3) == 1);
}

TEST_CASE("conductor-discriminant") {
    CHECK(kronecker_conductor(-4) == 4);
    CHECK(kronecker_conductor(8) == 8);
    CHECK(kronecker_conductor(-7) == 7);
    CHECK(kronecker_conductor(12) == 12);
    CHECK(quadratic_layer(2).disc == Factored{{2, 3}});
    CHECK(quadratic_layer(-1).disc == Factored{{2, 2}});
    CHECK(quadratic_layer(-2).disc == Factored{{2, 3}});
    CHECK(quadratic_layer(3).disc == Factored{{2, 2}, {3, 1}});
    CHECK(quadratic_layer(-7).disc == Factored{{7, 1}});
    CHECK_THROWS_AS(quadratic_layer(4), input_error);

    CHECK(cyclotomic_layer(2, 2).disc == Factored{{2, 2}});
    CHECK(cyclotomic_layer(2, 3).disc == Factored{{2, 8}});
    CHECK(cyclotomic_layer(3, 1).disc == Factored{{3, 1}});
    CHECK(cyclotomic_layer(3, 2).disc == Factored{{3, 9}});
    CHECK(cyclotomic_layer(3, 2).degree == 6);
    CHECK(cyclotomic_layer(5, 1).disc == Factored{{5, 3}});
    CHECK(cyclotomic_layer(3, 3).disc == Factored{{3, 45}});

    const auto layer = rayclass_layer_q(9, 3);
    CHECK(layer.degree == 3);
    CHECK(layer.disc == Factored{{3, 4}});
    CHECK(layer.conductors == V{1, 9, 9});
    CHECK(rayclass_layer_q(8, 2).disc == Factored{{2, 3}});  // Q(sqrt 2)
    CHECK(rayclass_layer_q(8, 2).degree == 2);
    CHECK(rayclass_layer_q(27, 3).degree == 9);
    CHECK(rayclass_layer_q(25, 5).degree == 5);
    CHECK(rayclass_layer_q(2, 2).degree == 1);
}
