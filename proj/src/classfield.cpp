#include "ramify/classfield.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "ramify/errors.hpp"
#include "ramify/numtheory.hpp"

namespace ramify {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 x) {
    if (x > INT64_MAX || x < INT64_MIN) throw std::overflow_error("quadratic form coefficient overflow");
    return static_cast<std::int64_t>(x);
}

// (g, s, t) with s a + t b = g = gcd(a, b) >= 0
std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b) {
    std::int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
        std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
    }
    if (r0 < 0) return {-r0, -s0, -t0};
    return {r0, s0, t0};
}

std::int64_t to_int64(const mpz_class& x) {
    if (!x.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
    return x.get_si();
}

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

mpz_class mpz_mod(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// reduction of a positive definite form with big coefficients
BinaryQuadraticForm reduce_big(mpz_class a, mpz_class b, mpz_class c) {
    auto normalize = [&] {
        if (-a < b && b <= a) return;
        mpz_class r = floor_div(a - b, 2 * a);
        mpz_class nc = a * r * r + b * r + c;
        b += 2 * r * a;
        c = nc;
    };
    normalize();
    while (a > c) {
        std::swap(a, c);
        b = -b;
        normalize();
    }
    if (a == c && b < 0) b = -b;
    return {to_int64(a), to_int64(b), to_int64(c)};
}

}  // namespace

// ---------------------------------------------------------------------------
// forms

std::int64_t BinaryQuadraticForm::discriminant() const { return narrow(i128(b) * b - i128(4) * a * c); }

bool BinaryQuadraticForm::is_reduced() const {
    if (a <= 0 || std::abs(b) > a || a > c) return false;
    if ((std::abs(b) == a || a == c) && b < 0) return false;
    return true;
}

std::string BinaryQuadraticForm::to_string() const {
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

BinaryQuadraticForm reduce(BinaryQuadraticForm f) {
    if (f.a <= 0 || f.discriminant() >= 0) throw input_error("not_positive_definite", "form is not positive definite");
    auto normalize = [&f] {
        if (-f.a < f.b && f.b <= f.a) return;
        // r = floor((a - b) / 2a)
        i128 num = i128(f.a) - f.b, den = i128(2) * f.a;
        i128 r = num / den;
        if ((num % den != 0) && ((num < 0) != (den < 0))) --r;
        f.c = narrow(i128(f.a) * r * r + i128(f.b) * r + f.c);
        f.b = narrow(f.b + 2 * r * f.a);
    };
    normalize();
    while (f.a > f.c) {
        std::swap(f.a, f.c);
        f.b = -f.b;
        normalize();
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
}

BinaryQuadraticForm compose(const BinaryQuadraticForm& f, const BinaryQuadraticForm& g) {
    if (f.discriminant() != g.discriminant()) throw input_error("discriminant_mismatch", "forms of different discriminant");
    BinaryQuadraticForm f1 = f, f2 = g;
    if (f1.a > f2.a) std::swap(f1, f2);
    const std::int64_t a1 = f1.a, b1 = f1.b, a2 = f2.a, b2 = f2.b, c2 = f2.c;
    const std::int64_t s = (b1 + b2) / 2, n = b2 - s;
    std::int64_t y1, d;
    if (a2 % a1 == 0) {
        y1 = 0;
        d = a1;
    } else {
        auto [gg, u, v] = ext_gcd(a2, a1);
        (void)v;
        d = gg;
        y1 = u;
    }
    std::int64_t x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        auto [gg, u, v] = ext_gcd(s, d);
        x2 = u;
        y2 = -v;
        d1 = gg;
    }
    const std::int64_t v1 = a1 / d1, v2 = a2 / d1;
    i128 r = (i128(y1) * y2 % v1 * n - i128(x2) * c2) % v1;
    if (r < 0) r += v1;
    const i128 b3 = i128(b2) + 2 * i128(v2) * r;
    const i128 a3 = i128(v1) * v2;
    const i128 c3 = (i128(c2) * d1 + r * (i128(b2) + i128(v2) * r)) / v1;
    return reduce({narrow(a3), narrow(b3), narrow(c3)});
}

BinaryQuadraticForm identity_form(std::int64_t D) {
    if (D >= 0 || mod(D, 4) > 1) throw input_error("bad_discriminant", "need D < 0 with D = 0, 1 (mod 4)");
    const std::int64_t b = mod(D, 2);
    return {1, b, (b * b - D) / 4};
}

BinaryQuadraticForm inverse(const BinaryQuadraticForm& f) { return reduce({f.a, -f.b, f.c}); }

BinaryQuadraticForm power(const BinaryQuadraticForm& f, std::int64_t k) {
    BinaryQuadraticForm base = k < 0 ? inverse(f) : reduce(f);
    if (k < 0) k = -k;
    BinaryQuadraticForm result = identity_form(f.discriminant());
    while (k > 0) {
        if (k & 1) result = compose(result, base);
        k >>= 1;
        if (k) base = compose(base, base);
    }
    return result;
}

std::vector<BinaryQuadraticForm> reduced_forms(std::int64_t D) {
    identity_form(D);
    std::vector<BinaryQuadraticForm> out;
    for (std::int64_t a = 1; 3 * a * a <= -D; ++a)
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            if (mod(b, 2) != mod(D, 2)) continue;
            const std::int64_t num = b * b - D;
            if (num % (4 * a) != 0) continue;
            const std::int64_t c = num / (4 * a);
            BinaryQuadraticForm f{a, b, c};
            if (!f.is_reduced()) continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
            out.push_back(f);
        }
    return out;
}

// ---------------------------------------------------------------------------
// class groups

namespace {

bool form_less(const BinaryQuadraticForm& x, const BinaryQuadraticForm& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
}

}  // namespace

std::size_t QuadraticFieldData::index_of(const BinaryQuadraticForm& f) const {
    const BinaryQuadraticForm g = reduce(f);
    auto it = std::lower_bound(forms.begin(), forms.end(), g, form_less);
    if (it == forms.end() || !(*it == g)) throw internal_error("form is not in the class group");
    return static_cast<std::size_t>(it - forms.begin());
}

std::vector<std::int64_t> QuadraticFieldData::log(const BinaryQuadraticForm& f) const { return logs.at(index_of(f)); }

QuadraticFieldData class_group(std::int64_t D) {
    if (D >= 0) throw input_error("bad_discriminant", "only imaginary quadratic fields are supported");
    if (!is_fundamental_discriminant(D)) throw input_error("bad_discriminant", "not a fundamental discriminant");
    if (D < -1'000'000) throw input_error("bad_discriminant", "|D| exceeds 10^6");
    QuadraticFieldData field;
    field.D = D;
    field.d = mod(D, 4) == 1 ? D : D / 4;
    field.w = D == -3 ? 6 : D == -4 ? 4 : 2;
    field.forms = reduced_forms(D);
    std::sort(field.forms.begin(), field.forms.end(), form_less);

    const QuadraticFieldData& ref = field;
    EnumeratedGroup group(field.forms.size(), static_cast<std::uint32_t>(field.index_of(identity_form(D))),
                          [&ref](std::uint32_t x, std::uint32_t y) {
                              return static_cast<std::uint32_t>(ref.index_of(compose(ref.forms[x], ref.forms[y])));
                          });
    field.structure = group.structure();
    for (auto g : group.generators()) field.generators.push_back(field.forms[g]);
    field.generator_orders = group.generator_orders();
    for (std::uint32_t i = 0; i < field.forms.size(); ++i) field.logs.push_back(group.log(i));
    return field;
}

// ---------------------------------------------------------------------------
// elements

mpz_class QuadraticElement::norm() const { return (u * u - mpz_class(static_cast<long>(D)) * v * v) / 4; }

std::pair<mpz_class, mpz_class> QuadraticElement::coordinates() const {
    if (mod(D, 2) == 1) return {(u - v) / 2, v};
    return {u / 2, v};
}

QuadraticElement QuadraticElement::from_coordinates(std::int64_t D, const mpz_class& x, const mpz_class& y) {
    if (mod(D, 2) == 1) return {2 * x + y, y, D};
    return {2 * x, y, D};
}

std::string QuadraticElement::to_string() const {
    std::ostringstream out;
    auto sign_term = [&](const mpz_class& coeff, const std::string& root) {
        out << (coeff < 0 ? " - " : " + ") << abs(coeff) << "*sqrt(" << root << ")";
    };
    if (mod(D, 2) == 1) {
        out << "(" << u;
        sign_term(v, std::to_string(D));
        out << ")/2";
    } else {
        out << mpz_class(u / 2);
        sign_term(v, std::to_string(D / 4));
    }
    return out.str();
}

QuadraticElement operator*(const QuadraticElement& x, const QuadraticElement& y) {
    if (x.D != y.D) throw internal_error("elements of different fields");
    const mpz_class D(static_cast<long>(x.D));
    return {(x.u * y.u + D * x.v * y.v) / 2, (x.u * y.v + x.v * y.u) / 2, x.D};
}

QuadraticElement power(const QuadraticElement& x, std::int64_t k) {
    if (k < 0) throw input_error("bad_exponent", "negative power of an element");
    QuadraticElement result{2, 0, x.D}, base = x;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

// ---------------------------------------------------------------------------
// ideals

namespace {

using Vec2 = std::pair<mpz_class, mpz_class>;

Vec2 mul_coords(const QuadraticFieldData& field, const Vec2& a, const Vec2& b) {
    const mpz_class T(static_cast<long>(field.omega_trace())), N(static_cast<long>(field.omega_norm()));
    return {a.first * b.first - N * a.second * b.second,
            a.first * b.second + a.second * b.first + T * a.second * b.second};
}

QuadraticIdeal hnf(const std::vector<Vec2>& gens) {
    Vec2 pivot{0, 0};
    mpz_class A = 0;
    for (const Vec2& v : gens) {
        if (v.second == 0) {
            A = gcd(A, v.first);
            continue;
        }
        if (pivot.second == 0) {
            pivot = v;
            continue;
        }
        mpz_class g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), pivot.second.get_mpz_t(), v.second.get_mpz_t());
        Vec2 next{s * pivot.first + t * v.first, g};
        const mpz_class leftover = (v.second / g) * pivot.first - (pivot.second / g) * v.first;
        A = gcd(A, leftover);
        pivot = next;
    }
    if (pivot.second == 0 || A == 0) throw internal_error("ideal lattice is not of full rank");
    if (pivot.second < 0) pivot = {-pivot.first, -pivot.second};
    QuadraticIdeal I{abs(A), mpz_mod(pivot.first, abs(A)), pivot.second};
    return I;
}

std::vector<Vec2> basis(const QuadraticIdeal& I) { return {{I.A, 0}, {I.B, I.C}}; }

}  // namespace

QuadraticIdeal principal_ideal(const QuadraticFieldData& field, const QuadraticElement& x) {
    if (x.u == 0 && x.v == 0) throw input_error("zero_ideal", "the zero ideal");
    const Vec2 c = x.coordinates();
    return hnf({c, mul_coords(field, c, {0, 1})});
}

QuadraticIdeal multiply(const QuadraticFieldData& field, const QuadraticIdeal& I, const QuadraticIdeal& J) {
    std::vector<Vec2> gens;
    for (const Vec2& a : basis(I))
        for (const Vec2& b : basis(J)) gens.push_back(mul_coords(field, a, b));
    return hnf(gens);
}

QuadraticIdeal power(const QuadraticFieldData& field, const QuadraticIdeal& I, std::int64_t k) {
    if (k < 0) throw input_error("bad_exponent", "negative power of an ideal");
    QuadraticIdeal result, base = I;
    while (k > 0) {
        if (k & 1) result = multiply(field, result, base);
        k >>= 1;
        if (k) base = multiply(field, base, base);
    }
    return result;
}

bool contains(const QuadraticIdeal& I, const QuadraticElement& x) {
    auto [cx, cy] = x.coordinates();
    if (!mpz_divisible_p(cy.get_mpz_t(), I.C.get_mpz_t())) return false;
    mpz_class rest = cx - I.B * (cy / I.C);
    return mpz_divisible_p(rest.get_mpz_t(), I.A.get_mpz_t()) != 0;
}

QuadraticIdeal ideal_of_form(const QuadraticFieldData& field, const BinaryQuadraticForm& f) {
    if (f.discriminant() != field.D) throw input_error("discriminant_mismatch", "form of the wrong discriminant");
    // (-b + sqrt D)/2 in the basis 1, w
    mpz_class x = mod(field.D, 2) == 1 ? mpz_class(static_cast<long>((-f.b - 1) / 2)) : mpz_class(static_cast<long>(-f.b / 2));
    return hnf({{mpz_class(static_cast<long>(f.a)), 0}, {x, 1}});
}

BinaryQuadraticForm form_of_ideal(const QuadraticFieldData& field, const QuadraticIdeal& I) {
    const mpz_class a = I.A / I.C, Bp = I.B / I.C;
    const mpz_class b = mod(field.D, 2) == 1 ? mpz_class(-(2 * Bp + 1)) : mpz_class(-2 * Bp);
    const mpz_class c = (b * b - field.D) / (4 * a);
    check_internal(b * b - 4 * a * c == field.D, "ideal does not give a form of the field discriminant");
    return reduce_big(a, b, c);
}

std::optional<QuadraticElement> generator_of(const QuadraticFieldData& field, const QuadraticIdeal& I) {
    const mpz_class T(static_cast<long>(field.omega_trace())), N(static_cast<long>(field.omega_norm()));
    auto Q = [&](const Vec2& v) -> mpz_class { return v.first * v.first + T * v.first * v.second + N * v.second * v.second; };
    // twice the bilinear form
    auto B2 = [&](const Vec2& v, const Vec2& w) -> mpz_class {
        return v.first * (2 * w.first + T * w.second) + v.second * (T * w.first + 2 * N * w.second);
    };
    Vec2 v1{I.A, 0}, v2{I.B, I.C};
    if (Q(v2) < Q(v1)) std::swap(v1, v2);
    for (;;) {
        const mpz_class q1 = Q(v1);
        const mpz_class m = floor_div(B2(v1, v2) + q1, 2 * q1);  // round(B(v1,v2)/Q(v1))
        v2 = {v2.first - m * v1.first, v2.second - m * v1.second};
        if (Q(v2) < q1) std::swap(v1, v2);
        else break;
    }
    if (Q(v1) != I.norm()) return std::nullopt;
    return QuadraticElement::from_coordinates(field.D, v1.first, v1.second);
}

// ---------------------------------------------------------------------------
// primes and completions

std::string PrimeDescriptor::to_string(bool over_q) const {
    return over_q ? std::to_string(q) : std::to_string(q) + "." + std::to_string(index);
}

PrimeDescriptor PrimeDescriptor::parse(const std::string& text) {
    PrimeDescriptor P;
    try {
        std::size_t pos = 0;
        P.q = std::stoll(text, &pos);
        if (pos < text.size()) {
            if (text[pos] != '.') throw std::invalid_argument("separator");
            std::size_t rest = 0;
            P.index = std::stoi(text.substr(pos + 1), &rest);
            if (pos + 1 + rest != text.size()) throw std::invalid_argument("trailing");
        }
    } catch (const std::exception&) {
        throw input_error("bad_prime", "bad prime descriptor '" + text + "'");
    }
    if (!is_prime(P.q) || P.index < 0) throw input_error("bad_prime", "bad prime descriptor '" + text + "'");
    return P;
}

namespace {

std::vector<std::int64_t> omega_roots_mod(const QuadraticFieldData& field, std::int64_t q) {
    std::vector<std::int64_t> roots;
    const std::int64_t T = field.omega_trace(), N = field.omega_norm();
    for (std::int64_t r = 0; r < q; ++r)
        if (mod(mulmod(r, r, q) - mulmod(T, r, q) + mod(N, q), q) == 0) roots.push_back(r);
    return roots;
}

void check_index(const std::vector<std::int64_t>& roots, const PrimeDescriptor& P) {
    const std::size_t count = roots.empty() ? 1 : roots.size();
    if (static_cast<std::size_t>(P.index) >= count)
        throw input_error("bad_prime", "no prime " + P.to_string(false) + " in this field");
}

}  // namespace

QuadraticIdeal prime_ideal(const QuadraticFieldData& field, const PrimeDescriptor& P) {
    const auto roots = omega_roots_mod(field, P.q);
    check_index(roots, P);
    const mpz_class q(static_cast<long>(P.q));
    if (roots.empty()) return {q, 0, q};
    return hnf({{q, 0}, {-roots[P.index], 1}});
}

BaseField BaseField::rationals() { return BaseField(); }

BaseField BaseField::quadratic(std::int64_t D) {
    BaseField b;
    b.field_ = std::make_shared<const QuadraticFieldData>(class_group(D));
    return b;
}

BaseField BaseField::parse(const std::string& text) {
    if (text == "Q") return rationals();
    if (text == "zeta3" || text == "Q(zeta3)") return quadratic(-3);
    std::string body = text;
    if (body.rfind("Q(", 0) == 0 && body.back() == ')') body = body.substr(2, body.size() - 3);
    bool radicand = false;
    if (body.rfind("sqrt", 0) == 0) {
        body = body.substr(4);
        radicand = true;
    }
    std::int64_t n = 0;
    try {
        std::size_t pos = 0;
        n = std::stoll(body, &pos);
        if (pos != body.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw input_error("bad_base", "unknown base field '" + text + "'");
    }
    if (radicand) {
        if (n >= 0 || !is_squarefree(-n)) throw input_error("bad_base", "need a negative squarefree radicand");
        return quadratic(fundamental_discriminant(n));
    }
    return quadratic(n);
}

const QuadraticFieldData& BaseField::field() const {
    if (!field_) throw input_error("bad_base", "the base field is Q");
    return *field_;
}

std::string BaseField::name() const {
    if (is_rational()) return "Q";
    if (field_->D == -3) return "Q(zeta3)";
    return "Q(sqrt" + std::to_string(field_->d) + ")";
}

std::vector<std::pair<std::int64_t, std::int64_t>> BaseField::disc_factored() const {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    if (is_rational()) return out;
    for (auto [q, e] : factorize(-field_->D)) out.emplace_back(q, e);
    return out;
}

std::vector<PrimeDescriptor> BaseField::primes_above(std::int64_t q) const {
    if (!is_prime(q)) throw input_error("bad_prime", std::to_string(q) + " is not prime");
    if (is_rational()) return {{q, 0}};
    const auto roots = omega_roots_mod(*field_, q);
    std::vector<PrimeDescriptor> out;
    const int count = roots.size() == 2 ? 2 : 1;
    for (int i = 0; i < count; ++i) out.push_back({q, i});
    return out;
}

Completion completion(const BaseField& base, const PrimeDescriptor& P) {
    Completion c;
    c.prime = P;
    c.model.p = P.q;
    c.norm = P.q;
    if (base.is_rational()) {
        if (P.index != 0) throw input_error("bad_prime", "prime descriptors over Q have no index");
        c.model.minpoly = {0, 1};
        return c;
    }
    const QuadraticFieldData& field = base.field();
    const auto roots = omega_roots_mod(field, P.q);
    check_index(roots, P);
    const int kr = kronecker(field.D, P.q);
    if (kr == 1) {
        c.model.minpoly = {0, 1};
    } else if (kr == -1) {
        c.f = 2;
        c.norm = P.q * P.q;
        c.model.f = 2;
        c.model.minpoly = {mpz_class(static_cast<long>(field.omega_norm())),
                           mpz_class(static_cast<long>(-field.omega_trace())), 1};
    } else {
        c.e = 2;
        c.model.e = 2;
        c.model.eisenstein = true;
        if (P.q != 2) {
            // pi = sqrt(D) or sqrt(D/4)
            const std::int64_t r = mod(field.D, 2) == 1 ? field.D : field.D / 4;
            c.model.minpoly = {mpz_class(static_cast<long>(-r)), 0, 1};
        } else if (mod(field.d, 4) == 2) {
            c.model.minpoly = {mpz_class(static_cast<long>(-field.d)), 0, 1};
        } else {
            c.model.minpoly = {mpz_class(static_cast<long>(1 - field.d)), 2, 1};  // pi = sqrt(d) - 1
        }
    }
    return c;
}

LocalRing::Elem embed(const BaseField& base, const Completion& P, const LocalRing& ring, const mpz_class& x,
                      const mpz_class& y) {
    if (base.is_rational()) {
        if (y != 0) throw internal_error("non-rational element over Q");
        return ring.from_integers({x});
    }
    const QuadraticFieldData& field = base.field();
    mpz_class big;
    mpz_ui_pow_ui(big.get_mpz_t(), static_cast<unsigned long>(P.prime.q),
                  static_cast<unsigned long>(std::max<std::int64_t>(ring.precision(), 1)));
    std::vector<mpz_class> omega;  // image of w
    if (P.e == 1 && P.f == 1) {
        // Hensel lift of the chosen root
        const auto roots = omega_roots_mod(field, P.prime.q);
        const mpz_class T(static_cast<long>(field.omega_trace())), N(static_cast<long>(field.omega_norm()));
        mpz_class r(static_cast<long>(roots.at(P.prime.index)));
        for (std::int64_t i = 0; i < ring.precision(); ++i) {
            mpz_class fr = r * r - T * r + N, df = 2 * r - T, inv;
            if (!mpz_invert(inv.get_mpz_t(), df.get_mpz_t(), big.get_mpz_t()))
                throw internal_error("Hensel lift: derivative not invertible");
            r = mpz_mod(r - fr * inv, big);
        }
        omega = {r};
    } else if (P.f == 2) {
        omega = {0, 1};
    } else if (P.prime.q != 2) {
        if (mod(field.D, 2) == 1) {
            mpz_class inv2, two = 2;
            mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), big.get_mpz_t());
            omega = {inv2, inv2};  // (1 + sqrt D)/2
        } else {
            omega = {0, 1};
        }
    } else if (mod(field.d, 4) == 2) {
        omega = {0, 1};
    } else {
        omega = {1, 1};
    }
    std::vector<mpz_class> coords(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) coords[i] = y * omega[i];
    coords[0] += x;
    return ring.from_integers(coords);
}

int local_delta(const BaseField& base, const Completion& P, std::int64_t p) {
    if (P.prime.q != p) return (P.norm - 1) % p == 0 ? 1 : 0;
    if (p == 2) return 1;
    if (p == 3 && P.e == 2 && !base.is_rational()) return mod(base.field().D / -3, 3) == 1 ? 1 : 0;
    return 0;
}

// ---------------------------------------------------------------------------
// indexed sets

IndexedSet parse_indexed_set(const std::string& text) {
    IndexedSet S;
    if (text.empty()) return S;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw input_error("bad_indexed_set", "expected prime:depth, got '" + item + "'");
        S.push_back({PrimeDescriptor::parse(item.substr(0, colon)), DepthIndex::parse(item.substr(colon + 1))});
    }
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (S[i].prime == S[j].prime) throw input_error("bad_indexed_set", "prime listed twice");
    return S;
}

Modulus modulus_of(const IndexedSet& S) {
    Modulus m;
    for (const auto& [P, nu] : S) {
        if (nu.is_infinite()) throw input_error("infinite_depth", "ray class modulus needs finite depths");
        if (nu.ceil() > 0) m.emplace_back(P, nu.ceil());
    }
    return m;
}

// ---------------------------------------------------------------------------
// ray class groups

namespace {

QuadraticElement unit_generator(const QuadraticFieldData& field) {
    if (field.w == 6) return {1, 1, field.D};  // (1 + sqrt -3)/2
    if (field.w == 4) return {0, 1, field.D};  // sqrt -1
    return {-2, 0, field.D};
}

// ideal coprime to `avoid` in the class of f
QuadraticIdeal coprime_representative(const QuadraticFieldData& field, const BinaryQuadraticForm& f,
                                      std::int64_t avoid) {
    auto value = [&](std::int64_t x, std::int64_t y) { return i128(f.a) * x * x + i128(f.b) * x * y + i128(f.c) * y * y; };
    for (std::int64_t bound = 1; bound < 1000; ++bound)
        for (std::int64_t x = -bound; x <= bound; ++x)
            for (std::int64_t y : {-bound, bound}) {
                for (auto [xx, yy] : {std::pair{x, y}, std::pair{y, x}}) {
                    if (std::gcd(xx, yy) != 1) continue;
                    const std::int64_t n = narrow(value(xx, yy));
                    if (std::gcd(n, avoid) != 1) continue;
                    auto [g, t, s] = ext_gcd(xx, yy);  // t xx + s yy = 1
                    (void)g;
                    // matrix [[xx, -s], [yy, t]] of determinant 1
                    const std::int64_t ms = -s, mt = t;
                    BinaryQuadraticForm h{n, narrow(2 * i128(f.a) * xx * ms + i128(f.b) * (i128(xx) * mt + i128(yy) * ms) + 2 * i128(f.c) * yy * mt),
                                          narrow(value(ms, mt))};
                    QuadraticIdeal I = ideal_of_form(field, h);
                    check_internal(form_of_ideal(field, I) == reduce(f), "coprime representative left the class");
                    return I;
                }
            }
    throw internal_error("no ideal coprime to the modulus found in the class");
}

std::int64_t element_order(const std::vector<std::int64_t>& e, const std::vector<std::int64_t>& orders) {
    std::int64_t k = 1;
    for (std::size_t i = 0; i < e.size(); ++i) k = std::lcm(k, orders[i] / std::gcd(mod(e[i], orders[i]), orders[i]));
    return k;
}

}  // namespace

RayClassResult ray_class_group(const BaseField& base, const Modulus& m, std::int64_t p) {
    if (!is_prime(p)) throw input_error("bad_prime", "p must be prime");
    RayClassResult out;
    out.modulus = m;
    long double norm = 1;
    std::int64_t avoid = 1;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (m[i].first == m[j].first) throw input_error("bad_modulus", "prime listed twice");
        if (m[i].second < 0) throw input_error("bad_modulus", "negative exponent");
        norm *= std::pow(static_cast<long double>(completion(base, m[i].first).norm), m[i].second);
        avoid *= m[i].first.q;
    }
    check_guard(norm, "ray class modulus norm");

    // (O/m)^x as the product of the local unit groups
    std::vector<Completion> places;
    std::vector<std::unique_ptr<UnitFiltrationGroup>> local;
    std::vector<std::int64_t> orders;
    for (const auto& [P, k] : m) {
        if (k == 0) continue;
        places.push_back(completion(base, P));
        local.push_back(std::make_unique<UnitFiltrationGroup>(places.back().model, 0, k));
        for (auto o : local.back()->group().generator_orders()) orders.push_back(o);
        out.residue_units *= static_cast<std::int64_t>(local.back()->group().size());
    }
    auto residue_log = [&](const QuadraticElement& z) {
        std::vector<std::int64_t> e;
        auto [x, y] = z.coordinates();
        for (std::size_t i = 0; i < local.size(); ++i) {
            auto part = local[i]->log(embed(base, places[i], local[i]->ring(), x, y));
            e.insert(e.end(), part.begin(), part.end());
        }
        return e;
    };
    auto integer_log = [&](const mpz_class& x) {
        std::vector<std::int64_t> e;
        for (std::size_t i = 0; i < local.size(); ++i) {
            auto part = local[i]->log(embed(base, places[i], local[i]->ring(), x));
            e.insert(e.end(), part.begin(), part.end());
        }
        return e;
    };

    const std::size_t nres = orders.size();
    const std::size_t ncl = base.is_rational() ? 0 : base.field().generators.size();
    std::vector<std::vector<std::int64_t>> rel;
    for (std::size_t i = 0; i < nres; ++i) {
        std::vector<std::int64_t> row(nres + ncl, 0);
        row[i] = orders[i];
        rel.push_back(row);
    }
    // global units
    {
        std::vector<std::int64_t> e = base.is_rational() ? integer_log(-1) : residue_log(unit_generator(base.field()));
        out.unit_image = element_order(e, orders);
        e.resize(nres + ncl, 0);
        rel.push_back(e);
    }
    // lifts of the class group generators: k_j [a_j] = image of alpha_j, (alpha_j) = a_j^k_j
    if (!base.is_rational()) {
        const QuadraticFieldData& field = base.field();
        for (std::size_t j = 0; j < ncl; ++j) {
            const std::int64_t k = field.generator_orders[j];
            QuadraticIdeal a = coprime_representative(field, field.generators[j], avoid);
            auto alpha = generator_of(field, power(field, a, k));
            check_internal(alpha.has_value(), "power of a class group generator is not principal");
            std::vector<std::int64_t> row = residue_log(*alpha);
            for (auto& v : row) v = -v;
            row.resize(nres + ncl, 0);
            row[nres + j] = k;
            rel.push_back(row);
        }
    }
    out.full = structure_from_relations(rel, nres + ncl);
    out.p_part = out.full.p_part(p);
    out.p_rank = out.full.p_rank(p);
    check_internal(out.full.order() * out.unit_image == base.class_number() * out.residue_units,
                   "ray class group order formula violated");
    return out;
}

// ---------------------------------------------------------------------------
// Delta ranks

int delta_rank(const BaseField& base, const IndexedSet& S, std::int64_t p) {
    if (!is_prime(p)) throw input_error("bad_prime", "p must be prime");
    // generators of Delta / K^{xp}: roots of unity, then alpha_c with (alpha_c) = a_c^p for a basis of Cl[p]
    std::vector<QuadraticElement> gens;
    const std::int64_t D = base.is_rational() ? 1 : base.field().D;
    if (base.is_rational()) {
        if (p == 2) gens.push_back({-2, 0, D});
    } else {
        const QuadraticFieldData& field = base.field();
        if (field.w % p == 0) gens.push_back(unit_generator(field));
        for (std::size_t j = 0; j < field.generators.size(); ++j) {
            const std::int64_t k = field.generator_orders[j];
            if (k % p != 0) continue;
            QuadraticIdeal a = ideal_of_form(field, power(field.generators[j], k / p));
            auto alpha = generator_of(field, power(field, a, p));
            check_internal(alpha.has_value(), "p-th power of a p-torsion class is not principal");
            gens.push_back(*alpha);
        }
    }

    std::vector<std::pair<Completion, DepthIndex>> places;
    for (const auto& [P, nu] : S) {
        if (!nu.is_infinite() && nu.value() == Rational(0)) continue;  // U^(0): no condition beyond S
        places.emplace_back(completion(base, P), nu);
    }

    const std::size_t r = gens.size();
    std::int64_t total = 1;
    for (std::size_t i = 0; i < r; ++i) total *= p;
    std::int64_t passing = 0;
    for (std::int64_t code = 0; code < total; ++code) {
        QuadraticElement x{2, 0, D};
        std::int64_t c = code;
        for (std::size_t i = 0; i < r; ++i, c /= p) {
            const std::int64_t k = c % p;
            if (k) x = x * power(gens[i], k);
        }
        bool ok = true;
        for (const auto& [place, nu] : places) {
            // x = u/2 over Q (v = 0)
            const mpz_class n = base.is_rational() ? mpz_class(abs(x.u) / 2) : x.norm();
            const std::int64_t precision = valuation(n, place.prime.q) + membership_precision(place.model, nu, p);
            LocalRing ring(place.model, precision);
            LocalRing::Elem image = [&] {
                if (base.is_rational()) return embed(base, place, ring, x.u / 2);
                auto [cx, cy] = x.coordinates();
                return embed(base, place, ring, cx, cy);
            }();
            if (!in_pth_powers_times_units(ring, image, nu, p)) {
                ok = false;
                break;
            }
        }
        if (ok) ++passing;
    }
    int rank = 0;
    std::int64_t size = 1;
    while (size < passing) {
        size *= p;
        ++rank;
    }
    check_internal(size == passing, "elements passing the local tests do not form a subgroup");
    return rank;
}

int delta_rank_quadratic_p2(const QuadraticFieldData& field, const IndexedSet& S) {
    return delta_rank(BaseField::quadratic(field.D), S, 2);
}

// ---------------------------------------------------------------------------
// principal generators

namespace {

void require_not_inert(const QuadraticFieldData& field, std::int64_t q) {
    if (!is_prime(q)) throw input_error("bad_prime", std::to_string(q) + " is not prime");
    if (kronecker(field.D, q) < 0) throw input_error("inert_prime", std::to_string(q) + " is inert: no prime of norm q");
}

QuadraticElement normalise_associate(const QuadraticFieldData& field, const QuadraticElement& alpha) {
    // v > 0 (or v = 0, u > 0); among several such associates the smallest v, then the largest u
    QuadraticElement best = alpha, z = alpha;
    bool have = false;
    const QuadraticElement unit = unit_generator(field);
    for (int i = 0; i < field.w; ++i, z = z * unit) {
        const bool positive = z.v > 0 || (z.v == 0 && z.u > 0);
        if (!positive) continue;
        if (!have || z.v < best.v || (z.v == best.v && z.u > best.u)) best = z;
        have = true;
    }
    return best;
}

}  // namespace

std::int64_t prime_class_order(const QuadraticFieldData& field, std::int64_t q) {
    require_not_inert(field, q);
    const BinaryQuadraticForm f = form_of_ideal(field, prime_ideal(field, {q, 0}));
    const auto e = field.log(f);
    return element_order(e, field.generator_orders);
}

QuadraticElement principal_generator(const QuadraticFieldData& field, std::int64_t q, std::int64_t n) {
    require_not_inert(field, q);
    if (n <= 0) throw input_error("bad_exponent", "n must be positive");
    auto alpha = generator_of(field, power(field, prime_ideal(field, {q, 0}), n));
    if (!alpha) throw input_error("not_principal", "the class order does not divide n");
    return normalise_associate(field, *alpha);
}

QuadraticElement principal_generator_search(const QuadraticFieldData& field, std::int64_t q, std::int64_t n) {
    require_not_inert(field, q);
    if (n <= 0) throw input_error("bad_exponent", "n must be positive");
    const QuadraticIdeal I = power(field, prime_ideal(field, {q, 0}), n);
    const long double bound_f =
        2.0L * std::pow(static_cast<long double>(q), n / 2.0L) / std::sqrt(static_cast<long double>(-field.D)) + 1;
    check_guard(2 * bound_f + 1, "norm equation search");
    const std::int64_t bound = static_cast<std::int64_t>(bound_f);
    mpz_class four_qn;
    mpz_ui_pow_ui(four_qn.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(n));
    four_qn *= 4;
    const mpz_class D(static_cast<long>(field.D));
    for (std::int64_t v = -bound; v <= bound; ++v) {
        const mpz_class vv(static_cast<long>(v));
        const mpz_class u2 = four_qn + D * vv * vv;
        if (u2 < 0 || !mpz_perfect_square_p(u2.get_mpz_t())) continue;
        const mpz_class u = sqrt(u2);
        for (const mpz_class& su : {u, mpz_class(-u)}) {
            QuadraticElement z{su, vv, field.D};
            if (contains(I, z)) return normalise_associate(field, z);
        }
    }
    throw input_error("no_generator", "no generator within the search bound");
}

// ---------------------------------------------------------------------------
// the 2-adic criterion

CriterionRow criterion_515_details(std::int64_t ell) {
    if (!is_prime(ell) || mod(ell, 8) != 7) throw input_error("precondition", "need a prime ell = 7 (mod 8)");
    const BaseField base = BaseField::quadratic(-ell);
    const QuadraticFieldData& field = base.field();
    CriterionRow row;
    row.ell = ell;
    row.n = prime_class_order(field, 2);
    const QuadraticElement alpha = principal_generator(field, 2, row.n);
    const QuadraticElement tau = alpha.conjugate();
    row.a = tau.u;
    row.b = -tau.v;
    const mpz_class a16 = mpz_mod(row.a * row.a, 16);
    row.cond5 = a16 == 1;
    // alpha^tau in the completion at p = (2, w), i.e. w -> root = 0 (mod 2), mod p^3 = 8
    const Completion P = completion(base, {2, 0});
    LocalRing ring(P.model, 3);
    auto [x, y] = tau.coordinates();
    const auto image = embed(base, P, ring, x, y);
    row.cond4 = image[0] == 1 || image[0] == 7;
    row.verdict = row.n < 3 ? row.cond4 : row.cond5;
    row.mod16 = mod(ell, 16) == 15;
    return row;
}

bool criterion_515(std::int64_t ell) { return criterion_515_details(ell).verdict; }

std::vector<CriterionRow> criterion_scan(std::int64_t lo, std::int64_t hi, unsigned threads) {
    if (lo > hi) throw input_error("bad_range", "empty range");
    check_guard(static_cast<long double>(hi), "criterion scan range");
    std::vector<std::int64_t> ells;
    for (std::int64_t ell = std::max<std::int64_t>(lo, 7); ell <= hi; ++ell)
        if (mod(ell, 8) == 7 && is_prime(ell)) ells.push_back(ell);
    std::vector<CriterionRow> rows(ells.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, std::max<std::size_t>(ells.size(), 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t i; (i = next++) < ells.size();) {
            if (failed) return;
            try {
                rows[i] = criterion_515_details(ells[i]);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

// ---------------------------------------------------------------------------
// conductor-discriminant

namespace {

// characters of (Z/M)^x; each character is an exponent vector against the basis
struct CharacterGroup {
    std::int64_t M;
    std::vector<std::int64_t> units;    // residues
    std::vector<std::int64_t> dense;    // residue -> index or -1
    std::vector<std::int64_t> orders;
    std::vector<std::vector<std::int64_t>> logs;
    std::int64_t exponent = 1;

    explicit CharacterGroup(std::int64_t modulus) : M(modulus), dense(modulus, -1) {
        check_guard(static_cast<long double>(modulus), "character group modulus");
        for (std::int64_t x = 0; x < M; ++x)
            if (std::gcd(x, M) == 1) {
                dense[x] = static_cast<std::int64_t>(units.size());
                units.push_back(x);
            }
        EnumeratedGroup group(units.size(), static_cast<std::uint32_t>(dense[1 % M]), [this](std::uint32_t a, std::uint32_t b) {
            return static_cast<std::uint32_t>(dense[static_cast<std::size_t>(mulmod(units[a], units[b], M))]);
        });
        orders = group.generator_orders();
        for (auto o : orders) exponent = std::lcm(exponent, o);
        for (std::uint32_t i = 0; i < units.size(); ++i) logs.push_back(group.log(i));
    }

    // chi(x) as k/exponent mod 1, returned as k
    std::int64_t value(const std::vector<std::int64_t>& chi, std::int64_t x) const {
        const auto& e = logs[static_cast<std::size_t>(dense[static_cast<std::size_t>(mod(x, M))])];
        std::int64_t k = 0;
        for (std::size_t i = 0; i < chi.size(); ++i) k = mod(k + chi[i] * e[i] % orders[i] * (exponent / orders[i]), exponent);
        return k;
    }

    std::int64_t order(const std::vector<std::int64_t>& chi) const { return element_order(chi, orders); }

    std::int64_t conductor(const std::vector<std::int64_t>& chi) const {
        for (std::int64_t m : divisors(M)) {
            bool trivial = true;
            for (std::int64_t x = 1; x < M && trivial; x += m)
                if (std::gcd(x, M) == 1 && value(chi, x) != 0) trivial = false;
            if (trivial) return m;
        }
        throw internal_error("character without conductor");
    }

    template <class Keep>
    AbelianLayer layer(Keep keep) const {
        AbelianLayer out;
        out.degree = 0;
        std::vector<std::int64_t> chi(orders.size(), 0);
        std::map<std::int64_t, std::int64_t> disc;
        for (;;) {
            if (keep(chi)) {
                ++out.degree;
                const std::int64_t f = conductor(chi);
                out.conductors.push_back(f);
                for (auto [q, e] : factorize(f)) disc[q] += e;
            }
            std::size_t i = 0;
            while (i < chi.size() && ++chi[i] == orders[i]) chi[i++] = 0;
            if (i == chi.size()) break;
        }
        std::sort(out.conductors.begin(), out.conductors.end());
        out.disc.assign(disc.begin(), disc.end());
        return out;
    }
};

}  // namespace

std::int64_t kronecker_conductor(std::int64_t D) {
    if (D == 0 || mod(D, 4) > 1) throw input_error("bad_discriminant", "not a discriminant");
    const std::int64_t M = 4 * std::abs(D);
    check_guard(static_cast<long double>(M), "Kronecker conductor modulus");
    for (std::int64_t m : divisors(M)) {
        bool trivial = true;
        for (std::int64_t x = 1; x < M && trivial; x += m)
            if (std::gcd(x, M) == 1 && kronecker(D, x) != 1) trivial = false;
        if (trivial) return m;
    }
    throw internal_error("Kronecker character without conductor");
}

AbelianLayer quadratic_layer(std::int64_t d) {
    if (d == 0 || d == 1 || !is_squarefree(std::abs(d))) throw input_error("bad_radicand", "need squarefree d != 0, 1");
    const std::int64_t f = kronecker_conductor(fundamental_discriminant(d));
    AbelianLayer out;
    out.degree = 2;
    out.conductors = {1, f};
    for (auto [q, e] : factorize(f)) out.disc.emplace_back(q, e);
    return out;
}

AbelianLayer cyclotomic_layer(std::int64_t p, int n) {
    if (!is_prime(p) || n < 1) throw input_error("bad_cyclotomic", "need prime p and n >= 1");
    const CharacterGroup G(ipow(p, n));
    return G.layer([](const std::vector<std::int64_t>&) { return true; });
}

AbelianLayer rayclass_layer_q(std::int64_t m, std::int64_t p) {
    if (m < 1 || !is_prime(p)) throw input_error("bad_modulus", "need m >= 1 and prime p");
    if (m <= 2) return {1, {}, {1}};
    const CharacterGroup G(m);
    return G.layer([&](const std::vector<std::int64_t>& chi) {
        if (G.value(chi, m - 1) != 0) return false;  // odd
        std::int64_t k = G.order(chi);
        while (k % p == 0) k /= p;
        return k == 1;
    });
}

}  // namespace ramify
