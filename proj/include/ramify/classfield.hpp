#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ramify/abelian_group.hpp"
#include "ramify/localfields.hpp"
#include "ramify/ramgroups.hpp"

namespace ramify {

// ---------------------------------------------------------------------------
// binary quadratic forms

/// a x^2 + b x y + c y^2, positive definite.
struct BinaryQuadraticForm {
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::int64_t c = 1;

    std::int64_t discriminant() const;
    bool is_reduced() const;
    std::string to_string() const;
    friend bool operator==(const BinaryQuadraticForm&, const BinaryQuadraticForm&) = default;
};

BinaryQuadraticForm reduce(BinaryQuadraticForm f);
/// Gauss composition followed by reduction.
BinaryQuadraticForm compose(const BinaryQuadraticForm& f, const BinaryQuadraticForm& g);
BinaryQuadraticForm identity_form(std::int64_t D);
BinaryQuadraticForm inverse(const BinaryQuadraticForm& f);
BinaryQuadraticForm power(const BinaryQuadraticForm& f, std::int64_t k);
/// All primitive reduced forms of discriminant D < 0.
std::vector<BinaryQuadraticForm> reduced_forms(std::int64_t D);

// ---------------------------------------------------------------------------
// imaginary quadratic fields

/// Q(sqrt D) for a fundamental discriminant D < 0, with O = Z[w] where
/// w = (1 + sqrt D)/2 for D = 1 (mod 4) and w = sqrt(D/4) otherwise.
class QuadraticFieldData {
public:
    std::int64_t D = -4;
    std::int64_t d = -1;  // squarefree part
    int w = 4;            // number of roots of unity
    std::vector<BinaryQuadraticForm> forms;
    AbelianGroupStructure structure;
    std::vector<BinaryQuadraticForm> generators;
    std::vector<std::int64_t> generator_orders;

    std::int64_t h() const { return static_cast<std::int64_t>(forms.size()); }
    /// w^2 = trace * w - norm.
    std::int64_t omega_trace() const { return D % 4 == 0 ? 0 : 1; }
    std::int64_t omega_norm() const { return D % 4 == 0 ? -D / 4 : (1 - D) / 4; }

    std::size_t index_of(const BinaryQuadraticForm& f) const;
    /// Exponents of the class of f against `generators`.
    std::vector<std::int64_t> log(const BinaryQuadraticForm& f) const;

    std::vector<std::vector<std::int64_t>> logs;  // per entry of `forms`
};

QuadraticFieldData class_group(std::int64_t D);

/// (u + v sqrt D)/2 with u = v D (mod 2); D is the field discriminant.
struct QuadraticElement {
    mpz_class u;
    mpz_class v;
    std::int64_t D = -4;

    mpz_class norm() const;
    QuadraticElement conjugate() const { return {u, -v, D}; }
    /// Coordinates (x, y) of x + y w.
    std::pair<mpz_class, mpz_class> coordinates() const;
    static QuadraticElement from_coordinates(std::int64_t D, const mpz_class& x, const mpz_class& y);
    /// "(u + v*sqrt(d))/2" when D = 1 (mod 4), "u' + v*sqrt(d)" otherwise.
    std::string to_string() const;
    friend bool operator==(const QuadraticElement&, const QuadraticElement&) = default;
};

QuadraticElement operator*(const QuadraticElement& x, const QuadraticElement& y);
QuadraticElement power(const QuadraticElement& x, std::int64_t k);

/// Z A + Z (B + C w) in Hermite normal form: A, C > 0, C | A, C | B, 0 <= B < A.
struct QuadraticIdeal {
    mpz_class A = 1;
    mpz_class B = 0;
    mpz_class C = 1;

    mpz_class norm() const { return A * C; }
    friend bool operator==(const QuadraticIdeal&, const QuadraticIdeal&) = default;
};

QuadraticIdeal principal_ideal(const QuadraticFieldData& field, const QuadraticElement& x);
QuadraticIdeal multiply(const QuadraticFieldData& field, const QuadraticIdeal& I, const QuadraticIdeal& J);
QuadraticIdeal power(const QuadraticFieldData& field, const QuadraticIdeal& I, std::int64_t k);
bool contains(const QuadraticIdeal& I, const QuadraticElement& x);
/// The ideal a Z + ((-b + sqrt D)/2) Z attached to a form.
QuadraticIdeal ideal_of_form(const QuadraticFieldData& field, const BinaryQuadraticForm& f);
/// Reduced form in the class of I.
BinaryQuadraticForm form_of_ideal(const QuadraticFieldData& field, const QuadraticIdeal& I);
/// A generator of I when I is principal: the shortest lattice vector after
/// Lagrange-Gauss reduction has norm N(I) exactly when I is principal.
std::optional<QuadraticElement> generator_of(const QuadraticFieldData& field, const QuadraticIdeal& I);

// ---------------------------------------------------------------------------
// primes

/// "q" over Q; "q.i" over a quadratic field, the prime (q, w - r_i) for the
/// i-th smallest root r_i of the minimal polynomial of w mod q ("q.0" for an
/// inert q, which is qO).
struct PrimeDescriptor {
    std::int64_t q = 2;
    int index = 0;

    std::string to_string(bool over_q) const;
    static PrimeDescriptor parse(const std::string& text);
    friend auto operator<=>(const PrimeDescriptor&, const PrimeDescriptor&) = default;
};

/// The prime ideal named by P in a quadratic field.
QuadraticIdeal prime_ideal(const QuadraticFieldData& field, const PrimeDescriptor& P);

/// Q or an imaginary quadratic field (the zeta_3-field is D = -3).
class BaseField {
public:
    static BaseField rationals();
    static BaseField quadratic(std::int64_t D);
    /// "Q", "zeta3", "Q(zeta3)", "Q(sqrt<d>)", "sqrt<d>" or a fundamental discriminant.
    static BaseField parse(const std::string& text);

    bool is_rational() const noexcept { return !field_; }
    const QuadraticFieldData& field() const;
    std::string name() const;
    int degree() const { return is_rational() ? 1 : 2; }
    int r2() const { return is_rational() ? 0 : 1; }
    int roots_of_unity() const { return is_rational() ? 2 : field_->w; }
    std::int64_t class_number() const { return is_rational() ? 1 : field_->h(); }
    /// |disc| as prime powers.
    std::vector<std::pair<std::int64_t, std::int64_t>> disc_factored() const;

    std::vector<PrimeDescriptor> primes_above(std::int64_t q) const;
    std::string descriptor(const PrimeDescriptor& P) const { return P.to_string(is_rational()); }

private:
    std::shared_ptr<const QuadraticFieldData> field_;
};

/// Completion of the base at a prime: ramification data, a local model and
/// the image of w in it.
struct Completion {
    PrimeDescriptor prime;
    int e = 1;
    int f = 1;
    LocalModel model;
    std::int64_t norm = 2;  // q^f
};

Completion completion(const BaseField& base, const PrimeDescriptor& P);
/// Image of x + y w (or of the integer x over Q) in the residue ring.
LocalRing::Elem embed(const BaseField& base, const Completion& P, const LocalRing& ring, const mpz_class& x,
                      const mpz_class& y = 0);
/// zeta_p lies in the completion.
int local_delta(const BaseField& base, const Completion& P, std::int64_t p);

// ---------------------------------------------------------------------------
// indexed sets and ray class groups

struct IndexedPrime {
    PrimeDescriptor prime;
    DepthIndex nu;
};
using IndexedSet = std::vector<IndexedPrime>;

/// "2.0:4,2.1:4" or "3:2"; depth "inf" allowed.
IndexedSet parse_indexed_set(const std::string& text);

using Modulus = std::vector<std::pair<PrimeDescriptor, std::int64_t>>;

/// m = prod P^ceil(nu_P); rejects infinite depths.
Modulus modulus_of(const IndexedSet& S);

struct RayClassResult {
    Modulus modulus;
    AbelianGroupStructure full;
    AbelianGroupStructure p_part;
    int p_rank = 0;
    std::int64_t residue_units = 1;  // |(O/m)^x|
    std::int64_t unit_image = 1;     // |image of global units|
};

RayClassResult ray_class_group(const BaseField& base, const Modulus& m, std::int64_t p);

/// p-rank of {x : (x) = a^p, x in K_P^{xp} U_P^(nu_P) for P in S} / K^{xp}.
int delta_rank(const BaseField& base, const IndexedSet& S, std::int64_t p);
int delta_rank_quadratic_p2(const QuadraticFieldData& field, const IndexedSet& S);

// ---------------------------------------------------------------------------
// principal generators and the 2-adic criterion

/// Order of the class of the prime "q.0".
std::int64_t prime_class_order(const QuadraticFieldData& field, std::int64_t q);
/// alpha with (alpha) = P^n for P = "q.0", normalised so that v > 0.
QuadraticElement principal_generator(const QuadraticFieldData& field, std::int64_t q, std::int64_t n);
/// Same by exhaustive search over |v| <= 2 q^(n/2)/sqrt|D| + 1.
QuadraticElement principal_generator_search(const QuadraticFieldData& field, std::int64_t q, std::int64_t n);

struct CriterionRow {
    std::int64_t ell = 7;
    std::int64_t n = 1;
    mpz_class a;  // alpha^tau = (a - b sqrt(-ell))/2
    mpz_class b;
    bool cond4 = false;  // alpha^tau = +-1 mod p^3
    bool cond5 = false;  // a^2 = 1 mod 16
    bool verdict = false;
    bool mod16 = false;  // ell = 15 mod 16
};

CriterionRow criterion_515_details(std::int64_t ell);
bool criterion_515(std::int64_t ell);
/// Rows for all primes ell = 7 (mod 8) in [lo, hi], ascending, computed on
/// `threads` workers (0 = hardware concurrency).
std::vector<CriterionRow> criterion_scan(std::int64_t lo, std::int64_t hi, unsigned threads = 0);

// ---------------------------------------------------------------------------
// conductor-discriminant

using Factored = std::vector<std::pair<std::int64_t, std::int64_t>>;

/// An abelian extension of Q given by its character group.
struct AbelianLayer {
    std::int64_t degree = 1;
    Factored disc;  // |disc| as prime powers
    std::vector<std::int64_t> conductors;
};

std::int64_t kronecker_conductor(std::int64_t D);
/// Q(sqrt d).
AbelianLayer quadratic_layer(std::int64_t d);
/// Q(zeta_{p^n}).
AbelianLayer cyclotomic_layer(std::int64_t p, int n);
/// Fixed field of the p-part of (Z/m)^x/{+-1}: the maximal p-extension of Q
/// inside the ray class field of modulus m.
AbelianLayer rayclass_layer_q(std::int64_t m, std::int64_t p);

}  // namespace ramify
