#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ramify/herbrand.hpp"

namespace ramify {

/// A depth nu >= 0, or infinity.
class DepthIndex {
public:
    DepthIndex(Rational value);
    DepthIndex(std::int64_t value) : DepthIndex(Rational(value)) {}
    static DepthIndex infinity();

    bool is_infinite() const noexcept { return infinite_; }
    /// Finite value; throws input_error when infinite.
    const Rational& value() const;
    /// ceil(nu); throws when infinite.
    std::int64_t ceil() const { return value().ceil(); }

    /// "inf" or "a/b".
    std::string to_string() const;
    /// Accepts "inf", "oo", "infinity" or a rational.
    static DepthIndex parse(std::string_view text);

    friend bool operator==(const DepthIndex&, const DepthIndex&) = default;

private:
    DepthIndex() = default;
    Rational value_;
    bool infinite_ = false;
};

/// Polynomial with integer coefficients, lowest degree first.
using Poly = std::vector<mpz_class>;

/// A Galois extension of Q_p given by one generator x with O_L = Z_p[x]:
/// either x is a root of an Eisenstein polynomial (f = 1) or x generates an
/// unramified extension (e = 1). Automorphisms are the images of x as
/// polynomials in x of degree < n.
struct MonogenicLocalExtension {
    std::string name;
    std::int64_t p = 0;
    int e = 1;
    int f = 1;
    Poly minpoly;                   // monic, degree e*f
    std::vector<Poly> automorphisms;  // automorphisms[0] is the identity
    /// Optional group law: table[i][j] = index of automorphisms[i] o automorphisms[j].
    std::vector<std::vector<std::uint32_t>> table;
    /// Optional labels (for cyclotomic fields: a with zeta -> zeta^a).
    std::vector<std::int64_t> labels;

    int degree() const noexcept { return e * f; }
};

/// Structural checks; for degree <= 32 also checks that every image is a root
/// of the minimal polynomial and builds the composition table if missing.
void validate(MonogenicLocalExtension& ext);

/// v_L of an element written in the generator basis (length = degree).
std::int64_t valuation(const MonogenicLocalExtension& ext, const Poly& element);

/// i(sigma) = v_L(sigma(x) - x) for every automorphism; nullopt for the identity.
std::vector<std::optional<std::int64_t>> lower_indices(const MonogenicLocalExtension& ext);

/// Lower filtration of L over the base, or over the fixed field of `subgroup`
/// (indices into ext.automorphisms) when it is non-empty.
Filtration filtration_monogenic(const MonogenicLocalExtension& ext, const std::vector<std::size_t>& subgroup = {});

/// Lower filtration of the fixed field of the normal subgroup H over the
/// base, via i_{G/H}(s) = (1/|H|) sum_{sigma -> s} i_G(sigma).
Filtration quotient_filtration(const MonogenicLocalExtension& ext, const std::vector<std::size_t>& subgroup);

/// Q_p(zeta_{p^n}) over Q_p with generator zeta - 1; needs p^n <= 243.
MonogenicLocalExtension cyclotomic_local(std::int64_t p, int n);
/// Indices of Gal(Q_p(zeta_{p^n}) / Q_p(zeta_{p^k})) inside cyclotomic_local(p, n).
std::vector<std::size_t> cyclotomic_subgroup(const MonogenicLocalExtension& ext, int k);

/// Q_2(sqrt2, sqrt3) over Q_2 through the Eisenstein generator
/// pi = -1 - (sqrt2 + sqrt6)/2, with minimal polynomial x^4 + 4x^3 + 2x^2 - 4x - 2.
MonogenicLocalExtension biquadratic_local_2_3();
/// The automorphism fixing sqrt3 together with the identity.
std::vector<std::size_t> biquadratic_local_fixing_sqrt3();

/// A number field with an integral Z-basis, its automorphisms and one
/// distinguished rational prime ell with ramification data (e, f, r).
struct GlobalExtensionAtPrime {
    using Matrix = std::vector<std::vector<std::int64_t>>;
    std::string name;
    int n = 1;
    /// mult[i][j][k]: b_i b_j = sum_k mult[i][j][k] b_k
    std::vector<std::vector<std::vector<std::int64_t>>> mult;
    /// automorphisms[s][j][k]: sigma_s(b_j) = sum_k automorphisms[s][j][k] b_k
    std::vector<Matrix> automorphisms;
    std::int64_t ell = 2;
    int e = 1;
    int f = 1;
    int r = 1;
};

/// Checks e f r = n and sigma(b_i b_j) = sigma(b_i) sigma(b_j) for every automorphism.
void validate(const GlobalExtensionAtPrime& ext);
/// N_{L/Q}(x) for x in basis coordinates (Bareiss determinant).
mpz_class norm(const GlobalExtensionAtPrime& ext, const std::vector<mpz_class>& x);
/// i(sigma) = min_j v_P(sigma(b_j) - b_j) with v_P = v_ell o N (needs r = f = 1).
std::vector<std::optional<std::int64_t>> lower_indices(const GlobalExtensionAtPrime& ext);
Filtration filtration_zbasis(const GlobalExtensionAtPrime& ext, const std::vector<std::size_t>& subgroup = {});

/// Q(sqrt d) at ell, which must ramify.
GlobalExtensionAtPrime quadratic_at_prime(std::int64_t d, std::int64_t ell);
/// Filtration of Q(sqrt d) at ell: [1] when ell is unramified, brute force otherwise.
Filtration quadratic_filtration(std::int64_t d, std::int64_t ell);
/// Q(sqrt2, sqrt3) at 2 with basis {1, sqrt2, sqrt3, (sqrt2 + sqrt6)/2}.
GlobalExtensionAtPrime biquadratic_2_3();
/// Indices of the automorphisms fixing sqrt3.
std::vector<std::size_t> biquadratic_fixing_sqrt3();

/// Hilbert's formula: sum (g_i - 1).
std::int64_t different_valuation(const Filtration& filt);
/// D^y vanishes.
bool is_depth_at_most(const Filtration& filt, const DepthIndex& y);
/// psi(nu) for the filtration of P over p; infinity stays infinity.
DepthIndex lift_depth(const Filtration& filt, const DepthIndex& nu);
/// (depth at most y with y <= 1) implies unramified.
bool wild_vanishing_check(const Filtration& filt, std::int64_t p, const Rational& y);

/// Both readings of the depth-3 example over Q(sqrt2, sqrt3) at 2.
struct DepthThreeReport {
    Filtration base;          // Q(sqrt2)/Q at 2
    Filtration lifted;        // Q(sqrt2, sqrt3)/Q(sqrt3) at the prime above 2
    Filtration compositum;    // Q(sqrt2, sqrt3)/Q at 2
    bool base_depth_at_most_3;
    bool lifted_depth_at_most_3;
    bool compositum_depth_at_most_3;
};
DepthThreeReport depth_three_example();

/// A named catalog extension together with the subgroup (if any) cutting out
/// a relative extension.
struct CatalogEntry {
    std::string name;
    std::string kind;  // quadratic | cyclotomic | local-monogenic | biquadratic
    bool abelian = true;
    std::optional<MonogenicLocalExtension> local;
    std::optional<GlobalExtensionAtPrime> global;
    std::vector<std::size_t> subgroup;
    /// Set when only the filtration is known (unramified quadratic prime).
    std::optional<Filtration> fixed;
};

/// Resolve a catalog name. Built-in names:
///   quadratic:<d>:<ell>         Q(sqrt d) at ell
///   cyclotomic:<p>:<n>          Q_p(zeta_{p^n}) / Q_p
///   cyclotomic:<p>:<n>/<k>      Q_p(zeta_{p^n}) / Q_p(zeta_{p^k})
///   biquadratic:2-3             Q(sqrt2, sqrt3) / Q at 2
///   biquadratic:2-3/sqrt3       Q(sqrt2, sqrt3) / Q(sqrt3) at 2
/// Anything else is looked up in the JSON catalog file.
CatalogEntry catalog_entry(const std::string& name, const std::string& catalog_path = "");
Filtration filtration_of(const CatalogEntry& entry);
/// Entries of a JSON catalog file (kinds quadratic, cyclotomic, local-monogenic, biquadratic).
std::vector<CatalogEntry> load_catalog(const std::string& path);
/// Path of the catalog shipped with the sources.
std::string default_catalog_path();

}  // namespace ramify
