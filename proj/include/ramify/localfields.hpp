#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ramify/abelian_group.hpp"
#include "ramify/ramgroups.hpp"

namespace ramify {

/// A complete local field with O = Z_p[x]: x is either a uniformizer (root of
/// an Eisenstein polynomial) or a unit generating an unramified extension.
struct LocalModel {
    std::int64_t p = 2;
    int e = 1;
    int f = 1;
    Poly minpoly;             // monic of degree e*f
    bool eisenstein = false;  // x is a uniformizer; otherwise p is

    int degree() const noexcept { return e * f; }
};

/// The residue ring O / P^b in the basis 1, x, ..., x^{n-1}. For an
/// Eisenstein generator coordinate i is taken mod p^ceil((b - i)/e); in the
/// unramified case every coordinate is taken mod p^b.
class LocalRing {
public:
    using Elem = std::vector<std::int64_t>;

    LocalRing(LocalModel model, std::int64_t precision);

    const LocalModel& model() const noexcept { return model_; }
    std::int64_t precision() const noexcept { return precision_; }
    const std::vector<std::int64_t>& moduli() const noexcept { return moduli_; }
    /// Number of elements, q^b.
    long double size() const;

    Elem zero() const { return Elem(moduli_.size(), 0); }
    Elem one() const;
    Elem from_integers(const std::vector<mpz_class>& coords) const;
    Elem reduce(Elem x) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem power(Elem x, std::int64_t k) const;

    bool is_zero(const Elem& x) const;
    /// v_P(x), equal to precision() for x = 0.
    std::int64_t valuation(const Elem& x) const;
    /// x / pi for v(x) >= 1; the result lives in the ring of precision b - 1.
    Elem divide_by_uniformizer(const Elem& x) const;

    std::uint64_t index(const Elem& x) const;
    Elem element(std::uint64_t index) const;

private:
    LocalModel model_;
    std::int64_t precision_;
    std::int64_t work_;                  // p^W, W = max coordinate exponent
    std::vector<std::int64_t> minpoly_;  // reduced mod work_
    std::vector<std::int64_t> moduli_;
};

/// (1 + P^a)/(1 + P^b) inside (O/P^b)^x, or the full unit group for a = 0,
/// enumerated as an abelian group with discrete logs.
class UnitFiltrationGroup {
public:
    UnitFiltrationGroup(const LocalModel& model, std::int64_t a, std::int64_t b);
    UnitFiltrationGroup(const UnitFiltrationGroup&) = delete;
    UnitFiltrationGroup& operator=(const UnitFiltrationGroup&) = delete;

    const LocalRing& ring() const noexcept { return ring_; }
    const EnumeratedGroup& group() const { return *group_; }
    AbelianGroupStructure structure() const { return group_->structure(); }
    bool contains(const LocalRing::Elem& x) const;
    /// x lies in the subgroup of p-th powers (p = residue characteristic by default).
    bool is_pth_power(const LocalRing::Elem& x) const { return is_pth_power(x, ring_.model().p); }
    bool is_pth_power(const LocalRing::Elem& x, std::int64_t p) const;
    /// Exponents of x against group().generators().
    std::vector<std::int64_t> log(const LocalRing::Elem& x) const;

private:
    LocalRing ring_;
    std::int64_t a_;
    std::vector<std::uint64_t> members_;
    std::vector<std::uint32_t> position_;
    std::unique_ptr<EnumeratedGroup> group_;
};

enum class LocalFieldTag { Qp, UnramifiedQuadratic, RamifiedQuadraticOver2, CyclotomicLocal };

/// Catalog of local fields. `param` is d for the quadratic tags (Q_p(sqrt d)),
/// n for CyclotomicLocal (Q_p(zeta_{p^n})) and unused for Qp.
struct LocalFieldSpec {
    LocalFieldTag tag = LocalFieldTag::Qp;
    std::int64_t p = 2;
    std::int64_t param = 0;
    int e = 1;
    int f = 1;

    int degree() const noexcept { return e * f; }
    std::string name() const;
    friend bool operator==(const LocalFieldSpec&, const LocalFieldSpec&) = default;
};

LocalFieldSpec make_local_field(LocalFieldTag tag, std::int64_t p, std::int64_t param = 0);
std::string to_string(LocalFieldTag tag);
LocalFieldTag parse_local_tag(const std::string& text);
LocalModel model_of(const LocalFieldSpec& spec);

struct UnitQuotient {
    LocalFieldSpec spec;
    std::int64_t a;
    std::int64_t b;
    AbelianGroupStructure structure;
};

UnitQuotient unit_quotient(const LocalFieldSpec& spec, std::int64_t a, std::int64_t b);
AbelianGroupStructure unit_quotient(const LocalModel& model, std::int64_t a, std::int64_t b);

/// Smallest n with U^(n) inside (U^(1))^p: floor(p e / (p - 1)) + 1.
std::int64_t pth_power_level(std::int64_t p, int e);

/// p-rank of U^(1)/U^(ceil nu); for nu = oo the rank [K_p : Q_p] + delta_p.
int prank_u1_mod_unu(const LocalFieldSpec& spec, const DepthIndex& nu);
int prank_u1_mod_unu(const LocalModel& model, const DepthIndex& nu, int delta);

int delta_p(const LocalFieldSpec& spec);
int delta_p_nu(const LocalFieldSpec& spec, const DepthIndex& nu);

/// Whether x (an element of O/P^b, nonzero) lies in K^{xp} U^(c), where c =
/// ceil(nu) for finite nu and U^(oo) = 1. Needs b >= v(x) + c' with c' = c,
/// or c' = pth_power_level for nu = oo.
bool in_pth_powers_times_units(const LocalRing& ring, const LocalRing::Elem& x, const DepthIndex& nu);
/// Same for a prime p other than the residue characteristic; there U^(1) is
/// p-divisible, so U^(oo) may be replaced by U^(1).
bool in_pth_powers_times_units(const LocalRing& ring, const LocalRing::Elem& x, const DepthIndex& nu, std::int64_t p);
/// Precision in the unit group needed to decide membership for depth nu.
std::int64_t membership_precision(const LocalModel& model, const DepthIndex& nu);
std::int64_t membership_precision(const LocalModel& model, const DepthIndex& nu, std::int64_t p);

}  // namespace ramify
