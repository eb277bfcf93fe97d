#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ramify/classfield.hpp"
#include "ramify/herbrand.hpp"
#include "ramify/rational.hpp"

namespace ramify {

/// prod base_i^exp_i with rational exponents, kept exact; the decimal is a
/// rendering correctly rounded to `digits` significant digits.
class BoundReport {
public:
    using Factor = std::pair<std::int64_t, Rational>;

    BoundReport() = default;
    /// Merges equal bases, drops zero exponents, sorts by base. Bases must be >= 2.
    explicit BoundReport(std::vector<Factor> factors, int digits = 12);

    const std::vector<Factor>& exact() const noexcept { return factors_; }
    const std::string& decimal() const noexcept { return decimal_; }
    int digits() const noexcept { return digits_; }
    /// All exponents are integers.
    bool is_rational() const;
    /// The exact value as "n" or "n/d" when rational, otherwise the decimal.
    std::string value_string() const;
    BoundReport with_digits(int digits) const { return BoundReport(factors_, digits); }

    friend BoundReport operator*(const BoundReport& a, const BoundReport& b);

private:
    std::vector<Factor> factors_;
    std::string decimal_ = "1";
    int digits_ = 12;
};

/// Exact comparison: negative, zero or positive as a < b, a = b, a > b.
int compare(const BoundReport& a, const BoundReport& b);
nlohmann::ordered_json to_json(const BoundReport& r);

/// Correctly rounded decimal of prod q^e with `digits` significant digits.
std::string render_decimal(const std::vector<BoundReport::Factor>& factors, int digits);

/// What the evaluators need to know about K (for a fixed p).
struct BaseFieldSummary {
    std::string name;
    std::int64_t p = 2;
    int degree = 1;
    Factored disc;  // |disc_K|
    int r1 = 1;
    int r2 = 0;
    int unit_prank = 0;
    int delta_K = 0;

    BoundReport root_discriminant(int digits = 12) const;
    /// 1 iff delta_K = 1 and S is empty.
    int theta(const IndexedSet& S) const { return delta_K == 1 && S.empty() ? 1 : 0; }
};

BaseFieldSummary summarize(const BaseField& base, std::int64_t p);

BoundReport root_discriminant(const Factored& disc_abs, std::int64_t degree, int digits = 12);

/// rd_K prod_{S - S_p} N(P)^(1/n) prod_{S cap S_p} N(P)^((nu_P + 1)/n).
BoundReport rd_bound_thm42(const BaseField& base, const IndexedSet& S, std::int64_t p, int digits = 12);
/// rd_K prod_S N(P)^(ceil(nu_P)/n).
BoundReport rd_bound_perret(const BaseField& base, const IndexedSet& S, int digits = 12);

/// v(different) / e; e must equal g_0.
Rational tau(const Filtration& filt, std::int64_t e);

/// v(different) computed as g_0 (nu + 1) - (n + 1), nu = phi(n) the last upper
/// jump and n the last lower jump; throws internal_error if it disagrees with
/// Hilbert's formula.
std::int64_t different_from_last_jump(const Filtration& filt);

struct GrowthRow {
    int n = 1;
    Filtration filtration{{1}};
    Rational tau;
    BoundReport rd;  // rd of Q(zeta_{p^n}) = p^tau
};

std::vector<GrowthRow> tower_rd_growth(std::int64_t p, int N, int digits = 12);

/// p-rank of the ray class group of modulus prod P^ceil(nu_P).
int d_s_nu_rayclass(const BaseField& base, const IndexedSet& S, std::int64_t p);

/// p-rk Delta - p-rk E + sum tame deltas + sum wild p-rk U^(1)/U^(nu).
int d_s_nu_idelic(int delta_rank, int unit_prank, const std::vector<int>& tame_deltas,
                  const std::vector<int>& wild_unit_ranks);

struct IdelicIngredients {
    int delta_rank = 0;
    int unit_prank = 0;
    std::vector<int> tame_deltas;
    std::vector<int> wild_unit_ranks;

    int value() const { return d_s_nu_idelic(delta_rank, unit_prank, tame_deltas, wild_unit_ranks); }
};

/// The idelic side computed from classfield and localfields; infinite depths
/// use the unit ranks [K_P : Q_p] + delta_P.
IdelicIngredients idelic_ingredients(const BaseField& base, const IndexedSet& S, std::int64_t p);

/// S with every infinite depth replaced by the exponent past which the ray
/// class p-rank no longer changes (floor(p e/(p-1)) + 1 at P | p, 1 otherwise).
IndexedSet stable_indexed_set(const BaseField& base, const IndexedSet& S, std::int64_t p);

struct GeneratorRankCheck {
    int rayclass = 0;
    IdelicIngredients idelic;
    bool agree() const { return rayclass == idelic.value(); }
};

GeneratorRankCheck d_s_nu_both(const BaseField& base, const IndexedSet& S, std::int64_t p);

std::int64_t shafarevich_bound(int unit_prank, int delta_K, int theta_S, const std::vector<int>& wild_degrees);
std::int64_t relation_bound_thm55(int b_rank, int theta_S, int delta_K, const std::vector<int>& local_deltas);
std::int64_t ker_eta_bound(int unit_prank, int d_s_nu, const std::vector<std::pair<int, int>>& wild_finite,
                           const std::vector<int>& tame_deltas, const std::vector<int>& wild_unit_ranks);
std::int64_t euler_char_full(int r2);

}  // namespace ramify
