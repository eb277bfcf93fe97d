#include "ramify/bounds.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include <gmpxx.h>
#include <mpfr.h>

#include "ramify/errors.hpp"
#include "ramify/localfields.hpp"
#include "ramify/numtheory.hpp"
#include "ramify/ramgroups.hpp"

namespace ramify {

namespace {

mpz_class pow_mpz(std::int64_t base, std::int64_t exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
    return r;
}

// prod q^e = (num / den)^(1/L)
struct Radical {
    mpz_class num = 1;
    mpz_class den = 1;
    std::int64_t root = 1;
};

Radical to_radical(const std::vector<BoundReport::Factor>& factors) {
    Radical r;
    for (const auto& [q, e] : factors) r.root = std::lcm(r.root, e.den());
    for (const auto& [q, e] : factors) {
        const std::int64_t k = e.num() * (r.root / e.den());
        if (k > 0) r.num *= pow_mpz(q, k);
        else r.den *= pow_mpz(q, -k);
    }
    return r;
}

std::string format_digits(const std::string& mant, long exp10) {
    // value = 0.mant * 10^exp10
    std::string s = mant;
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    auto trimmed = [](std::string x) {
        if (x.find('.') == std::string::npos) return x;
        while (x.back() == '0') x.pop_back();
        if (x.back() == '.') x.pop_back();
        return x;
    };
    if (exp10 > 0 && exp10 <= 21) {
        if (static_cast<long>(s.size()) <= exp10) return s + std::string(static_cast<std::size_t>(exp10) - s.size(), '0');
        return trimmed(s.substr(0, static_cast<std::size_t>(exp10)) + "." + s.substr(static_cast<std::size_t>(exp10)));
    }
    if (exp10 <= 0 && exp10 > -6) return trimmed("0." + std::string(static_cast<std::size_t>(-exp10), '0') + s);
    std::string m = s.size() > 1 ? trimmed(s.substr(0, 1) + "." + s.substr(1)) : s;
    return m + "e" + std::to_string(exp10 - 1);
}

}  // namespace

std::string render_decimal(const std::vector<BoundReport::Factor>& factors, int digits) {
    if (digits < 1) throw input_error("bad_precision", "precision must be positive");
    const Radical r = to_radical(factors);
    for (mpfr_prec_t prec = 4 * digits + 64; prec <= (1 << 20); prec *= 2) {
        mpfr_t lo, hi;
        mpfr_inits2(prec, lo, hi, static_cast<mpfr_ptr>(nullptr));
        mpfr_set_z(lo, r.num.get_mpz_t(), MPFR_RNDD);
        mpfr_div_z(lo, lo, r.den.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(hi, r.num.get_mpz_t(), MPFR_RNDU);
        mpfr_div_z(hi, hi, r.den.get_mpz_t(), MPFR_RNDU);
        mpfr_rootn_ui(lo, lo, static_cast<unsigned long>(r.root), MPFR_RNDD);
        mpfr_rootn_ui(hi, hi, static_cast<unsigned long>(r.root), MPFR_RNDU);
        mpfr_exp_t elo = 0, ehi = 0;
        char* slo = mpfr_get_str(nullptr, &elo, 10, static_cast<std::size_t>(digits), lo, MPFR_RNDN);
        char* shi = mpfr_get_str(nullptr, &ehi, 10, static_cast<std::size_t>(digits), hi, MPFR_RNDN);
        const bool same = elo == ehi && std::string(slo) == std::string(shi);
        std::string out = same ? format_digits(slo, static_cast<long>(elo)) : std::string();
        mpfr_free_str(slo);
        mpfr_free_str(shi);
        mpfr_clears(lo, hi, static_cast<mpfr_ptr>(nullptr));
        if (same) return out;
    }
    throw internal_error("decimal rendering did not converge");
}

BoundReport::BoundReport(std::vector<Factor> factors, int digits) : digits_(digits) {
    std::map<std::int64_t, Rational> merged;
    for (const auto& [q, e] : factors) {
        if (q < 1) throw input_error("bad_base", "bases must be positive");
        if (q == 1) continue;
        merged[q] += e;
    }
    for (const auto& [q, e] : merged)
        if (e != Rational(0)) factors_.emplace_back(q, e);
    decimal_ = render_decimal(factors_, digits_);
}

bool BoundReport::is_rational() const {
    return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.second.is_integer(); });
}

std::string BoundReport::value_string() const {
    if (!is_rational()) return decimal_;
    const Radical r = to_radical(factors_);
    return r.den == 1 ? r.num.get_str() : r.num.get_str() + "/" + r.den.get_str();
}

BoundReport operator*(const BoundReport& a, const BoundReport& b) {
    std::vector<BoundReport::Factor> all = a.exact();
    all.insert(all.end(), b.exact().begin(), b.exact().end());
    return BoundReport(all, std::max(a.digits(), b.digits()));
}

int compare(const BoundReport& a, const BoundReport& b) {
    std::vector<BoundReport::Factor> ratio = a.exact();
    for (const auto& [q, e] : b.exact()) ratio.emplace_back(q, -e);
    const Radical r = to_radical(ratio);
    return cmp(r.num, r.den) < 0 ? -1 : cmp(r.num, r.den) > 0 ? 1 : 0;
}

nlohmann::ordered_json to_json(const BoundReport& r) {
    nlohmann::ordered_json exact = nlohmann::ordered_json::array();
    for (const auto& [q, e] : r.exact()) exact.push_back({{"base", q}, {"exp", e.to_string()}});
    return {{"exact", exact}, {"decimal", r.decimal()}};
}

// ---------------------------------------------------------------------------
// base fields

BoundReport BaseFieldSummary::root_discriminant(int digits) const { return ramify::root_discriminant(disc, degree, digits); }

BaseFieldSummary summarize(const BaseField& base, std::int64_t p) {
    if (!is_prime(p)) throw input_error("bad_prime", "p must be prime");
    BaseFieldSummary s;
    s.name = base.name();
    s.p = p;
    s.degree = base.degree();
    s.disc = base.disc_factored();
    s.r1 = base.is_rational() ? 1 : 0;
    s.r2 = base.r2();
    s.delta_K = base.roots_of_unity() % p == 0 ? 1 : 0;
    s.unit_prank = s.r1 + s.r2 - 1 + s.delta_K;
    return s;
}

BoundReport root_discriminant(const Factored& disc_abs, std::int64_t degree, int digits) {
    if (degree < 1) throw input_error("bad_degree", "degree must be positive");
    std::vector<BoundReport::Factor> f;
    for (const auto& [q, e] : disc_abs) f.emplace_back(q, Rational(e, degree));
    return BoundReport(f, digits);
}

namespace {

BoundReport rd_with_primes(const BaseField& base, const IndexedSet& S, int digits,
                           const std::function<Rational(const IndexedPrime&, const Completion&)>& exponent) {
    const std::int64_t n = base.degree();
    std::vector<BoundReport::Factor> f;
    for (const auto& [q, e] : base.disc_factored()) f.emplace_back(q, Rational(e, n));
    for (const auto& ip : S) {
        const Completion c = completion(base, ip.prime);
        f.emplace_back(ip.prime.q, exponent(ip, c) * Rational(c.f) / Rational(n));
    }
    return BoundReport(f, digits);
}

void require_finite(const IndexedPrime& ip, const BaseField& base) {
    if (ip.nu.is_infinite())
        throw input_error("infinite_depth", "the bound is undefined for infinite depth at " + base.descriptor(ip.prime));
}

}  // namespace

BoundReport rd_bound_thm42(const BaseField& base, const IndexedSet& S, std::int64_t p, int digits) {
    if (!is_prime(p)) throw input_error("bad_prime", "p must be prime");
    return rd_with_primes(base, S, digits, [&](const IndexedPrime& ip, const Completion&) {
        if (ip.prime.q != p) return Rational(1);
        require_finite(ip, base);
        return ip.nu.value() + Rational(1);
    });
}

BoundReport rd_bound_perret(const BaseField& base, const IndexedSet& S, int digits) {
    return rd_with_primes(base, S, digits, [&](const IndexedPrime& ip, const Completion&) {
        require_finite(ip, base);
        return Rational(ip.nu.ceil());
    });
}

// ---------------------------------------------------------------------------
// differents and towers

Rational tau(const Filtration& filt, std::int64_t e) {
    if (e != filt.g0())
        throw input_error("e_mismatch", "ramification index " + std::to_string(e) + " differs from g_0 = " +
                                            std::to_string(filt.g0()));
    return Rational(different_valuation(filt), e);
}

std::int64_t different_from_last_jump(const Filtration& filt) {
    const std::int64_t n = filt.last_nontrivial();
    const Rational nu = evaluate(phi_from_filtration(filt), Rational(n));
    const Rational v = Rational(filt.g0()) * (nu + Rational(1)) - Rational(n + 1);
    check_internal(v.is_integer() && v.num() == different_valuation(filt),
                   "different from the last jump disagrees with Hilbert's formula");
    return v.num();
}

std::vector<GrowthRow> tower_rd_growth(std::int64_t p, int N, int digits) {
    if (p != 2 && p != 3 && p != 5) throw input_error("catalog_gap", "tower growth is available for p = 2, 3, 5");
    if (N < 1) throw input_error("precondition", "N must be positive");
    if (N > 6 || ipow(p, N) > 243) throw guard_error("tower growth needs N <= 6 and p^N <= 243");
    std::vector<GrowthRow> rows;
    for (int n = 1; n <= N; ++n) {
        GrowthRow row;
        row.n = n;
        row.filtration = filtration_monogenic(cyclotomic_local(p, n));
        const std::int64_t degree = ipow(p, n - 1) * (p - 1);
        row.tau = tau(row.filtration, degree);
        different_from_last_jump(row.filtration);
        const AbelianLayer layer = cyclotomic_layer(p, n);
        check_internal(layer.degree == degree && layer.disc.size() <= 1 && (layer.disc.empty() || layer.disc[0].first == p),
                       "cyclotomic layer has unexpected shape");
        const std::int64_t exponent = layer.disc.empty() ? 0 : layer.disc[0].second;
        check_internal(Rational(exponent, degree) == row.tau,
                       "tau disagrees with the conductor-discriminant exponent");
        row.rd = BoundReport({{p, row.tau}}, digits);
        if (!rows.empty())
            check_internal(rows.back().tau < row.tau && compare(rows.back().rd, row.rd) < 0,
                           "tower growth is not strictly increasing");
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// generator rank

int d_s_nu_rayclass(const BaseField& base, const IndexedSet& S, std::int64_t p) {
    return ray_class_group(base, modulus_of(S), p).p_rank;
}

namespace {

void require_flag(int v, const char* what) {
    if (v != 0 && v != 1) throw input_error("precondition", std::string(what) + " must be 0 or 1");
}

void require_nonnegative(int v, const char* what) {
    if (v < 0) throw input_error("precondition", std::string(what) + " must be nonnegative");
}

std::int64_t sum(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); }

}  // namespace

int d_s_nu_idelic(int delta_rank, int unit_prank, const std::vector<int>& tame_deltas,
                  const std::vector<int>& wild_unit_ranks) {
    require_nonnegative(delta_rank, "delta rank");
    require_nonnegative(unit_prank, "unit p-rank");
    for (int d : tame_deltas) require_flag(d, "tame delta");
    for (int r : wild_unit_ranks) require_nonnegative(r, "wild unit rank");
    return static_cast<int>(delta_rank - unit_prank + sum(tame_deltas) + sum(wild_unit_ranks));
}

IdelicIngredients idelic_ingredients(const BaseField& base, const IndexedSet& S, std::int64_t p) {
    IdelicIngredients in;
    in.unit_prank = summarize(base, p).unit_prank;
    in.delta_rank = delta_rank(base, S, p);
    for (const auto& ip : S) {
        if (!ip.nu.is_infinite() && ip.nu.value() == Rational(0)) continue;
        const Completion c = completion(base, ip.prime);
        const int delta = local_delta(base, c, p);
        if (ip.prime.q != p) {
            in.tame_deltas.push_back(delta);
        } else if (ip.nu.is_infinite()) {
            in.wild_unit_ranks.push_back(c.model.degree() + delta);
        } else {
            in.wild_unit_ranks.push_back(prank_u1_mod_unu(c.model, ip.nu, delta));
        }
    }
    return in;
}

IndexedSet stable_indexed_set(const BaseField& base, const IndexedSet& S, std::int64_t p) {
    IndexedSet out = S;
    for (auto& ip : out) {
        if (!ip.nu.is_infinite()) continue;
        if (ip.prime.q != p) {
            ip.nu = DepthIndex(1);
        } else {
            const Completion c = completion(base, ip.prime);
            ip.nu = DepthIndex((p * c.e) / (p - 1) + 1);
        }
    }
    return out;
}

GeneratorRankCheck d_s_nu_both(const BaseField& base, const IndexedSet& S, std::int64_t p) {
    GeneratorRankCheck check;
    check.rayclass = d_s_nu_rayclass(base, stable_indexed_set(base, S, p), p);
    check.idelic = idelic_ingredients(base, S, p);
    return check;
}

// ---------------------------------------------------------------------------
// relation-rank evaluators

std::int64_t shafarevich_bound(int unit_prank, int delta_K, int theta_S, const std::vector<int>& wild_degrees) {
    require_nonnegative(unit_prank, "unit p-rank");
    require_flag(delta_K, "delta_K");
    require_flag(theta_S, "theta_S");
    for (int d : wild_degrees) require_nonnegative(d, "local degree");
    return std::int64_t{unit_prank} - delta_K + theta_S - sum(wild_degrees);
}

std::int64_t relation_bound_thm55(int b_rank, int theta_S, int delta_K, const std::vector<int>& local_deltas) {
    require_nonnegative(b_rank, "B rank");
    require_flag(theta_S, "theta_S");
    require_flag(delta_K, "delta_K");
    for (int d : local_deltas) require_flag(d, "local delta");
    return std::int64_t{b_rank} + theta_S - delta_K + sum(local_deltas);
}

std::int64_t ker_eta_bound(int unit_prank, int d_s_nu, const std::vector<std::pair<int, int>>& wild_finite,
                           const std::vector<int>& tame_deltas, const std::vector<int>& wild_unit_ranks) {
    require_nonnegative(unit_prank, "unit p-rank");
    require_nonnegative(d_s_nu, "generator rank");
    std::int64_t total = std::int64_t{unit_prank} + d_s_nu;
    for (const auto& [degree, delta] : wild_finite) {
        require_nonnegative(degree, "local degree");
        require_flag(delta, "delta(p, nu)");
        total += degree + delta;
    }
    for (int d : tame_deltas) require_flag(d, "tame delta");
    for (int r : wild_unit_ranks) require_nonnegative(r, "wild unit rank");
    return total - sum(tame_deltas) - sum(wild_unit_ranks);
}

std::int64_t euler_char_full(int r2) {
    require_nonnegative(r2, "r2");
    return -(std::int64_t{r2} + 1);
}

}  // namespace ramify
