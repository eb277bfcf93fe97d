#include "ramify/ramgroups.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <json.hpp>
#include <set>
#include <sstream>

#include "ramify/errors.hpp"
#include "ramify/numtheory.hpp"

namespace ramify {

// ---------------------------------------------------------------------------
// DepthIndex

DepthIndex::DepthIndex(Rational value) : value_(value) {
    if (value < 0) throw input_error("bad_depth", "depth must be >= 0, got " + value.to_string());
}

DepthIndex DepthIndex::infinity() {
    DepthIndex d;
    d.infinite_ = true;
    return d;
}

const Rational& DepthIndex::value() const {
    if (infinite_) throw input_error("infinite_depth", "finite depth required here");
    return value_;
}

std::string DepthIndex::to_string() const { return infinite_ ? "inf" : value_.to_string(); }

DepthIndex DepthIndex::parse(std::string_view text) {
    if (text == "inf" || text == "oo" || text == "infinity" || text == "∞") return infinity();
    return DepthIndex(Rational::parse(text));
}

// ---------------------------------------------------------------------------
// polynomial arithmetic modulo a monic minimal polynomial

namespace {

void reduce_in_place(Poly& a, const Poly& minpoly) {
    const std::size_t n = minpoly.size() - 1;
    for (std::size_t k = a.size(); k-- > n;) {
        if (a[k] == 0) continue;
        mpz_class c = a[k];
        for (std::size_t i = 0; i <= n; ++i) a[k - n + i] -= c * minpoly[i];
    }
    a.resize(n);
}

Poly mul_mod(const Poly& a, const Poly& b, const Poly& minpoly) {
    Poly out(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    reduce_in_place(out, minpoly);
    return out;
}

/// P(y) mod minpoly, Horner.
Poly substitute(const Poly& P, const Poly& y, const Poly& minpoly) {
    const std::size_t n = minpoly.size() - 1;
    Poly acc(n, 0);
    for (std::size_t k = P.size(); k-- > 0;) {
        acc = mul_mod(acc, y, minpoly);
        acc[0] += P[k];
    }
    return acc;
}

Poly generator_poly(const Poly& minpoly) {
    Poly x{0, 1};
    reduce_in_place(x, minpoly);
    return x;
}

bool is_zero(const Poly& a) {
    return std::all_of(a.begin(), a.end(), [](const mpz_class& c) { return c == 0; });
}

Filtration filtration_from_indices(const std::vector<std::optional<std::int64_t>>& idx,
                                   const std::vector<std::size_t>& members) {
    std::int64_t top = 0;
    for (std::size_t s : members)
        if (idx[s]) top = std::max(top, *idx[s]);
    std::vector<std::int64_t> orders;
    for (std::int64_t j = 0; j <= std::max<std::int64_t>(top - 1, 0); ++j) {
        std::int64_t g = 0;
        for (std::size_t s : members)
            if (!idx[s] || *idx[s] >= j + 1) ++g;
        orders.push_back(g);
    }
    return Filtration(orders);
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

void check_subgroup(const std::vector<std::vector<std::uint32_t>>& table, const std::vector<std::size_t>& h) {
    std::set<std::size_t> hs(h.begin(), h.end());
    if (hs.size() != h.size() || !hs.count(0)) throw input_error("bad_subgroup", "subgroup must list the identity once");
    if (table.empty()) return;
    for (std::size_t a : h)
        for (std::size_t b : h)
            if (!hs.count(table.at(a).at(b))) throw input_error("bad_subgroup", "subgroup is not closed");
}

}  // namespace

// ---------------------------------------------------------------------------
// monogenic local extensions

void validate(MonogenicLocalExtension& ext) {
    const int n = ext.degree();
    if (!is_prime(ext.p)) throw input_error("bad_extension", ext.name + ": residue characteristic must be prime");
    if (ext.e < 1 || ext.f < 1 || (ext.e > 1 && ext.f > 1))
        throw input_error("bad_extension", ext.name + ": need e = 1 or f = 1");
    if (static_cast<int>(ext.minpoly.size()) != n + 1 || ext.minpoly.back() != 1)
        throw input_error("bad_extension", ext.name + ": minimal polynomial must be monic of degree e*f");
    if (ext.e > 1) {
        for (int i = 0; i < n; ++i)
            if (valuation(ext.minpoly[i] == 0 ? mpz_class(ext.p) : ext.minpoly[i], ext.p) < 1)
                throw input_error("bad_extension", ext.name + ": minimal polynomial is not Eisenstein");
        if (ext.minpoly[0] == 0 || valuation(ext.minpoly[0], ext.p) != 1)
            throw input_error("bad_extension", ext.name + ": minimal polynomial is not Eisenstein");
    }
    if (static_cast<int>(ext.automorphisms.size()) != n)
        throw input_error("bad_extension", ext.name + ": need exactly degree-many automorphisms");
    for (auto& a : ext.automorphisms) {
        if (static_cast<int>(a.size()) > n) reduce_in_place(a, ext.minpoly);
        a.resize(n, 0);
    }
    if (ext.automorphisms[0] != generator_poly(ext.minpoly))
        throw input_error("bad_extension", ext.name + ": first automorphism must be the identity");
    if (n > 32) return;

    for (const auto& a : ext.automorphisms)
        if (!is_zero(substitute(ext.minpoly, a, ext.minpoly)))
            throw input_error("bad_extension", ext.name + ": automorphism image is not a root of the minimal polynomial");
    if (ext.table.empty()) {
        std::map<std::vector<std::string>, std::uint32_t> index;
        auto key = [](const Poly& a) {
            std::vector<std::string> k;
            for (const auto& c : a) k.push_back(c.get_str());
            return k;
        };
        for (std::size_t i = 0; i < ext.automorphisms.size(); ++i)
            if (!index.emplace(key(ext.automorphisms[i]), static_cast<std::uint32_t>(i)).second)
                throw input_error("bad_extension", ext.name + ": repeated automorphism");
        ext.table.assign(n, std::vector<std::uint32_t>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                // (sigma_i o sigma_j)(x) = sigma_i(sigma_j(x)) = P_j(sigma_i(x))
                Poly c = substitute(ext.automorphisms[j], ext.automorphisms[i], ext.minpoly);
                auto it = index.find(key(c));
                if (it == index.end()) throw input_error("bad_extension", ext.name + ": automorphisms do not form a group");
                ext.table[i][j] = it->second;
            }
    }
}

std::int64_t valuation(const MonogenicLocalExtension& ext, const Poly& element) {
    std::int64_t best = -1;
    for (std::size_t i = 0; i < element.size(); ++i) {
        if (element[i] == 0) continue;
        std::int64_t v = ext.f == 1 ? ext.e * static_cast<std::int64_t>(valuation(element[i], ext.p)) + static_cast<std::int64_t>(i)
                                    : valuation(element[i], ext.p);
        if (best < 0 || v < best) best = v;
    }
    if (best < 0) throw internal_error("valuation of zero element");
    return best;
}

std::vector<std::optional<std::int64_t>> lower_indices(const MonogenicLocalExtension& ext) {
    const Poly x = generator_poly(ext.minpoly);
    std::vector<std::optional<std::int64_t>> out(ext.automorphisms.size());
    for (std::size_t s = 1; s < ext.automorphisms.size(); ++s) {
        Poly d = ext.automorphisms[s];
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= x[i];
        if (is_zero(d)) throw input_error("bad_extension", ext.name + ": non-identity automorphism fixes the generator");
        out[s] = valuation(ext, d);
    }
    return out;
}

Filtration filtration_monogenic(const MonogenicLocalExtension& ext, const std::vector<std::size_t>& subgroup) {
    std::vector<std::size_t> members = subgroup.empty() ? all_indices(ext.automorphisms.size()) : subgroup;
    check_subgroup(ext.table, members);
    return filtration_from_indices(lower_indices(ext), members);
}

Filtration quotient_filtration(const MonogenicLocalExtension& ext, const std::vector<std::size_t>& subgroup) {
    if (ext.table.empty()) throw input_error("no_group_law", ext.name + ": quotient needs the composition table");
    check_subgroup(ext.table, subgroup);
    const std::size_t n = ext.automorphisms.size();
    // normality: s h s^-1 in H
    std::vector<std::size_t> inverse(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (ext.table[a][b] == 0) inverse[a] = b;
    std::set<std::size_t> hs(subgroup.begin(), subgroup.end());
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t h : subgroup)
            if (!hs.count(ext.table[ext.table[s][h]][inverse[s]]))
                throw input_error("bad_subgroup", "quotient needs a normal subgroup");

    auto idx = lower_indices(ext);
    std::vector<int> coset(n, -1);
    std::vector<std::optional<std::int64_t>> qidx;
    for (std::size_t s = 0; s < n; ++s) {
        if (coset[s] >= 0) continue;
        int c = static_cast<int>(qidx.size());
        bool is_identity = false;
        std::int64_t total = 0;
        for (std::size_t h : subgroup) {
            std::size_t t = ext.table[s][h];
            coset[t] = c;
            if (t == 0) is_identity = true;
            else total += *idx[t];
        }
        if (is_identity) {
            qidx.emplace_back(std::nullopt);
        } else {
            check_internal(total % static_cast<std::int64_t>(subgroup.size()) == 0,
                           "quotient lower index is not an integer");
            qidx.emplace_back(total / static_cast<std::int64_t>(subgroup.size()));
        }
    }
    return filtration_from_indices(qidx, all_indices(qidx.size()));
}

MonogenicLocalExtension cyclotomic_local(std::int64_t p, int n) {
    if (!(p == 2 || p == 3 || p == 5) || n < 1)
        throw input_error("catalog_gap", "cyclotomic catalog covers p in {2,3,5}, n >= 1");
    const std::int64_t m = ipow(p, n);
    if (m > 243) throw input_error("catalog_gap", "cyclotomic catalog needs p^n <= 243");
    const std::int64_t step = m / p;
    const int deg = static_cast<int>(m - step);

    MonogenicLocalExtension ext;
    ext.name = "Q" + std::to_string(p) + "(zeta_" + std::to_string(m) + ")/Q" + std::to_string(p);
    ext.p = p;
    ext.e = deg;
    ext.f = 1;
    // Phi_{p^n}(x + 1) = sum_{j<p} (x + 1)^{j p^{n-1}}
    ext.minpoly.assign(deg + 1, 0);
    for (std::int64_t j = 0; j < p; ++j) {
        const std::int64_t k = j * step;
        mpz_class binom;
        for (std::int64_t i = 0; i <= k; ++i) {
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(i));
            ext.minpoly[i] += binom;
        }
    }

    // sigma_a(pi) = (1 + pi)^a - 1
    Poly power(deg, 0);
    power[0] = 1;
    const Poly one_plus_x = [&] {
        Poly q{1, 1};
        reduce_in_place(q, ext.minpoly);
        q.resize(deg, 0);
        return q;
    }();
    std::map<std::int64_t, std::uint32_t> index_of;
    for (std::int64_t a = 1; a < m; ++a) {
        power = mul_mod(power, one_plus_x, ext.minpoly);
        if (a % p == 0) continue;
        Poly img = power;
        img[0] -= 1;
        index_of[a] = static_cast<std::uint32_t>(ext.automorphisms.size());
        ext.labels.push_back(a);
        ext.automorphisms.push_back(std::move(img));
    }
    ext.table.assign(ext.labels.size(), std::vector<std::uint32_t>(ext.labels.size()));
    for (std::size_t i = 0; i < ext.labels.size(); ++i)
        for (std::size_t j = 0; j < ext.labels.size(); ++j)
            ext.table[i][j] = index_of.at(ext.labels[i] * ext.labels[j] % m);
    validate(ext);
    return ext;
}

std::vector<std::size_t> cyclotomic_subgroup(const MonogenicLocalExtension& ext, int k) {
    const std::int64_t pk = ipow(ext.p, k);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < ext.labels.size(); ++i)
        if (mod(ext.labels[i] - 1, pk) == 0) out.push_back(i);
    if (out.empty()) throw input_error("bad_subgroup", "entry has no cyclotomic labels");
    return out;
}

MonogenicLocalExtension biquadratic_local_2_3() {
    MonogenicLocalExtension ext;
    ext.name = "Q2(sqrt2,sqrt3)/Q2";
    ext.p = 2;
    ext.e = 4;
    ext.f = 1;
    ext.minpoly = {-2, -4, 2, 4, 1};
    ext.automorphisms = {{0, 1, 0, 0}, {-2, -1, 0, 0}, {-4, -1, 3, 1}, {2, 1, -3, -1}};
    validate(ext);
    return ext;
}

std::vector<std::size_t> biquadratic_local_fixing_sqrt3() { return {0, 1}; }

// ---------------------------------------------------------------------------
// global extensions with an integral basis

namespace {

using MpzMatrix = std::vector<std::vector<mpz_class>>;

mpz_class bareiss_det(MpzMatrix m) {
    const std::size_t n = m.size();
    mpz_class sign = 1, prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && m[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

std::vector<mpz_class> multiply(const GlobalExtensionAtPrime& ext, const std::vector<mpz_class>& x,
                                const std::vector<mpz_class>& y) {
    std::vector<mpz_class> out(ext.n, 0);
    for (int i = 0; i < ext.n; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < ext.n; ++j) {
            if (y[j] == 0) continue;
            mpz_class xy = x[i] * y[j];
            for (int k = 0; k < ext.n; ++k) out[k] += xy * static_cast<long>(ext.mult[i][j][k]);
        }
    }
    return out;
}

std::vector<mpz_class> apply(const GlobalExtensionAtPrime& ext, std::size_t s, const std::vector<mpz_class>& x) {
    std::vector<mpz_class> out(ext.n, 0);
    for (int j = 0; j < ext.n; ++j)
        for (int k = 0; k < ext.n; ++k) out[k] += x[j] * static_cast<long>(ext.automorphisms[s][j][k]);
    return out;
}

std::vector<mpz_class> unit_vector(int n, int j) {
    std::vector<mpz_class> v(n, 0);
    v[j] = 1;
    return v;
}

}  // namespace

void validate(const GlobalExtensionAtPrime& ext) {
    if (ext.e * ext.f * ext.r != ext.n) throw input_error("bad_extension", ext.name + ": e f r must equal the degree");
    if (static_cast<int>(ext.mult.size()) != ext.n) throw input_error("bad_extension", ext.name + ": bad multiplication table");
    for (const auto& row : ext.mult) {
        if (static_cast<int>(row.size()) != ext.n) throw input_error("bad_extension", ext.name + ": bad multiplication table");
        for (const auto& v : row)
            if (static_cast<int>(v.size()) != ext.n) throw input_error("bad_extension", ext.name + ": bad multiplication table");
    }
    for (std::size_t s = 0; s < ext.automorphisms.size(); ++s) {
        const auto& a = ext.automorphisms[s];
        if (static_cast<int>(a.size()) != ext.n) throw input_error("bad_extension", ext.name + ": bad automorphism matrix");
        for (int i = 0; i < ext.n; ++i)
            for (int j = 0; j < ext.n; ++j) {
                auto lhs = apply(ext, s, multiply(ext, unit_vector(ext.n, i), unit_vector(ext.n, j)));
                auto rhs = multiply(ext, apply(ext, s, unit_vector(ext.n, i)), apply(ext, s, unit_vector(ext.n, j)));
                if (lhs != rhs) throw input_error("bad_extension", ext.name + ": automorphism is not multiplicative");
            }
    }
}

mpz_class norm(const GlobalExtensionAtPrime& ext, const std::vector<mpz_class>& x) {
    MpzMatrix m(ext.n, std::vector<mpz_class>(ext.n, 0));
    for (int j = 0; j < ext.n; ++j) {
        auto col = multiply(ext, x, unit_vector(ext.n, j));
        for (int k = 0; k < ext.n; ++k) m[k][j] = col[k];
    }
    return bareiss_det(std::move(m));
}

std::vector<std::optional<std::int64_t>> lower_indices(const GlobalExtensionAtPrime& ext) {
    if (ext.r != 1 || ext.f != 1)
        throw input_error("oracle_invalid", ext.name + ": the norm valuation needs a unique prime with f = 1");
    std::vector<std::optional<std::int64_t>> out(ext.automorphisms.size());
    for (std::size_t s = 1; s < ext.automorphisms.size(); ++s) {
        std::optional<std::int64_t> best;
        for (int j = 0; j < ext.n; ++j) {
            auto d = apply(ext, s, unit_vector(ext.n, j));
            d[j] -= 1;
            if (std::all_of(d.begin(), d.end(), [](const mpz_class& c) { return c == 0; })) continue;
            mpz_class nm = norm(ext, d);
            check_internal(nm != 0, "nonzero element with zero norm");
            std::int64_t v = valuation(nm, ext.ell);
            if (!best || v < *best) best = v;
        }
        if (!best) throw input_error("bad_extension", ext.name + ": non-identity automorphism fixes the whole basis");
        out[s] = best;
    }
    return out;
}

Filtration filtration_zbasis(const GlobalExtensionAtPrime& ext, const std::vector<std::size_t>& subgroup) {
    std::vector<std::size_t> members = subgroup.empty() ? all_indices(ext.automorphisms.size()) : subgroup;
    check_subgroup({}, members);
    return filtration_from_indices(lower_indices(ext), members);
}

GlobalExtensionAtPrime quadratic_at_prime(std::int64_t d, std::int64_t ell) {
    const std::int64_t D = fundamental_discriminant(d);
    if (!is_prime(ell) || D % ell != 0)
        throw input_error("not_ramified", "Q(sqrt " + std::to_string(d) + ") is not ramified at " + std::to_string(ell));
    GlobalExtensionAtPrime ext;
    ext.name = "Q(sqrt(" + std::to_string(d) + "))@" + std::to_string(ell);
    ext.n = 2;
    ext.ell = ell;
    ext.e = 2;
    ext.mult.assign(2, std::vector<std::vector<std::int64_t>>(2, std::vector<std::int64_t>(2, 0)));
    ext.mult[0][0] = {1, 0};
    ext.mult[0][1] = ext.mult[1][0] = {0, 1};
    if (mod(d, 4) == 1) {
        ext.mult[1][1] = {(d - 1) / 4, 1};  // omega^2 = omega + (d-1)/4
        ext.automorphisms = {{{1, 0}, {0, 1}}, {{1, 0}, {1, -1}}};
    } else {
        ext.mult[1][1] = {d, 0};
        ext.automorphisms = {{{1, 0}, {0, 1}}, {{1, 0}, {0, -1}}};
    }
    validate(ext);
    return ext;
}

Filtration quadratic_filtration(std::int64_t d, std::int64_t ell) {
    const std::int64_t D = fundamental_discriminant(d);
    if (!is_prime(ell)) throw input_error("bad_prime", std::to_string(ell) + " is not prime");
    if (D % ell != 0) return Filtration::unramified();
    return filtration_zbasis(quadratic_at_prime(d, ell));
}

GlobalExtensionAtPrime biquadratic_2_3() {
    // basis 1, sqrt2, sqrt3, t = (sqrt2 + sqrt6)/2
    GlobalExtensionAtPrime ext;
    ext.name = "Q(sqrt2,sqrt3)@2";
    ext.n = 4;
    ext.ell = 2;
    ext.e = 4;
    using V = std::vector<std::int64_t>;
    const V one{1, 0, 0, 0}, r2{0, 1, 0, 0}, r3{0, 0, 1, 0}, t{0, 0, 0, 1};
    ext.mult = {{one, r2, r3, t},
                {r2, V{2, 0, 0, 0}, V{0, -1, 0, 2}, V{1, 0, 1, 0}},
                {r3, V{0, -1, 0, 2}, V{3, 0, 0, 0}, V{0, 1, 0, 1}},
                {t, V{1, 0, 1, 0}, V{0, 1, 0, 1}, V{2, 0, 1, 0}}};
    ext.automorphisms = {
        {one, r2, r3, t},
        {one, V{0, -1, 0, 0}, r3, V{0, 0, 0, -1}},       // sqrt2 -> -sqrt2
        {one, r2, V{0, 0, -1, 0}, V{0, 1, 0, -1}},       // sqrt3 -> -sqrt3
        {one, V{0, -1, 0, 0}, V{0, 0, -1, 0}, V{0, -1, 0, 1}},
    };
    validate(ext);
    return ext;
}

std::vector<std::size_t> biquadratic_fixing_sqrt3() { return {0, 1}; }

// ---------------------------------------------------------------------------
// depth predicates

std::int64_t different_valuation(const Filtration& filt) {
    std::int64_t v = 0;
    for (std::int64_t g : filt.orders()) v += g - 1;
    return v;
}

bool is_depth_at_most(const Filtration& filt, const DepthIndex& y) {
    if (y.is_infinite()) return true;
    return group_order_at_upper(filt, y.value()) == 1;
}

DepthIndex lift_depth(const Filtration& filt, const DepthIndex& nu) {
    if (nu.is_infinite()) return nu;
    return DepthIndex(evaluate(psi_from_filtration(filt), nu.value()));
}

bool wild_vanishing_check(const Filtration& filt, std::int64_t p, const Rational& y) {
    if (!is_prime(p)) throw input_error("bad_prime", std::to_string(p) + " is not prime");
    std::int64_t g = filt.g0();
    while (g % p == 0) g /= p;
    if (g != 1) throw input_error("not_p_extension", "filtration is not that of a p-extension");
    if (y <= 1 && is_depth_at_most(filt, DepthIndex(y))) return filt == Filtration::unramified();
    return true;
}

DepthThreeReport depth_three_example() {
    const Filtration base = quadratic_filtration(2, 2);
    const auto global = biquadratic_2_3();
    const auto local = biquadratic_local_2_3();
    const Filtration lifted = filtration_zbasis(global, biquadratic_fixing_sqrt3());
    const Filtration compositum = filtration_zbasis(global);
    check_internal(lifted == filtration_monogenic(local, biquadratic_local_fixing_sqrt3()),
                   "global and local models disagree on the relative filtration");
    check_internal(compositum == filtration_monogenic(local), "global and local models disagree on the filtration");
    const DepthIndex three(3);
    return {base, lifted, compositum, is_depth_at_most(base, three), is_depth_at_most(lifted, three),
            is_depth_at_most(compositum, three)};
}

// ---------------------------------------------------------------------------
// catalog

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

std::int64_t to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw input_error("bad_catalog_name", "cannot parse " + what + " from '" + s + "'");
    }
}

CatalogEntry quadratic_entry(std::int64_t d, std::int64_t ell) {
    CatalogEntry e;
    e.name = "quadratic:" + std::to_string(d) + ":" + std::to_string(ell);
    e.kind = "quadratic";
    const std::int64_t D = fundamental_discriminant(d);
    if (!is_prime(ell)) throw input_error("bad_prime", std::to_string(ell) + " is not prime");
    if (D % ell == 0) e.global = quadratic_at_prime(d, ell);
    else e.fixed = Filtration::unramified();
    return e;
}

CatalogEntry cyclotomic_entry(std::int64_t p, int n, int k) {
    if (k < 0 || k > n) throw input_error("bad_catalog_name", "need 0 <= k <= n for a relative cyclotomic entry");
    CatalogEntry e;
    e.name = "cyclotomic:" + std::to_string(p) + ":" + std::to_string(n) + (k ? "/" + std::to_string(k) : "");
    e.kind = "cyclotomic";
    e.local = cyclotomic_local(p, n);
    if (k > 0) e.subgroup = cyclotomic_subgroup(*e.local, k);
    return e;
}

CatalogEntry biquadratic_entry(bool relative) {
    CatalogEntry e;
    e.name = relative ? "biquadratic:2-3/sqrt3" : "biquadratic:2-3";
    e.kind = "biquadratic";
    e.global = biquadratic_2_3();
    if (relative) e.subgroup = biquadratic_fixing_sqrt3();
    return e;
}

Poly poly_from_json(const nlohmann::json& j) {
    Poly out;
    for (const auto& c : j) {
        if (c.is_string()) out.emplace_back(c.get<std::string>());
        else out.emplace_back(static_cast<long>(c.get<std::int64_t>()));
    }
    return out;
}

CatalogEntry entry_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    CatalogEntry e;
    if (kind == "quadratic") {
        e = quadratic_entry(j.at("d").get<std::int64_t>(), j.at("ell").get<std::int64_t>());
    } else if (kind == "cyclotomic") {
        e = cyclotomic_entry(j.at("p").get<std::int64_t>(), j.at("n").get<int>(), j.value("over", 0));
    } else if (kind == "biquadratic") {
        e = biquadratic_entry(j.value("over", std::string()) == "sqrt3");
    } else if (kind == "local-monogenic") {
        MonogenicLocalExtension ext;
        ext.name = j.value("name", std::string("local-monogenic"));
        ext.p = j.at("p").get<std::int64_t>();
        ext.e = j.at("e").get<int>();
        ext.f = j.at("f").get<int>();
        ext.minpoly = poly_from_json(j.at("minpoly"));
        for (const auto& a : j.at("automorphisms")) ext.automorphisms.push_back(poly_from_json(a));
        validate(ext);
        e.kind = kind;
        e.local = std::move(ext);
        if (j.contains("subgroup")) e.subgroup = j.at("subgroup").get<std::vector<std::size_t>>();
    } else {
        throw input_error("catalog_gap", "unknown catalog kind '" + kind + "'");
    }
    if (j.contains("name")) e.name = j.at("name").get<std::string>();
    e.abelian = j.value("abelian", true);
    return e;
}

}  // namespace

std::vector<CatalogEntry> load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("catalog_missing", "cannot open catalog file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw input_error("bad_catalog", "catalog " + path + " is not valid JSON: " + ex.what());
    }
    std::vector<CatalogEntry> out;
    try {
        for (const auto& item : j.at("entries")) out.push_back(entry_from_json(item));
    } catch (const nlohmann::json::exception& ex) {
        throw input_error("bad_catalog", "malformed catalog entry in " + path + ": " + ex.what());
    }
    return out;
}

std::string default_catalog_path() {
#ifdef RAMIFY_DATA_DIR
    return std::string(RAMIFY_DATA_DIR) + "/catalog.json";
#else
    return "data/catalog.json";
#endif
}

CatalogEntry catalog_entry(const std::string& name, const std::string& catalog_path) {
    auto parts = split(name, ':');
    if (parts.size() == 3 && parts[0] == "quadratic")
        return quadratic_entry(to_int(parts[1], "d"), to_int(parts[2], "prime"));
    if (parts.size() == 3 && parts[0] == "cyclotomic") {
        auto nk = split(parts[2], '/');
        int n = static_cast<int>(to_int(nk.at(0), "n"));
        int k = nk.size() > 1 ? static_cast<int>(to_int(nk[1], "k")) : 0;
        return cyclotomic_entry(to_int(parts[1], "p"), n, k);
    }
    if (name == "biquadratic:2-3") return biquadratic_entry(false);
    if (name == "biquadratic:2-3/sqrt3") return biquadratic_entry(true);

    for (auto& e : load_catalog(catalog_path.empty() ? default_catalog_path() : catalog_path))
        if (e.name == name) return e;
    throw input_error("catalog_gap", "no catalog extension named '" + name + "'");
}

Filtration filtration_of(const CatalogEntry& entry) {
    if (entry.fixed) return *entry.fixed;
    if (entry.local) return filtration_monogenic(*entry.local, entry.subgroup);
    if (entry.global) return filtration_zbasis(*entry.global, entry.subgroup);
    throw internal_error("empty catalog entry");
}

}  // namespace ramify
