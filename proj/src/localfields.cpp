#include "ramify/localfields.hpp"

#include <climits>

#include "ramify/errors.hpp"
#include "ramify/numtheory.hpp"

namespace ramify {

namespace {

std::int64_t mod_mpz(const mpz_class& a, std::int64_t m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), mpz_class(static_cast<long>(m)).get_mpz_t());
    return r.get_si();
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return a <= 0 ? 0 : (a + b - 1) / b; }

}  // namespace

// ---------------------------------------------------------------------------
// LocalRing

LocalRing::LocalRing(LocalModel model, std::int64_t precision) : model_(std::move(model)), precision_(precision) {
    const int n = model_.degree();
    if (precision < 0) throw input_error("bad_precision", "precision must be >= 0");
    if (static_cast<int>(model_.minpoly.size()) != n + 1 || model_.minpoly.back() != 1)
        throw input_error("bad_local_model", "minimal polynomial must be monic of degree e*f");
    if (model_.eisenstein && model_.f != 1) throw input_error("bad_local_model", "Eisenstein model needs f = 1");
    if (!model_.eisenstein && model_.e != 1) throw input_error("bad_local_model", "unramified model needs e = 1");

    std::int64_t top = 0;
    moduli_.resize(n);
    for (int i = 0; i < n; ++i) {
        std::int64_t k = model_.eisenstein ? ceil_div(precision - i, model_.e) : precision;
        top = std::max(top, k);
        long double approx = 1;
        for (std::int64_t j = 0; j < k; ++j) approx *= static_cast<long double>(model_.p);
        if (approx > static_cast<long double>(INT64_MAX / 4))
            throw guard_error("local precision too large for 64-bit residues");
        moduli_[i] = ipow(model_.p, static_cast<int>(k));
    }
    work_ = ipow(model_.p, static_cast<int>(top));
    for (const auto& c : model_.minpoly) minpoly_.push_back(mod_mpz(c, work_));
}

long double LocalRing::size() const {
    long double s = 1;
    for (auto m : moduli_) s *= static_cast<long double>(m);
    return s;
}

LocalRing::Elem LocalRing::one() const {
    Elem x = zero();
    x[0] = 1;
    return reduce(std::move(x));
}

LocalRing::Elem LocalRing::from_integers(const std::vector<mpz_class>& coords) const {
    if (coords.size() > moduli_.size()) throw internal_error("too many coordinates");
    Elem x = zero();
    for (std::size_t i = 0; i < coords.size(); ++i) x[i] = mod_mpz(coords[i], moduli_[i]);
    return x;
}

LocalRing::Elem LocalRing::reduce(Elem x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod(x[i], moduli_[i]);
    return x;
}

LocalRing::Elem LocalRing::add(const Elem& a, const Elem& b) const {
    Elem out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = mod(a[i] + b[i], moduli_[i]);
    return out;
}

LocalRing::Elem LocalRing::sub(const Elem& a, const Elem& b) const {
    Elem out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = mod(a[i] - b[i], moduli_[i]);
    return out;
}

LocalRing::Elem LocalRing::mul(const Elem& a, const Elem& b) const {
    const std::size_t n = moduli_.size();
    std::vector<__int128> prod(2 * n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + static_cast<__int128>(a[i]) * b[j]) % work_;
    }
    for (std::size_t k = prod.size(); k-- > n;) {
        __int128 c = prod[k];
        if (c == 0) continue;
        for (std::size_t i = 0; i < n; ++i) prod[k - n + i] = (prod[k - n + i] - c * minpoly_[i]) % work_;
    }
    Elem out(n);
    for (std::size_t i = 0; i < n; ++i) {
        __int128 r = prod[i] % moduli_[i];
        out[i] = static_cast<std::int64_t>(r < 0 ? r + moduli_[i] : r);
    }
    return out;
}

LocalRing::Elem LocalRing::power(Elem x, std::int64_t k) const {
    Elem r = one();
    while (k > 0) {
        if (k & 1) r = mul(r, x);
        x = mul(x, x);
        k >>= 1;
    }
    return r;
}

bool LocalRing::is_zero(const Elem& x) const {
    return std::all_of(x.begin(), x.end(), [](std::int64_t c) { return c == 0; });
}

std::int64_t LocalRing::valuation(const Elem& x) const {
    std::int64_t best = precision_;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        std::int64_t v = ramify::valuation(x[i], model_.p);
        v = model_.eisenstein ? model_.e * v + static_cast<std::int64_t>(i) : v;
        best = std::min(best, v);
    }
    return best;
}

LocalRing::Elem LocalRing::divide_by_uniformizer(const Elem& x) const {
    if (precision_ < 1 || valuation(x) < 1) throw internal_error("division by the uniformizer of a unit");
    LocalRing target(model_, precision_ - 1);
    const std::size_t n = moduli_.size();
    Elem out(n, 0);
    if (!model_.eisenstein) {
        for (std::size_t i = 0; i < n; ++i) out[i] = x[i] / model_.p;
        return target.reduce(out);
    }
    // x / pi = sum_{i>=1} c_i pi^{i-1} + (c_0 / p) (p / pi)
    mpz_class a0_over_p = model_.minpoly[0] / static_cast<long>(model_.p);
    const std::int64_t u0inv = invmod(mod_mpz(a0_over_p, work_), work_);
    Elem p_over_pi(n, 0);
    for (std::size_t j = 0; j + 1 < n; ++j) p_over_pi[j] = mulmod(-minpoly_[j + 1], u0inv, work_);
    p_over_pi[n - 1] = mod(-u0inv, work_);
    for (std::size_t i = 1; i < n; ++i) out[i - 1] = x[i];
    const std::int64_t c0 = x[0] / model_.p;
    for (std::size_t j = 0; j < n; ++j) out[j] = mod(out[j] + mulmod(c0, p_over_pi[j], work_), work_);
    return target.reduce(out);
}

std::uint64_t LocalRing::index(const Elem& x) const {
    std::uint64_t idx = 0;
    for (std::size_t i = moduli_.size(); i-- > 0;) idx = idx * static_cast<std::uint64_t>(moduli_[i]) + x[i];
    return idx;
}

LocalRing::Elem LocalRing::element(std::uint64_t index) const {
    Elem x(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        x[i] = static_cast<std::int64_t>(index % moduli_[i]);
        index /= moduli_[i];
    }
    return x;
}

// ---------------------------------------------------------------------------
// unit groups

UnitFiltrationGroup::UnitFiltrationGroup(const LocalModel& model, std::int64_t a, std::int64_t b)
    : ring_(model, b), a_(a) {
    if (a < 0 || b < a) throw input_error("bad_indices", "need 0 <= a <= b");
    check_guard(ring_.size(), "residue ring");
    const auto total = static_cast<std::uint64_t>(ring_.size());
    position_.assign(total, UINT32_MAX);
    const LocalRing::Elem one = ring_.one();
    for (std::uint64_t i = 0; i < total; ++i) {
        LocalRing::Elem x = ring_.element(i);
        bool in = b == 0 || (a == 0 ? ring_.valuation(x) == 0 : ring_.valuation(ring_.sub(x, one)) >= a);
        if (in) {
            position_[i] = static_cast<std::uint32_t>(members_.size());
            members_.push_back(i);
        }
    }
    group_ = std::make_unique<EnumeratedGroup>(
        members_.size(), position_[ring_.index(one)], [this](std::uint32_t x, std::uint32_t y) {
            return position_[ring_.index(ring_.mul(ring_.element(members_[x]), ring_.element(members_[y])))];
        });
}

bool UnitFiltrationGroup::contains(const LocalRing::Elem& x) const {
    return position_.at(ring_.index(ring_.reduce(x))) != UINT32_MAX;
}

std::vector<std::int64_t> UnitFiltrationGroup::log(const LocalRing::Elem& x) const {
    const std::uint32_t pos = position_.at(ring_.index(ring_.reduce(x)));
    if (pos == UINT32_MAX) throw internal_error("element is not in the unit group");
    return group_->log(pos);
}

bool UnitFiltrationGroup::is_pth_power(const LocalRing::Elem& x, std::int64_t p) const {
    const auto e = log(x);
    const auto& orders = group_->generator_orders();
    for (std::size_t i = 0; i < e.size(); ++i)
        if (orders[i] % p == 0 && e[i] % p != 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// catalog of local fields

std::string to_string(LocalFieldTag tag) {
    switch (tag) {
        case LocalFieldTag::Qp: return "Qp";
        case LocalFieldTag::UnramifiedQuadratic: return "UnramifiedQuadratic";
        case LocalFieldTag::RamifiedQuadraticOver2: return "RamifiedQuadraticOver2";
        case LocalFieldTag::CyclotomicLocal: return "CyclotomicLocal";
    }
    throw internal_error("unknown local field tag");
}

LocalFieldTag parse_local_tag(const std::string& text) {
    for (auto tag : {LocalFieldTag::Qp, LocalFieldTag::UnramifiedQuadratic, LocalFieldTag::RamifiedQuadraticOver2,
                     LocalFieldTag::CyclotomicLocal})
        if (to_string(tag) == text) return tag;
    throw input_error("bad_local_field", "unknown local field tag '" + text + "'");
}

std::string LocalFieldSpec::name() const {
    const std::string base = "Q" + std::to_string(p);
    switch (tag) {
        case LocalFieldTag::Qp: return base;
        case LocalFieldTag::UnramifiedQuadratic:
        case LocalFieldTag::RamifiedQuadraticOver2: return base + "(sqrt(" + std::to_string(param) + "))";
        case LocalFieldTag::CyclotomicLocal: return base + "(zeta_" + std::to_string(ipow(p, static_cast<int>(param))) + ")";
    }
    throw internal_error("unknown local field tag");
}

LocalFieldSpec make_local_field(LocalFieldTag tag, std::int64_t p, std::int64_t param) {
    if (!is_prime(p)) throw input_error("bad_local_field", std::to_string(p) + " is not prime");
    LocalFieldSpec s{tag, p, param, 1, 1};
    switch (tag) {
        case LocalFieldTag::Qp:
            s.param = 0;
            break;
        case LocalFieldTag::UnramifiedQuadratic:
            if (p == 2 ? mod(param, 8) != 5 : kronecker(param, p) != -1)
                throw input_error("bad_local_field", "sqrt(" + std::to_string(param) + ") does not give the unramified quadratic extension of Q" + std::to_string(p));
            s.f = 2;
            break;
        case LocalFieldTag::RamifiedQuadraticOver2:
            if (p != 2 || !is_squarefree(param) || !(mod(param, 4) == 2 || mod(param, 4) == 3))
                throw input_error("bad_local_field", "RamifiedQuadraticOver2 needs p = 2 and squarefree d = 2, 3 mod 4");
            s.e = 2;
            break;
        case LocalFieldTag::CyclotomicLocal:
            if (!(p == 2 || p == 3 || p == 5) || param < 1 || ipow(p, static_cast<int>(param)) > 243)
                throw input_error("catalog_gap", "CyclotomicLocal needs p in {2,3,5}, n >= 1, p^n <= 243");
            s.e = static_cast<int>(ipow(p, static_cast<int>(param)) - ipow(p, static_cast<int>(param) - 1));
            break;
    }
    return s;
}

LocalModel model_of(const LocalFieldSpec& s) {
    LocalModel m;
    m.p = s.p;
    m.e = s.e;
    m.f = s.f;
    switch (s.tag) {
        case LocalFieldTag::Qp:
            m.minpoly = {0, 1};
            break;
        case LocalFieldTag::UnramifiedQuadratic:
            if (s.p == 2) m.minpoly = {mpz_class(static_cast<long>(-(s.param - 1) / 4)), -1, 1};
            else m.minpoly = {mpz_class(static_cast<long>(-s.param)), 0, 1};
            break;
        case LocalFieldTag::RamifiedQuadraticOver2:
            m.eisenstein = true;
            if (mod(s.param, 4) == 2) m.minpoly = {mpz_class(static_cast<long>(-s.param)), 0, 1};
            else m.minpoly = {mpz_class(static_cast<long>(1 - s.param)), 2, 1};  // (x + 1)^2 - d
            break;
        case LocalFieldTag::CyclotomicLocal:
            m.eisenstein = true;
            m.minpoly = cyclotomic_local(s.p, static_cast<int>(s.param)).minpoly;
            break;
    }
    return m;
}

UnitQuotient unit_quotient(const LocalFieldSpec& spec, std::int64_t a, std::int64_t b) {
    return {spec, a, b, unit_quotient(model_of(spec), a, b)};
}

AbelianGroupStructure unit_quotient(const LocalModel& model, std::int64_t a, std::int64_t b) {
    UnitFiltrationGroup g(model, a, b);
    return g.structure();
}

std::int64_t pth_power_level(std::int64_t p, int e) { return p * e / (p - 1) + 1; }

int prank_u1_mod_unu(const LocalModel& model, const DepthIndex& nu, int delta) {
    if (nu.is_infinite()) return model.degree() + delta;
    const std::int64_t c = nu.ceil();
    if (c <= 1) return 0;
    return unit_quotient(model, 1, c).p_rank(model.p);
}

int prank_u1_mod_unu(const LocalFieldSpec& spec, const DepthIndex& nu) {
    return prank_u1_mod_unu(model_of(spec), nu, delta_p(spec));
}

int delta_p(const LocalFieldSpec& spec) {
    if (spec.p == 2) return 1;
    switch (spec.tag) {
        case LocalFieldTag::CyclotomicLocal: return (spec.e % (spec.p - 1) == 0) ? 1 : 0;
        default: return 0;
    }
}

int delta_p_nu(const LocalFieldSpec& spec, const DepthIndex& nu) {
    if (nu.is_infinite() || delta_p(spec) == 0) return 0;
    // v(zeta_p - 1) = e / (p - 1)
    return Rational(spec.e, spec.p - 1) >= Rational(nu.ceil()) ? 1 : 0;
}

std::int64_t membership_precision(const LocalModel& model, const DepthIndex& nu) {
    return membership_precision(model, nu, model.p);
}

std::int64_t membership_precision(const LocalModel& model, const DepthIndex& nu, std::int64_t p) {
    if (nu.is_infinite()) return p == model.p ? pth_power_level(model.p, model.e) : 1;
    return std::max<std::int64_t>(nu.ceil(), 0);
}

bool in_pth_powers_times_units(const LocalRing& ring, const LocalRing::Elem& x, const DepthIndex& nu) {
    return in_pth_powers_times_units(ring, x, nu, ring.model().p);
}

bool in_pth_powers_times_units(const LocalRing& ring, const LocalRing::Elem& x, const DepthIndex& nu, std::int64_t p) {
    const LocalModel& model = ring.model();
    const std::int64_t c = membership_precision(model, nu, p);
    const std::int64_t k = ring.valuation(x);
    if (k >= ring.precision() || ring.precision() < k + c)
        throw internal_error("insufficient precision for the p-th power test");
    if (k % p != 0) return false;
    if (c == 0) return true;
    LocalRing::Elem u = x;
    std::int64_t b = ring.precision();
    for (std::int64_t i = 0; i < k; ++i, --b) u = LocalRing(model, b).divide_by_uniformizer(u);
    UnitFiltrationGroup units(model, 0, c);
    return units.is_pth_power(units.ring().reduce(u), p);
}

}  // namespace ramify
