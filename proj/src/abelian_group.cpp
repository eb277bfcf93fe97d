#include "ramify/abelian_group.hpp"

#include <algorithm>
#include <gmpxx.h>
#include <map>
#include <numeric>
#include <stdexcept>

#include "ramify/errors.hpp"

namespace ramify {

namespace {

std::vector<std::pair<std::int64_t, int>> factor_small(std::int64_t n) {
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t q = 2; q * q <= n; ++q) {
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        if (e) out.emplace_back(q, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

}  // namespace

AbelianGroupStructure::AbelianGroupStructure(const std::vector<std::int64_t>& cyclic_orders) {
    // primary decomposition, then recombine largest-with-largest
    std::map<std::int64_t, std::vector<std::int64_t>> primary;
    for (std::int64_t n : cyclic_orders) {
        if (n < 1) throw input_error("bad_group", "cyclic orders must be positive");
        for (auto [q, e] : factor_small(n)) {
            std::int64_t pe = 1;
            for (int i = 0; i < e; ++i) pe *= q;
            primary[q].push_back(pe);
        }
    }
    std::size_t len = 0;
    for (auto& [q, v] : primary) {
        std::sort(v.begin(), v.end(), std::greater<>());
        len = std::max(len, v.size());
    }
    invariants_.assign(len, 1);
    for (auto& [q, v] : primary)
        for (std::size_t i = 0; i < v.size(); ++i) invariants_[i] *= v[i];
}

std::int64_t AbelianGroupStructure::order() const {
    std::int64_t n = 1;
    for (std::int64_t f : invariants_)
        if (__builtin_mul_overflow(n, f, &n)) throw std::overflow_error("group order overflows int64");
    return n;
}

AbelianGroupStructure AbelianGroupStructure::p_part(std::int64_t p) const {
    std::vector<std::int64_t> parts;
    for (std::int64_t f : invariants_) {
        std::int64_t pe = 1;
        while (f % p == 0) {
            f /= p;
            pe *= p;
        }
        if (pe > 1) parts.push_back(pe);
    }
    return AbelianGroupStructure(parts);
}

int AbelianGroupStructure::p_rank(std::int64_t p) const {
    return static_cast<int>(std::count_if(invariants_.begin(), invariants_.end(),
                                          [p](std::int64_t f) { return f % p == 0; }));
}

// ---------------------------------------------------------------------------

EnumeratedGroup::EnumeratedGroup(std::size_t size, Element identity, Mul mul)
    : size_(size), identity_(identity), mul_(std::move(mul)), code_(size, -1) {
    if (size == 0 || identity >= size) throw input_error("bad_group", "empty group or bad identity");

    // x -> x^q for every prime q | size; exponents dividing the group order
    // then cost table lookups only
    for (auto [q, e] : factor_small(static_cast<std::int64_t>(size_))) {
        std::vector<Element> table(size_);
        for (Element x = 0; x < size_; ++x) table[x] = power(x, q);
        power_tables_.emplace_back(q, std::move(table));
    }

    code_[identity_] = 0;
    std::vector<Element> members{identity_};

    while (members.size() < size_) {
        // element of maximal order modulo the current span; that order divides
        // [G : H], so strip prime factors from the index while x^(t/q) stays in H
        const std::int64_t index = static_cast<std::int64_t>(size_ / members.size());
        check_internal(size_ % members.size() == 0, "group multiplication is not a group law");
        Element best = 0;
        std::int64_t best_k = 0;
        for (Element x = 0; x < size_; ++x) {
            if (code_[x] >= 0) continue;
            std::int64_t k = index;
            for (const auto& [q, table] : power_tables_)
                while (k % q == 0 && code_[smooth_power(x, k / q)] >= 0) k /= q;
            if (k > best_k) {
                best_k = k;
                best = x;
            }
        }
        check_internal(best_k > 1, "group multiplication is not a group law");

        // best^k lies in the span; its exponents are all divisible by k
        std::vector<std::int64_t> e = log(smooth_power(best, best_k));
        Element g = best;
        for (std::size_t i = 0; i < e.size(); ++i) {
            check_internal(e[i] % best_k == 0, "greedy basis: exponent not divisible by quotient order");
            std::int64_t t = e[i] / best_k;
            if (t) g = mul_(g, power(generators_[i], orders_[i] - t));
        }
        check_internal(smooth_power(g, best_k) == identity_, "greedy basis: corrected generator has wrong order");

        const std::int64_t radix = static_cast<std::int64_t>(members.size());
        const std::size_t old = members.size();
        Element gt = identity_;
        for (std::int64_t t = 1; t < best_k; ++t) {
            gt = mul_(gt, g);
            for (std::size_t j = 0; j < old; ++j) {
                Element y = mul_(members[j], gt);
                check_internal(code_[y] < 0, "greedy basis: new generator not independent");
                code_[y] = code_[members[j]] + t * radix;
                members.push_back(y);
            }
        }
        generators_.push_back(g);
        orders_.push_back(best_k);
    }
}

EnumeratedGroup::Element EnumeratedGroup::power(Element x, std::int64_t k) const {
    Element result = identity_;
    Element base = x;
    while (k > 0) {
        if (k & 1) result = mul_(result, base);
        k >>= 1;
        if (k) base = mul_(base, base);
    }
    return result;
}

EnumeratedGroup::Element EnumeratedGroup::smooth_power(Element x, std::int64_t k) const {
    for (const auto& [q, table] : power_tables_)
        while (k % q == 0) {
            x = table[x];
            k /= q;
        }
    return k == 1 ? x : mul_(identity_, power(x, k));
}

std::int64_t EnumeratedGroup::order_of(Element x) const {
    std::int64_t k = static_cast<std::int64_t>(size_);
    for (const auto& [q, table] : power_tables_)
        while (k % q == 0 && smooth_power(x, k / q) == identity_) k /= q;
    return k;
}

std::vector<std::int64_t> EnumeratedGroup::log(Element x) const {
    std::int64_t c = code_.at(x);
    if (c < 0) throw internal_error("discrete log requested outside the current span");
    std::vector<std::int64_t> e(orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        e[i] = c % orders_[i];
        c /= orders_[i];
    }
    return e;
}

// ---------------------------------------------------------------------------

AbelianGroupStructure structure_from_relations(const std::vector<std::vector<std::int64_t>>& relations,
                                               std::size_t ncols) {
    const std::size_t nrows = relations.size();
    std::vector<std::vector<mpz_class>> m(nrows, std::vector<mpz_class>(ncols));
    for (std::size_t i = 0; i < nrows; ++i) {
        if (relations[i].size() != ncols) throw input_error("bad_relations", "relation row has wrong length");
        for (std::size_t j = 0; j < ncols; ++j) m[i][j] = static_cast<long>(relations[i][j]);
    }

    std::vector<mpz_class> diag;
    std::size_t r0 = 0;
    for (std::size_t c0 = 0; c0 < ncols; ++c0) {
        // repeat until row r0 and column c0 are clear except the pivot
        for (;;) {
            // smallest nonzero entry in the remaining block as pivot
            std::size_t pr = nrows, pc = ncols;
            for (std::size_t i = r0; i < nrows; ++i)
                for (std::size_t j = c0; j < ncols; ++j)
                    if (m[i][j] != 0 && (pr == nrows || abs(m[i][j]) < abs(m[pr][pc]))) {
                        pr = i;
                        pc = j;
                    }
            if (pr == nrows) throw input_error("infinite_group", "relations do not define a finite group");
            std::swap(m[r0], m[pr]);
            for (auto& row : m) std::swap(row[c0], row[pc]);

            bool clean = true;
            for (std::size_t i = r0 + 1; i < nrows; ++i) {
                if (m[i][c0] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), m[i][c0].get_mpz_t(), m[r0][c0].get_mpz_t());
                for (std::size_t j = c0; j < ncols; ++j) m[i][j] -= q * m[r0][j];
                if (m[i][c0] != 0) clean = false;
            }
            for (std::size_t j = c0 + 1; j < ncols; ++j) {
                if (m[r0][j] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), m[r0][j].get_mpz_t(), m[r0][c0].get_mpz_t());
                for (std::size_t i = r0; i < nrows; ++i) m[i][j] -= q * m[i][c0];
                if (m[r0][j] != 0) clean = false;
            }
            if (clean) break;
        }
        diag.push_back(abs(m[r0][c0]));
        ++r0;
        if (r0 > nrows) break;
    }

    std::vector<std::int64_t> orders;
    for (const auto& d : diag) {
        if (!d.fits_slong_p()) throw std::overflow_error("group order overflows");
        if (d > 1) orders.push_back(d.get_si());
    }
    return AbelianGroupStructure(orders);
}

}  // namespace ramify
