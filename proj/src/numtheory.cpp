#include "ramify/numtheory.hpp"

#include <algorithm>
#include <cstdlib>
#include <tuple>
#include <stdexcept>
#include <string>

#include "ramify/errors.hpp"

namespace ramify {

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    if (n < 1) throw input_error("bad_integer", "can only factor positive integers");
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

std::vector<std::int64_t> divisors(std::int64_t n) {
    std::vector<std::int64_t> out{1};
    for (auto [q, e] : factorize(n)) {
        std::size_t len = out.size();
        std::int64_t pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= q;
            for (std::size_t i = 0; i < len; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int valuation(std::int64_t n, std::int64_t p) {
    if (n == 0) throw internal_error("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

int valuation(const mpz_class& n, std::int64_t p) {
    if (n == 0) throw internal_error("valuation of zero");
    mpz_class t = n;
    return static_cast<int>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), mpz_class(static_cast<long>(p)).get_mpz_t()));
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>(static_cast<__int128>(mod(a, m)) * mod(b, m) % m);
}

std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t m) {
    std::int64_t r = 1 % m, b = mod(a, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

std::int64_t invmod(std::int64_t a, std::int64_t m) {
    std::int64_t old_r = mod(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    }
    if (old_r != 1) throw internal_error("invmod: not invertible");
    return mod(old_s, m);
}

std::int64_t ipow(std::int64_t p, int k) {
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i)
        if (__builtin_mul_overflow(r, p, &r)) throw std::overflow_error("integer power overflows int64");
    return r;
}

int kronecker(std::int64_t D, std::int64_t n) {
    if (n <= 0) throw input_error("bad_integer", "kronecker symbol needs n > 0");
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (D % 2 == 0) return 0;
        std::int64_t r = mod(D, 8);
        if (r == 3 || r == 5) result = -result;
    }
    // Jacobi symbol (D/n) for odd n
    std::int64_t a = mod(D, n), m = n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            if (m % 8 == 3 || m % 8 == 5) result = -result;
        }
        std::swap(a, m);
        if (a % 4 == 3 && m % 4 == 3) result = -result;
        a %= m;
    }
    return m == 1 ? result : 0;
}

bool is_squarefree(std::int64_t n) {
    if (n == 0) return false;
    for (auto [q, e] : factorize(n < 0 ? -n : n))
        if (e > 1) return false;
    return true;
}

std::int64_t fundamental_discriminant(std::int64_t d) {
    if (d == 0 || d == 1 || !is_squarefree(d)) throw input_error("bad_field", "d must be squarefree and != 0, 1");
    return mod(d, 4) == 1 ? d : 4 * d;
}

bool is_fundamental_discriminant(std::int64_t D) {
    if (D == 0 || D == 1) return false;
    if (mod(D, 4) == 1) return is_squarefree(D);
    if (mod(D, 4) != 0) return false;
    std::int64_t m = D / 4;
    return (mod(m, 4) == 2 || mod(m, 4) == 3) && is_squarefree(m);
}

std::uint64_t enumeration_guard() {
    if (const char* env = std::getenv("RAMIFY_GUARD")) {
        try {
            std::size_t pos = 0;
            unsigned long long v = std::stoull(env, &pos);
            if (pos == std::string(env).size() && v > 0) return v;
        } catch (const std::exception&) {
        }
        throw input_error("bad_guard", "RAMIFY_GUARD must be a positive integer");
    }
    return 10'000'000ULL;
}

void check_guard(long double size, const char* what) {
    if (size > static_cast<long double>(enumeration_guard()))
        throw guard_error(std::string(what) + ": enumeration of " + std::to_string(static_cast<double>(size)) +
                          " elements exceeds the guard (set RAMIFY_GUARD to override)");
}

}  // namespace ramify
