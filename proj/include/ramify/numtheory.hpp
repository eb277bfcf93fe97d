#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <utility>
#include <vector>

namespace ramify {

bool is_prime(std::int64_t n);
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);

/// v_p(n) for n != 0.
int valuation(std::int64_t n, std::int64_t p);
int valuation(const mpz_class& n, std::int64_t p);

/// Non-negative residue.
inline std::int64_t mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}
std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t m);
/// Inverse of a modulo m; throws internal_error if not invertible.
std::int64_t invmod(std::int64_t a, std::int64_t m);
/// p^k, throwing std::overflow_error past int64.
std::int64_t ipow(std::int64_t p, int k);

/// Kronecker symbol (D/n) for n > 0.
int kronecker(std::int64_t D, std::int64_t n);

/// Fundamental discriminant of Q(sqrt d) for squarefree d != 0, 1.
std::int64_t fundamental_discriminant(std::int64_t d);
bool is_squarefree(std::int64_t n);
bool is_fundamental_discriminant(std::int64_t D);

/// Upper bound on enumerated set sizes, 10^7 unless RAMIFY_GUARD overrides it.
std::uint64_t enumeration_guard();
/// Throws guard_error when size exceeds the guard.
void check_guard(long double size, const char* what);

}  // namespace ramify
