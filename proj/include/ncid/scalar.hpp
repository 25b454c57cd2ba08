#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ncid {

using Integer = mpz_class;
using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string to_string(const Integer& z);
std::string to_string(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

Integer binomial(unsigned long n, unsigned long k);
Integer factorial(unsigned long n);

// ---------------------------------------------------------------------------
// Word-size modular arithmetic. Moduli are primes below 2^63.

using u64 = std::uint64_t;

inline u64 mul_mod(u64 a, u64 b, u64 p)
{
    if (p <= 0xffffffffULL) return a * b % p;
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p);
}

inline u64 add_mod(u64 a, u64 b, u64 p)
{
    u64 s = a + b;
    return s >= p ? s - p : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

u64 pow_mod(u64 a, u64 e, u64 p);
u64 inv_mod(u64 a, u64 p);

// Reduction of a rational modulo p; empty when p divides the denominator.
std::optional<u64> reduce_mod(const Rational& q, u64 p);
u64 reduce_mod(const Integer& z, u64 p);

// Rational reconstruction of residue r modulo m with |num|, den <= sqrt(m/2).
std::optional<Rational> rational_reconstruct(const Integer& r, const Integer& m);

// Incremental CRT: combine (r mod m) with (s mod p) in place.
void crt_combine(Integer& r, Integer& m, u64 s, u64 p);

// ~31-bit primes for matrix evaluation, ~62-bit primes for linear algebra.
std::span<const u64> small_primes();
std::span<const u64> large_primes();

bool is_prime_u64(u64 n);
// The `count` largest primes below `bound`, descending.
std::vector<u64> primes_below(u64 bound, std::size_t count);

// Prime list override via NCID_PRIMES (comma separated); falls back to small_primes().
std::vector<u64> default_eval_primes();

}  // namespace ncid
