#include "ncid/scalar.hpp"

#include <array>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace ncid {

Rational parse_rational(std::string_view text)
{
    Rational q;
    if (q.set_str(std::string(text), 10) != 0)
        throw std::invalid_argument("not a rational: " + std::string(text));
    q.canonicalize();
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator: " + std::string(text));
    return q;
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

Integer binomial(unsigned long n, unsigned long k)
{
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Integer factorial(unsigned long n)
{
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

u64 pow_mod(u64 a, u64 e, u64 p)
{
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mul_mod(r, a, p);
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 inv_mod(u64 a, u64 p)
{
    if (a % p == 0) throw std::domain_error("inverse of zero modulo p");
    return pow_mod(a, p - 2, p);
}

u64 reduce_mod(const Integer& z, u64 p)
{
    return mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(p));
}

std::optional<u64> reduce_mod(const Rational& q, u64 p)
{
    u64 den = reduce_mod(q.get_den(), p);
    if (den == 0) return std::nullopt;
    return mul_mod(reduce_mod(q.get_num(), p), inv_mod(den, p), p);
}

std::optional<Rational> rational_reconstruct(const Integer& r, const Integer& m)
{
    // Extended Euclid on (m, r) stopped at half size (Wang's algorithm).
    Integer bound;
    mpz_fdiv_q_2exp(bound.get_mpz_t(), m.get_mpz_t(), 1);
    mpz_sqrt(bound.get_mpz_t(), bound.get_mpz_t());

    Integer r0 = m, r1 = r % m;
    if (r1 < 0) r1 += m;
    Integer t0 = 0, t1 = 1;
    while (r1 > bound) {
        Integer q = r0 / r1;
        Integer r2 = r0 - q * r1;
        Integer t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    Integer g;
    mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
    if (g != 1) return std::nullopt;
    Rational q(r1, t1);
    q.canonicalize();
    return q;
}

void crt_combine(Integer& r, Integer& m, u64 s, u64 p)
{
    if (m == 1) {
        r = Integer(static_cast<unsigned long>(s));
        m = Integer(static_cast<unsigned long>(p));
        return;
    }
    u64 rp = reduce_mod(r, p);
    u64 mp = reduce_mod(m, p);
    u64 k = mul_mod(sub_mod(s % p, rp, p), inv_mod(mp, p), p);
    r += m * Integer(static_cast<unsigned long>(k));
    m *= Integer(static_cast<unsigned long>(p));
}

namespace {
constexpr std::array<u64, 3> kSmall{2147483647ULL, 2147483629ULL, 2147483587ULL};
constexpr std::array<u64, 8> kLarge{4611686018427387847ULL, 4611686018427387817ULL,
                                    4611686018427387787ULL, 4611686018427387761ULL,
                                    4611686018427387751ULL, 4611686018427387737ULL,
                                    4611686018427387733ULL, 4611686018427387709ULL};
}  // namespace

std::span<const u64> small_primes() { return kSmall; }
std::span<const u64> large_primes() { return kLarge; }

std::vector<u64> default_eval_primes()
{
    if (const char* env = std::getenv("NCID_PRIMES"); env && *env) {
        std::vector<u64> out;
        std::stringstream ss(env);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(std::stoull(item));
        if (!out.empty()) return out;
    }
    return {kSmall.begin(), kSmall.end()};
}

}  // namespace ncid

namespace ncid {

bool is_prime_u64(u64 n)
{
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<u64> primes_below(u64 bound, std::size_t count)
{
    std::vector<u64> out;
    for (u64 n = bound - 1; out.size() < count && n > 2; --n)
        if (is_prime_u64(n)) out.push_back(n);
    return out;
}

}  // namespace ncid
