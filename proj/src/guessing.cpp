#include "ncid/guessing.hpp"

#include "ncid/linalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace ncid {

std::string AnnihilatorPoly::to_string(std::string_view t, std::string_view s) const
{
    auto tpow = [&](int i) { return i == 0 ? std::string() : std::string(t) + (i > 1 ? "^" + std::to_string(i) : ""); };
    auto spow = [&](int j) { return j == 0 ? std::string() : std::string(s) + (j > 1 ? "^" + std::to_string(j) : ""); };
    std::string out;
    for (int j = deg_s; j >= 0; --j) {
        std::vector<std::pair<int, Rational>> row;
        for (int i = deg_t; i >= 0; --i)
            if (coeff(i, j) != 0) row.emplace_back(i, coeff(i, j));
        if (row.empty()) continue;
        // c(t) printed highest power first; a lone term carries its own sign
        auto term = [&](int i, const Rational& mag) {
            std::string m = tpow(i);
            if (m.empty()) return ncid::to_string(mag);
            return mag == 1 ? m : ncid::to_string(mag) + "*" + m;
        };
        bool negative = row.size() == 1 && row.front().second < 0;
        std::string body;
        if (row.size() == 1) {
            body = term(row.front().first, abs(row.front().second));
        } else {
            for (const auto& [i, c] : row) {
                body += body.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
                body += term(i, abs(c));
            }
            body = "(" + body + ")";
        }
        std::string sj = spow(j);
        std::string piece;
        if (sj.empty()) piece = body;
        else if (body == "1") piece = sj;
        else piece = body + "*" + sj;
        out += out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
        out += piece;
    }
    return out.empty() ? "0" : out;
}

std::vector<std::tuple<int, int, Rational>> AnnihilatorPoly::entries() const
{
    std::vector<std::tuple<int, int, Rational>> out;
    for (int j = 0; j <= deg_s; ++j)
        for (int i = 0; i <= deg_t; ++i)
            if (coeff(i, j) != 0) out.emplace_back(i, j, coeff(i, j));
    return out;
}

namespace {

void normalize(AnnihilatorPoly& Q)
{
    Rational lead = 0;
    for (int j = Q.deg_s; j >= 0 && lead == 0; --j)
        for (int i = 0; i <= Q.deg_t && lead == 0; ++i) lead = Q.coeff(i, j);
    if (lead == 0) throw std::invalid_argument("annihilator is identically zero");
    Integer den_lcm = 1, num_gcd = 0;
    for (auto& row : Q.q)
        for (auto& c : row) {
            c /= lead;
            if (c == 0) continue;
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
        }
    Q.primitive.assign(Q.q.size(), std::vector<Integer>(Q.q.front().size(), Integer(0)));
    for (std::size_t j = 0; j < Q.q.size(); ++j)
        for (std::size_t i = 0; i < Q.q[j].size(); ++i) {
            Rational v = Q.q[j][i] * den_lcm;
            Q.primitive[j][i] = v.get_num();
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_num_mpz_t());
        }
    for (auto& row : Q.primitive)
        for (auto& z : row) z /= num_gcd;
}

// Powers s^0..s^max_j modulo p over the first `len` coefficients.
struct ModPowers {
    u64 p = 0;
    std::vector<std::vector<u64>> pw;
};

std::optional<ModPowers> mod_powers(const ScalarSeries& s, int max_j, u64 p)
{
    const std::size_t len = s.size();
    std::vector<u64> base(len);
    for (std::size_t k = 0; k < len; ++k) {
        auto r = reduce_mod(s[k], p);
        if (!r) return std::nullopt;
        base[k] = *r;
    }
    ModPowers m{p, {}};
    m.pw.push_back(std::vector<u64>(len, 0));
    m.pw[0][0] = 1;
    for (int j = 1; j <= max_j; ++j) {
        const auto& prev = m.pw.back();
        std::vector<u64> next(len, 0);
        for (std::size_t a = 0; a < len; ++a) {
            if (prev[a] == 0) continue;
            for (std::size_t b = 0; a + b < len; ++b)
                if (base[b]) next[a + b] = add_mod(next[a + b], mul_mod(prev[a], base[b], p), p);
        }
        m.pw.push_back(std::move(next));
    }
    return m;
}

// Columns ordered (j, i) with index j*(degT+1)+i; row r reads the t^r coefficient.
PMatrix system(const ModPowers& m, int degT, int degS, std::size_t rows)
{
    const std::size_t cols = static_cast<std::size_t>((degT + 1) * (degS + 1));
    PMatrix A(PrimeField{m.p}, rows, cols);
    for (int j = 0; j <= degS; ++j)
        for (int i = 0; i <= degT; ++i) {
            std::size_t c = static_cast<std::size_t>(j * (degT + 1) + i);
            for (std::size_t r = static_cast<std::size_t>(i); r < rows; ++r) A(r, c) = m.pw[static_cast<std::size_t>(j)][r - static_cast<std::size_t>(i)];
        }
    return A;
}

// First nullspace basis vector (lowest free column) and that column.
std::optional<std::pair<std::size_t, std::vector<u64>>> first_kernel_vector(const PMatrix& A)
{
    auto basis = nullspace(A);
    if (basis.empty()) return std::nullopt;
    const auto& v = basis.front();
    std::size_t free_col = 0;
    for (std::size_t c = v.size(); c-- > 0;)
        if (v[c] != 0) {
            free_col = c;
            break;
        }
    return std::make_pair(free_col, v);
}

class Guesser {
public:
    Guesser(const ScalarSeries& s, int max_j, std::size_t margin) : s_(s), max_j_(max_j), margin_(margin) {}

    std::size_t len() const { return s_.size(); }
    std::size_t unknowns(int degT, int degS) const { return static_cast<std::size_t>((degT + 1) * (degS + 1)); }
    bool fits(int degT, int degS) const { return unknowns(degT, degS) + margin_ <= len(); }
    /// Largest degT that fits for this degS, or -1.
    int max_fitting_t(int degS) const
    {
        if (len() < margin_ + static_cast<std::size_t>(degS + 1)) return -1;
        return static_cast<int>((len() - margin_) / static_cast<std::size_t>(degS + 1)) - 1;
    }

    /// Cheap existence test: a kernel modulo one prime on every known coefficient.
    bool exists_mod_p(int degT, int degS)
    {
        const ModPowers* m = powers(0);
        return m && !nullspace(system(*m, degT, degS, len())).empty();
    }

    std::optional<AnnihilatorPoly> run(int degT, int degS)
    {
        const std::size_t rows = len() - margin_;
        const ModPowers* filter = powers(0);
        if (!filter) return std::nullopt;
        std::size_t dim_solve = nullspace(system(*filter, degT, degS, rows)).size();
        if (dim_solve == 0) return std::nullopt;
        auto kv = first_kernel_vector(system(*filter, degT, degS, len()));
        if (!kv) return std::nullopt;
        std::size_t dim_all = nullspace(system(*filter, degT, degS, len())).size();

        const std::size_t cols = kv->second.size();
        const std::size_t free_col = kv->first;
        Integer modulus = 1;
        std::vector<Integer> residues(cols, Integer(0));
        std::optional<std::vector<Rational>> previous;
        for (std::size_t pi = 1; pi < kMaxPrimes; ++pi) {
            const ModPowers* m = powers(pi);
            if (!m) continue;
            auto k = first_kernel_vector(system(*m, degT, degS, len()));
            if (!k || k->first != free_col) continue;
            for (std::size_t c = 0; c < cols; ++c) {
                Integer mod = modulus;
                crt_combine(residues[c], mod, k->second[c], m->p);
            }
            modulus *= Integer(static_cast<unsigned long>(m->p));
            std::vector<Rational> cand(cols);
            bool ok = true;
            for (std::size_t c = 0; c < cols && ok; ++c) {
                auto q = rational_reconstruct(residues[c], modulus);
                if (!q) ok = false;
                else cand[c] = *q;
            }
            if (!ok) {
                previous.reset();
                continue;
            }
            bool stable = previous && *previous == cand;
            previous = cand;
            if (!stable) continue;

            AnnihilatorPoly Q;
            Q.deg_t = degT;
            Q.deg_s = degS;
            Q.q.assign(static_cast<std::size_t>(degS + 1), std::vector<Rational>(static_cast<std::size_t>(degT + 1)));
            for (int j = 0; j <= degS; ++j)
                for (int i = 0; i <= degT; ++i)
                    Q.q[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = cand[static_cast<std::size_t>(j * (degT + 1) + i)];
            normalize(Q);
            Q.used = rows;
            // coefficients spent on picking a vector out of a larger kernel do not count as checks
            std::size_t spent = dim_solve - dim_all;
            Q.margin = margin_ > spent ? margin_ - spent : 0;
            Q.verified = verify_annihilator(Q, s_, len() - 1).zero;
            if (Q.verified) return Q;
            return std::nullopt;
        }
        return std::nullopt;
    }

private:
    static constexpr std::size_t kMaxPrimes = 64;

    const ModPowers* powers(std::size_t idx)
    {
        while (primes_.size() <= idx) {
            if (primes_.empty()) primes_.push_back(small_primes()[0]);
            else primes_.push_back(primes_below(primes_.size() == 1 ? (u64{1} << 62) : primes_.back(), 1).front());
        }
        auto it = cache_.find(idx);
        if (it == cache_.end()) it = cache_.emplace(idx, mod_powers(s_, max_j_, primes_[idx])).first;
        return it->second ? &*it->second : nullptr;
    }

    const ScalarSeries& s_;
    int max_j_;
    std::size_t margin_;
    std::vector<u64> primes_;
    std::map<std::size_t, std::optional<ModPowers>> cache_;
};

}  // namespace

AnnihilatorPoly make_annihilator(int deg_t, int deg_s, const std::vector<std::tuple<int, int, Rational>>& entries)
{
    AnnihilatorPoly Q;
    Q.deg_t = deg_t;
    Q.deg_s = deg_s;
    Q.q.assign(static_cast<std::size_t>(deg_s + 1), std::vector<Rational>(static_cast<std::size_t>(deg_t + 1)));
    for (const auto& [i, j, c] : entries) {
        if (i < 0 || i > deg_t || j < 0 || j > deg_s) throw std::out_of_range("annihilator entry out of range");
        Q.q[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = c;
    }
    normalize(Q);
    return Q;
}

ResidualReport verify_annihilator(const AnnihilatorPoly& Q, const ScalarSeries& s, std::size_t upto)
{
    if (s.order() < upto) throw InsufficientData("verify_annihilator: series known only through t^" + std::to_string(s.order()));
    ScalarSeries S = s.truncated(upto);
    auto row = [&](int j) {
        ScalarSeries r(upto);
        for (int i = 0; i <= Q.deg_t && static_cast<std::size_t>(i) <= upto; ++i) r[static_cast<std::size_t>(i)] = Q.coeff(i, j);
        return r;
    };
    ScalarSeries acc = row(Q.deg_s);
    for (int j = Q.deg_s - 1; j >= 0; --j) acc = acc * S + row(j);
    ResidualReport rep;
    rep.checked_through = upto;
    for (std::size_t k = 0; k <= upto; ++k)
        if (acc[k] != 0) {
            rep.zero = false;
            rep.first_nonzero = k;
            break;
        }
    return rep;
}

std::optional<AnnihilatorPoly> guess_annihilator(const ScalarSeries& s, int degT, int degS, std::size_t margin)
{
    if (degT < 0 || degS < 1) throw std::invalid_argument("guess_annihilator: need degT >= 0 and degS >= 1");
    Guesser g(s, degS, margin);
    if (!g.fits(degT, degS))
        throw InsufficientData("guess_annihilator: need " + std::to_string((degT + 1) * (degS + 1) + static_cast<int>(margin)) +
                               " coefficients, have " + std::to_string(s.size()));
    return g.run(degT, degS);
}

GuessSearch search_annihilator(const ScalarSeries& s, int max_deg_t, int max_deg_s, std::size_t margin)
{
    // Existence is monotone: Q at (T, S) gives tQ at (T+1, S) and QS at (T, S+1).
    // So the least degT per degS is found by bisection and is nonincreasing in degS,
    // which reproduces the first hit of the plain scan ordered by (total, degS).
    GuessSearch out;
    Guesser g(s, max_deg_s, margin);
    int best_total = -1, best_s = -1, best_t = -1;
    int t_cap = max_deg_t;
    for (int degS = 1; degS <= max_deg_s; ++degS) {
        if (best_total >= 0 && degS >= best_total) break;
        int hi = std::min(t_cap, g.max_fitting_t(degS));
        if (hi < 0) {
            ++out.pairs_skipped;
            continue;
        }
        ++out.pairs_tried;
        if (!g.exists_mod_p(hi, degS)) continue;
        int lo = 0;
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            ++out.pairs_tried;
            if (g.exists_mod_p(mid, degS)) hi = mid;
            else lo = mid + 1;
        }
        t_cap = hi;
        if (best_total < 0 || degS + hi < best_total) {
            best_total = degS + hi;
            best_s = degS;
            best_t = hi;
        }
    }
    if (best_total >= 0) out.found = g.run(best_t, best_s);
    return out;
}

namespace {

BiSeries binomial_exponent(const CommPoly& P, std::size_t N)
{
    BiSeries p = BiSeries::from_poly(P, N);
    if (p.at(0, 0) != 1) throw PreconditionError("binomial_transform requires P(0,0) = 1");
    for (const auto& [e, c] : P)
        if (e.size() != 2) throw std::invalid_argument("binomial_transform expects a polynomial in x, y");
    BiSeries g = series_log(p);
    for (std::size_t k = 1; k <= N; ++k)
        for (std::size_t n = 0; n <= k; ++n)
            if (g.at(n, k - n) != 0) g.at(n, k - n) *= Rational(binomial(k, n));
    return g;
}

}  // namespace

BiSeries binomial_transform(const CommPoly& P, std::size_t N) { return series_exp(binomial_exponent(P, N)); }

ScalarSeries binomial_transform_line(const CommPoly& P, const Rational& slope, std::size_t N)
{
    return series_exp(binomial_exponent(P, N).restrict_to_line(slope));
}

}  // namespace ncid
