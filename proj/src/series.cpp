#include "ncid/series.hpp"

#include <algorithm>
#include <numeric>

namespace ncid {

ScalarSeries::ScalarSeries(std::vector<Rational> coeffs) : c_(std::move(coeffs))
{
    if (c_.empty()) c_.emplace_back(0);
}

ScalarSeries ScalarSeries::constant(const Rational& c, std::size_t order)
{
    ScalarSeries s(order);
    s.c_[0] = c;
    return s;
}

ScalarSeries ScalarSeries::monomial(const Rational& c, std::size_t k, std::size_t order)
{
    ScalarSeries s(order);
    if (k <= order) s.c_[k] = c;
    return s;
}

ScalarSeries ScalarSeries::truncated(std::size_t order) const
{
    ScalarSeries s(order);
    for (std::size_t k = 0; k <= order && k < c_.size(); ++k) s.c_[k] = c_[k];
    return s;
}

bool ScalarSeries::has_integer_coefficients() const
{
    return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return is_integer(q); });
}

bool ScalarSeries::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; });
}

ScalarSeries operator+(const ScalarSeries& a, const ScalarSeries& b)
{
    ScalarSeries r(std::min(a.order(), b.order()));
    for (std::size_t k = 0; k < r.size(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
    return r;
}

ScalarSeries operator-(const ScalarSeries& a, const ScalarSeries& b)
{
    ScalarSeries r(std::min(a.order(), b.order()));
    for (std::size_t k = 0; k < r.size(); ++k) r.c_[k] = a.c_[k] - b.c_[k];
    return r;
}

ScalarSeries operator*(const ScalarSeries& a, const ScalarSeries& b)
{
    ScalarSeries r(std::min(a.order(), b.order()));
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; i + j < n; ++j)
            if (b.c_[j] != 0) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
}

ScalarSeries operator*(const Rational& k, const ScalarSeries& a)
{
    ScalarSeries r = a;
    for (auto& q : r.c_) q *= k;
    return r;
}

ScalarSeries ScalarSeries::euler() const
{
    ScalarSeries r = *this;
    for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] *= static_cast<unsigned long>(k);
    return r;
}

ScalarSeries ScalarSeries::derivative() const
{
    if (c_.size() == 1) return ScalarSeries(std::size_t{0});
    ScalarSeries r(order() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) r.c_[k - 1] = c_[k] * static_cast<unsigned long>(k);
    return r;
}

ScalarSeries ScalarSeries::stretch(std::size_t g) const
{
    if (g == 0) throw std::invalid_argument("stretch by 0");
    ScalarSeries r(order() * g + g - 1);
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k * g] = c_[k];
    return r;
}

std::string ScalarSeries::to_string(std::string_view var) const
{
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        Rational mag = abs(c_[k]);
        if (out.empty())
            out += c_[k] < 0 ? "-" : "";
        else
            out += c_[k] < 0 ? " - " : " + ";
        bool unit = mag == 1 && k > 0;
        if (!unit) out += ncid::to_string(mag);
        if (k > 0) {
            if (!unit) out += "*";
            out += std::string(var);
            if (k > 1) out += "^" + std::to_string(k);
        }
    }
    if (out.empty()) out = "0";
    out += " + O(" + std::string(var) + "^" + std::to_string(order() + 1) + ")";
    return out;
}

ScalarSeries series_exp(const ScalarSeries& s)
{
    if (s[0] != 0) throw PreconditionError("exp requires zero constant term");
    // g = exp(s): k g_k = sum_{j=1..k} j s_j g_{k-j}
    ScalarSeries g(s.order());
    g[0] = 1;
    for (std::size_t k = 1; k < g.size(); ++k) {
        Rational acc = 0;
        for (std::size_t j = 1; j <= k; ++j)
            if (s[j] != 0) acc += s[j] * static_cast<unsigned long>(j) * g[k - j];
        g[k] = acc / static_cast<unsigned long>(k);
    }
    return g;
}

ScalarSeries series_inverse(const ScalarSeries& s)
{
    if (s[0] == 0) throw PreconditionError("inverse requires nonzero constant term");
    ScalarSeries r(s.order());
    Rational inv0 = 1 / s[0];
    r[0] = inv0;
    for (std::size_t k = 1; k < r.size(); ++k) {
        Rational acc = 0;
        for (std::size_t j = 1; j <= k; ++j)
            if (s[j] != 0) acc += s[j] * r[k - j];
        r[k] = -acc * inv0;
    }
    return r;
}

ScalarSeries series_log(const ScalarSeries& s)
{
    if (s[0] != 1) throw PreconditionError("log requires constant term 1");
    // t L' = t s' / s
    ScalarSeries q = s.euler() * series_inverse(s);
    ScalarSeries r(s.order());
    for (std::size_t k = 1; k < r.size(); ++k) r[k] = q[k] / static_cast<unsigned long>(k);
    return r;
}

ScalarSeries series_power(const ScalarSeries& s, const Rational& alpha)
{
    if (s[0] != 1) throw PreconditionError("power requires constant term 1");
    // g = s^alpha: s * t g' = alpha * (t s') * g
    // => k g_k = sum_{j=1..k} (alpha*j - (k-j)) s_j g_{k-j}
    ScalarSeries g(s.order());
    g[0] = 1;
    for (std::size_t k = 1; k < g.size(); ++k) {
        Rational acc = 0;
        for (std::size_t j = 1; j <= k; ++j) {
            if (s[j] == 0) continue;
            Rational w = alpha * static_cast<unsigned long>(j) - static_cast<long>(k - j);
            acc += w * s[j] * g[k - j];
        }
        g[k] = acc / static_cast<unsigned long>(k);
    }
    return g;
}

ScalarSeries scalar_series_exp_log(const ScalarSeries& s, ExpLog mode)
{
    return mode == ExpLog::exp ? series_exp(s) : series_log(s);
}

CompressedSeries compress(const ScalarSeries& s)
{
    std::size_t g = 0;
    for (std::size_t k = 1; k < s.size(); ++k)
        if (s[k] != 0) g = std::gcd(g, k);
    if (g <= 1) return {1, s};
    ScalarSeries z(s.order() / g);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = s[k * g];
    return {g, z};
}

// ---------------------------------------------------------------------------

BiSeries::BiSeries(std::size_t order) : parts_(order + 1)
{
    for (std::size_t k = 0; k <= order; ++k) parts_[k].assign(k + 1, Rational(0));
}

BiSeries BiSeries::from_poly(const CommPoly& p, std::size_t order)
{
    BiSeries s(order);
    for (const auto& [e, c] : p) {
        if (e.size() != 2 || e[0] < 0 || e[1] < 0)
            throw std::invalid_argument("BiSeries::from_poly: need nonnegative exponents in two variables");
        auto n = static_cast<std::size_t>(e[0]), m = static_cast<std::size_t>(e[1]);
        if (n + m <= order) s.at(n, m) += c;
    }
    return s;
}

Rational BiSeries::get(std::size_t n, std::size_t m) const
{
    if (n + m > order()) return 0;
    return at(n, m);
}

BiSeries operator+(const BiSeries& a, const BiSeries& b)
{
    BiSeries r(std::min(a.order(), b.order()));
    for (std::size_t k = 0; k <= r.order(); ++k)
        for (std::size_t n = 0; n <= k; ++n) r.parts_[k][n] = a.parts_[k][n] + b.parts_[k][n];
    return r;
}

BiSeries operator-(const BiSeries& a, const BiSeries& b)
{
    BiSeries r(std::min(a.order(), b.order()));
    for (std::size_t k = 0; k <= r.order(); ++k)
        for (std::size_t n = 0; n <= k; ++n) r.parts_[k][n] = a.parts_[k][n] - b.parts_[k][n];
    return r;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b)
{
    BiSeries r(std::min(a.order(), b.order()));
    const std::size_t N = r.order();
    for (std::size_t ka = 0; ka <= N; ++ka)
        for (std::size_t na = 0; na <= ka; ++na) {
            const Rational& x = a.parts_[ka][na];
            if (x == 0) continue;
            for (std::size_t kb = 0; ka + kb <= N; ++kb)
                for (std::size_t nb = 0; nb <= kb; ++nb) {
                    const Rational& y = b.parts_[kb][nb];
                    if (y != 0) r.parts_[ka + kb][na + nb] += x * y;
                }
        }
    return r;
}

bool BiSeries::is_zero() const
{
    for (const auto& part : parts_)
        for (const auto& q : part)
            if (q != 0) return false;
    return true;
}

BiSeries BiSeries::euler() const
{
    BiSeries r = *this;
    for (std::size_t k = 0; k < r.parts_.size(); ++k)
        for (auto& q : r.parts_[k]) q *= static_cast<unsigned long>(k);
    return r;
}

ScalarSeries BiSeries::restrict_to_line(const Rational& slope) const
{
    ScalarSeries s(order());
    for (std::size_t k = 0; k <= order(); ++k) {
        Rational acc = 0;
        Rational cpow = 1;  // slope^(k-n), n descending
        for (std::size_t n = k + 1; n-- > 0;) {
            if (parts_[k][n] != 0) acc += parts_[k][n] * cpow;
            cpow *= slope;
        }
        s[k] = acc;
    }
    return s;
}

std::string BiSeries::to_string() const
{
    std::string out;
    for (std::size_t k = 0; k <= order(); ++k)
        for (std::size_t n = k + 1; n-- > 0;) {
            const Rational& q = parts_[k][n];
            if (q == 0) continue;
            std::size_t m = k - n;
            out += out.empty() ? (q < 0 ? "-" : "") : (q < 0 ? " - " : " + ");
            Rational mag = abs(q);
            bool unit = mag == 1 && k > 0;
            std::string mono;
            if (n) mono += "x" + (n > 1 ? "^" + std::to_string(n) : std::string());
            if (m) mono += (n ? "*" : "") + std::string("y") + (m > 1 ? "^" + std::to_string(m) : std::string());
            if (!unit) out += ncid::to_string(mag) + (mono.empty() ? "" : "*");
            out += mono;
        }
    if (out.empty()) out = "0";
    return out + " + O(deg " + std::to_string(order() + 1) + ")";
}

BiSeries series_inverse(const BiSeries& s)
{
    if (s.at(0, 0) == 0) throw PreconditionError("inverse requires nonzero constant term");
    const std::size_t N = s.order();
    BiSeries r(N);
    Rational inv0 = 1 / s.at(0, 0);
    r.at(0, 0) = inv0;
    // sparse list of the nonconstant terms of s
    struct T { std::size_t n, m; Rational c; };
    std::vector<T> terms;
    for (std::size_t k = 1; k <= N; ++k)
        for (std::size_t n = 0; n <= k; ++n)
            if (s.at(n, k - n) != 0) terms.push_back({n, k - n, s.at(n, k - n)});
    for (std::size_t k = 1; k <= N; ++k)
        for (std::size_t n = 0; n <= k; ++n) {
            std::size_t m = k - n;
            Rational acc = 0;
            for (const auto& t : terms) {
                if (t.n > n || t.m > m) continue;
                const Rational& v = r.at(n - t.n, m - t.m);
                if (v != 0) acc += t.c * v;
            }
            r.at(n, m) = -acc * inv0;
        }
    return r;
}

BiSeries series_log(const BiSeries& s)
{
    if (s.at(0, 0) != 1) throw PreconditionError("log requires constant term 1");
    // H = E log s solves H * s = E s; the recurrence only touches the support of s
    const std::size_t N = s.order();
    struct T { std::size_t n, m; Rational c; };
    std::vector<T> terms;
    for (std::size_t k = 1; k <= N; ++k)
        for (std::size_t n = 0; n <= k; ++n)
            if (s.at(n, k - n) != 0) terms.push_back({n, k - n, s.at(n, k - n)});
    BiSeries h(N), r(N);
    for (std::size_t k = 1; k <= N; ++k)
        for (std::size_t n = 0; n <= k; ++n) {
            std::size_t m = k - n;
            Rational acc = s.at(n, m) * static_cast<unsigned long>(k);
            for (const auto& t : terms) {
                if (t.n > n || t.m > m || (t.n == n && t.m == m)) continue;
                const Rational& v = h.at(n - t.n, m - t.m);
                if (v != 0) acc -= t.c * v;
            }
            h.at(n, m) = acc;
            r.at(n, m) = acc / static_cast<unsigned long>(k);
        }
    return r;
}

BiSeries series_exp(const BiSeries& s)
{
    if (s.at(0, 0) != 0) throw PreconditionError("exp requires zero constant term");
    // E g = (E s) g, graded by total degree
    const std::size_t N = s.order();
    BiSeries es = s.euler();
    BiSeries g(N);
    g.at(0, 0) = 1;
    for (std::size_t k = 1; k <= N; ++k)
        for (std::size_t n = 0; n <= k; ++n) {
            std::size_t m = k - n;
            Rational acc = 0;
            for (std::size_t j = 1; j <= k; ++j)
                for (std::size_t a = 0; a <= j && a <= n; ++a) {
                    std::size_t b = j - a;
                    if (b > m) continue;
                    const Rational& x = es.at(a, b);
                    if (x == 0) continue;
                    const Rational& y = g.at(n - a, m - b);
                    if (y != 0) acc += x * y;
                }
            g.at(n, m) = acc / static_cast<unsigned long>(k);
        }
    return g;
}

// ---------------------------------------------------------------------------

TruncSeries::TruncSeries(const NCPoly& p, std::size_t order) : parts_(order + 1)
{
    std::vector<NCPolyBuilder> b(order + 1);
    for (const auto& [w, c] : p.terms()) {
        if (!w.is_positive()) throw std::invalid_argument("TruncSeries: words must be positive");
        if (w.length() <= order) b[w.length()].add(w, c);
    }
    for (std::size_t d = 0; d <= order; ++d) parts_[d] = b[d].finish();
}

NCPoly TruncSeries::to_poly() const
{
    NCPolyBuilder b;
    for (const auto& p : parts_) b.add(p);
    return b.finish();
}

bool TruncSeries::is_zero() const
{
    return std::all_of(parts_.begin(), parts_.end(), [](const NCPoly& p) { return p.is_zero(); });
}

TruncSeries TruncSeries::truncated(std::size_t order) const
{
    TruncSeries r(order);
    for (std::size_t d = 0; d <= order && d < parts_.size(); ++d) r.parts_[d] = parts_[d];
    return r;
}

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b)
{
    TruncSeries r(std::min(a.order(), b.order()));
    for (std::size_t d = 0; d <= r.order(); ++d) r.parts_[d] = a.parts_[d] + b.parts_[d];
    return r;
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b)
{
    TruncSeries r(std::min(a.order(), b.order()));
    for (std::size_t d = 0; d <= r.order(); ++d) r.parts_[d] = a.parts_[d] - b.parts_[d];
    return r;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b)
{
    const std::size_t N = std::min(a.order(), b.order());
    TruncSeries r(N);
    for (std::size_t d = 0; d <= N; ++d) {
        NCPolyBuilder acc;
        for (std::size_t i = 0; i <= d; ++i) {
            const NCPoly& x = a.parts_[i];
            const NCPoly& y = b.parts_[d - i];
            if (x.is_zero() || y.is_zero()) continue;
            for (const auto& [u, cu] : x.terms())
                for (const auto& [v, cv] : y.terms()) acc.add(u * v, cu * cv);
        }
        r.parts_[d] = acc.finish();
    }
    return r;
}

TruncSeries operator*(const Rational& k, const TruncSeries& a)
{
    TruncSeries r = a;
    for (auto& p : r.parts_) p = k * p;
    return r;
}

std::string TruncSeries::to_string(const Alphabet& alphabet) const
{
    std::string body = to_poly().to_string(alphabet);
    return body + " + O(deg " + std::to_string(order() + 1) + ")";
}

TruncSeries series_inverse(const TruncSeries& s)
{
    Rational c0 = s.part(0).coefficient(Word());
    if (c0 == 0) throw PreconditionError("series_inverse: constant term is not a unit");
    const std::size_t N = s.order();
    // r = c0^-1 (1 + u + u^2 + ...), u = 1 - c0^-1 s has no constant term
    TruncSeries u = TruncSeries::one(N) - (1 / c0) * s;
    TruncSeries acc = TruncSeries::one(N);
    TruncSeries pw = TruncSeries::one(N);
    for (std::size_t k = 1; k <= N; ++k) {
        pw = pw * u;
        if (pw.is_zero()) break;
        acc = acc + pw;
    }
    return (1 / c0) * acc;
}

BiSeries abelianize(const TruncSeries& s)
{
    BiSeries r(s.order());
    for (std::size_t d = 0; d <= s.order(); ++d)
        for (const auto& [e, c] : abelianize(s.part(d), 2)) {
            if (e[0] < 0 || e[1] < 0) throw std::invalid_argument("abelianize: negative exponent");
            r.at(static_cast<std::size_t>(e[0]), static_cast<std::size_t>(e[1])) += c;
        }
    return r;
}

}  // namespace ncid
