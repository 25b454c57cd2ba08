#include "ncid/flows.hpp"

#include <functional>
#include <stdexcept>

namespace ncid {

namespace {

const Word kX = Word::generator(0);
const Word kY = Word::generator(1);

void require_positive_two_letter(const NCPoly& a)
{
    for (const auto& [w, c] : a.terms())
        if (!w.is_positive() || w.generator_bound() > 2) throw std::invalid_argument("expected a polynomial in X, Y without inverses");
}

// Leibniz extension of X -> dX, Y -> 0 on words, keeping words of length <= cap.
NCPoly derive(const NCPoly& a, const NCPoly& dX, std::size_t cap)
{
    NCPolyBuilder b;
    for (const auto& [w, c] : a.terms()) {
        auto letters = w.letters();
        for (std::size_t i = 0; i < letters.size(); ++i) {
            if (letters[i].generator != 0) continue;
            Word pre = w.prefix(i), post = w.suffix_from(i + 1);
            for (const auto& [u, cu] : dX.terms()) {
                if (pre.length() + u.length() + post.length() > cap) continue;
                b.add(pre * u * post, c * cu);
            }
        }
    }
    return b.finish();
}

constexpr std::size_t kNoCap = static_cast<std::size_t>(-1);

}  // namespace

NCPoly shuffle_c(int n, int m)
{
    if (n < 0 || m < 0 || n + m < 1) throw std::invalid_argument("shuffle_c needs n, m >= 0 and n + m >= 1");
    NCPolyBuilder b;
    std::vector<Letter> letters;
    std::function<void(int, int)> rec = [&](int a, int c) {
        if (a == 0 && c == 0) {
            b.add(Word::reduce(letters), 1);
            return;
        }
        if (a > 0) {
            letters.push_back({0, 1});
            rec(a - 1, c);
            letters.pop_back();
        }
        if (c > 0) {
            letters.push_back({1, 1});
            rec(a, c - 1);
            letters.pop_back();
        }
    };
    rec(n, m);
    return b.finish();
}

DeltaSpec DeltaSpec::basis(int n, int m, std::size_t order)
{
    if (n < 0 || m < 1) throw std::invalid_argument("delta_{n,m} needs n >= 0, m >= 1");
    DeltaSpec s;
    s.order = order;
    s.f[{n, m}] = 1;
    return s;
}

DeltaSpec DeltaSpec::from_series(const BiSeries& g)
{
    DeltaSpec s;
    s.order = g.order();
    for (std::size_t k = 0; k <= g.order(); ++k)
        for (std::size_t n = 0; n <= k; ++n) {
            const Rational& c = g.at(n, k - n);
            if (c == 0) continue;
            if (k == n) throw std::invalid_argument("generating series has a term without y; not a shuffle derivation");
            s.f[{static_cast<int>(n), static_cast<int>(k - n)}] = c;
        }
    return s;
}

NCPoly DeltaSpec::conjugator() const
{
    NCPolyBuilder b;
    for (const auto& [nm, c] : f)
        if (static_cast<std::size_t>(nm.first + nm.second) <= order) b.add(shuffle_c(nm.first, nm.second), c);
    return b.finish();
}

BiSeries DeltaSpec::generating_series() const
{
    CommPoly p;
    for (const auto& [nm, c] : f) p[{nm.first, nm.second}] = c;
    return BiSeries::from_poly(p, order);
}

NCPoly apply_delta(int n, int m, const NCPoly& a)
{
    require_positive_two_letter(a);
    return derive(a, commutator(shuffle_c(n, m), NCPoly(kX)), kNoCap);
}

NCPoly apply_delta(const DeltaSpec& spec, const NCPoly& a)
{
    require_positive_two_letter(a);
    return derive(a, commutator(spec.conjugator(), NCPoly(kX)), spec.order);
}

TruncSeries apply_delta(const DeltaSpec& spec, const TruncSeries& a)
{
    NCPoly p = a.to_poly();
    require_positive_two_letter(p);
    return TruncSeries(derive(p, commutator(spec.conjugator(), NCPoly(kX)), a.order()), a.order());
}

TPoly intertwiner_Dt(int n, int m)
{
    if (n < 0 || m < 1) throw std::invalid_argument("intertwiner_Dt needs n >= 0, m >= 1");
    std::vector<NCPoly> coeffs;
    for (int k = 0; k <= n; ++k) coeffs.push_back(shuffle_c(n - k, m + k));
    return TPoly(std::move(coeffs));
}

TPoly check_intertwine(int n, int m)
{
    TPoly lhs(std::vector<NCPoly>{commutator(shuffle_c(n, m), NCPoly(kX))});
    TPoly x_ty(std::vector<NCPoly>{NCPoly(kX), NCPoly(kY)});
    TPoly D = intertwiner_Dt(n, m);
    return lhs - (D * x_ty - x_ty * D);
}

NCPoly bracket_residual(std::pair<int, int> i1, std::pair<int, int> i2, const NCPoly& test, std::size_t N)
{
    auto d1 = [&](const NCPoly& a) { return apply_delta(i1.first, i1.second, a); };
    auto d2 = [&](const NCPoly& a) { return apply_delta(i2.first, i2.second, a); };
    return (d1(d2(test)) - d2(d1(test))).truncated(N);
}

TSeriesPoly integrate_R(const DeltaSpec& spec, std::size_t N)
{
    DeltaSpec s = spec;
    s.order = std::min(s.order, N);
    TruncSeries D(s.conjugator(), N);
    // R = sum tau^k R_k with (k+1) R_{k+1} = delta(R_k) + R_k D; every term raises degree
    std::vector<TruncSeries> coeffs{TruncSeries::one(N)};
    for (std::size_t k = 0; k < N; ++k) {
        const TruncSeries& Rk = coeffs.back();
        TruncSeries next = Rational(1, static_cast<long>(k + 1)) * (apply_delta(s, Rk) + Rk * D);
        if (next.is_zero()) break;
        coeffs.push_back(std::move(next));
    }
    return TSeriesPoly(std::move(coeffs));
}

TruncSeries evaluate_tau(const TSeriesPoly& r, const Rational& tau)
{
    if (r.is_zero()) return TruncSeries();
    TruncSeries acc(r[0].order());
    Rational pw = 1;
    for (const auto& c : r.coefficients()) {
        acc = acc + pw * c;
        pw *= tau;
    }
    return acc;
}

TruncSeries catalan_C(std::size_t N)
{
    if (N < 2) throw std::invalid_argument("catalan_C needs N >= 2");
    TruncSeries X(NCPoly(kX), N), Y(NCPoly(kY), N), one = TruncSeries::one(N);
    TruncSeries C(N);
    for (std::size_t it = 0; it <= N / 2; ++it) C = X * series_inverse(one - C) * Y;
    return C;
}

TruncSeries strip_leading_X(const TruncSeries& c)
{
    NCPolyBuilder b;
    NCPoly poly = c.to_poly();
    for (const auto& [w, coef] : poly.terms()) {
        if (w.empty() || w[0] != Letter{0, 1}) throw std::invalid_argument("strip_leading_X: word does not start with X");
        b.add(w.suffix_from(1), coef);
    }
    return TruncSeries(b.finish(), c.order());
}

TruncSeries catalan_R(std::size_t N)
{
    NCPoly yx = NCPoly(kY) * NCPoly(kX);
    return TruncSeries(NCPoly(Rational(1)) - yx, N) - catalan_C(N);
}

ConjugationReport verify_conjugation(std::size_t N)
{
    TruncSeries X(NCPoly(kX), N), Y(NCPoly(kY), N), one = TruncSeries::one(N);
    TruncSeries C = catalan_C(N);
    TruncSeries T = strip_leading_X(C);
    TruncSeries R = catalan_R(N);
    TruncSeries Rinv = series_inverse(R);
    TruncSeries zero(N);
    TruncSeries T2 = T * T;

    TSeriesPoly lhs(std::vector<TruncSeries>{R * X * Rinv, Y});
    TSeriesPoly Rt(std::vector<TruncSeries>{R, zero - R * T2});
    TSeriesPoly x_ty(std::vector<TruncSeries>{X, Y});

    ConjugationReport rep;
    rep.residual = lhs * Rt - Rt * x_ty;
    rep.catalan_residual = C - X * series_inverse(one - C) * Y;
    rep.quadratic_residual = X * T2 - T + Y;
    rep.literal_sign_residual = X * T2 + T - Y;
    return rep;
}

TruncSeries conjugation_automorphism(const TruncSeries& R, const TruncSeries& a)
{
    const std::size_t N = a.order();
    TruncSeries img_x = R * TruncSeries(NCPoly(kX), N) * series_inverse(R);
    TruncSeries img_y(NCPoly(kY), N);
    TruncSeries out(N);
    NCPoly poly = a.to_poly();
    for (const auto& [w, c] : poly.terms()) {
        TruncSeries term = TruncSeries::one(N);
        for (const Letter& l : w.letters()) term = term * (l.generator == 0 ? img_x : img_y);
        out = out + c * term;
    }
    return out;
}

}  // namespace ncid
