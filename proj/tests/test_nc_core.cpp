#include "support.hpp"

#include "ncid/series.hpp"

using namespace ncid;
using namespace testing;

namespace {

// Reference reduction: repeatedly delete the first adjacent inverse pair.
std::vector<Letter> naive_reduce(std::vector<Letter> v)
{
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i + 1 < v.size(); ++i)
            if (v[i] == v[i + 1].inverse()) {
                v.erase(v.begin() + static_cast<long>(i), v.begin() + static_cast<long>(i) + 2);
                changed = true;
                break;
            }
    }
    return v;
}

NCPoly x() { return NCPoly::generator(0); }
NCPoly y() { return NCPoly::generator(1); }
NCPoly xi() { return NCPoly::generator(0, -1); }

}  // namespace

TEST_CASE("reduce_word examples")
{
    CHECK(w({X, Xi}).empty());
    CHECK(w({X, Y, Yi, X}) == w({X}) * w({X}));
    CHECK(w({X, Y, Yi, X}).length() == 2);
    CHECK(w({Xi, Xi, X}) == Word::generator(0, -1));
}

TEST_CASE("word_inverse examples")
{
    CHECK(w({X, Y}).inverse() == w({Yi, Xi}));
    CHECK(Word().inverse().empty());
    Word u = w({X, Yi, X});
    CHECK(u.inverse() == w({Xi, Y, Xi}));
    CHECK((u * u.inverse()).empty());
}

TEST_CASE("word text and order")
{
    CHECK(w({X, Yi, X}).to_string() == "X*Y^-1*X");
    CHECK(Word().to_string() == "1");
    CHECK(w({X}) < w({Xi}));
    CHECK(w({Xi}) < w({Y}));
    CHECK(w({Y}) < w({Yi}));
    CHECK(w({Yi}) < w({X, X}));
}

TEST_CASE("reduction agrees with pairwise cancellation")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> gen(0, 2), sign(0, 1), len(0, 12);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Letter> raw;
        int n = len(rng);
        for (int i = 0; i < n; ++i) raw.push_back({gen(rng), sign(rng) ? 1 : -1});
        Word r = Word::reduce(raw);
        auto expect = naive_reduce(raw);
        REQUIRE(r.letters() == expect);
        auto again = r.letters();
        CHECK(Word::reduce(again) == r);
    }
}

TEST_CASE("word product properties")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        Word u = random_word(rng, 3, 6), v = random_word(rng, 3, 6);
        Word uv = u * v;
        auto letters = uv.letters();
        CHECK(naive_reduce(letters) == letters);
        CHECK(uv.length() <= u.length() + v.length());
        CHECK(uv.inverse() == v.inverse() * u.inverse());
    }
}

TEST_CASE("poly_mul examples")
{
    NCPoly a = x() + xi();
    NCPoly sq = a * a;
    NCPoly expect = NCPoly(w({X, X})) + NCPoly(Rational(2)) + NCPoly(w({Xi, Xi}));
    CHECK(sq == expect);
    CHECK(a * NCPoly(Rational(1)) == a);
    CHECK(NCPoly(w({X, Y})) * NCPoly(w({Yi, X})) == NCPoly(w({X, X})));
    CHECK(sq.to_string() == "2 + X*X + X^-1*X^-1");
}

TEST_CASE("trace_const examples")
{
    CHECK(trace_const(x() + xi()) == 0);
    CHECK(trace_const((x() + xi()) * (x() + xi())) == 2);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        NCPoly a = random_poly(rng, 2, 4, 3), b = random_poly(rng, 2, 4, 3);
        CHECK(trace_const(commutator(a, b)) == 0);
    }
}

TEST_CASE("abelianize examples")
{
    CHECK(abelianize(x() * y() - y() * x(), 2).empty());
    CommPoly two_xy = abelianize(x() * y() + y() * x(), 2);
    REQUIRE(two_xy.size() == 1);
    CHECK(two_xy.at({1, 1}) == 2);

    NCPoly yx = y() * x();
    NCPoly s = NCPoly(Rational(1)) - yx - (x() * y() + x() * x() * y() * y());
    BiSeries ab = abelianize(TruncSeries(s, 4));
    BiSeries expect = BiSeries::from_poly({{{0, 0}, 1}, {{1, 1}, -2}, {{2, 2}, -1}}, 4);
    CHECK(ab == expect);
}

TEST_CASE("series_inverse examples")
{
    const std::size_t N = 8;
    TruncSeries one = TruncSeries::one(N);
    NCPoly xy = x() * y();
    TruncSeries s(NCPoly(Rational(1)) - xy, N);
    TruncSeries inv = series_inverse(s);
    NCPoly geometric(Rational(1));
    NCPoly pw(Rational(1));
    for (int k = 1; k <= 4; ++k) {
        pw = pw * xy;
        geometric += pw;
    }
    CHECK(inv == TruncSeries(geometric, N));
    CHECK(series_inverse(one) == one);
    CHECK_THROWS_AS(series_inverse(TruncSeries(xy, N)), PreconditionError);
}

TEST_CASE("scalar exp/log examples")
{
    const std::size_t N = 12;
    BiSeries p = BiSeries::from_poly({{{0, 0}, 1}, {{1, 1}, -1}}, N);
    BiSeries lg = series_log(p);
    for (std::size_t k = 1; 2 * k <= N; ++k) CHECK(lg.at(k, k) == Rational(-1, static_cast<long>(k)));
    CHECK(lg.at(1, 0) == 0);

    CHECK(series_exp(ScalarSeries(N)) == ScalarSeries::constant(1, N));
    ScalarSeries q = ScalarSeries(ints({1, -1, -1})).truncated(N);
    CHECK(scalar_series_exp_log(scalar_series_exp_log(q, ExpLog::log), ExpLog::exp) == q);
    CHECK_THROWS_AS(series_log(ScalarSeries(ints({2, 1}))), PreconditionError);
    CHECK_THROWS_AS(series_exp(ScalarSeries(ints({1, 1}))), PreconditionError);
}

TEST_CASE("series_power against repeated multiplication")
{
    ScalarSeries s = ScalarSeries(ints({1, 3, -2, 5})).truncated(10);
    CHECK(series_power(s, 3) == s * s * s);
    ScalarSeries r = series_power(s, Rational(1, 2));
    CHECK(r * r == s);
    CHECK(series_power(s, -1) == series_inverse(s));
}

TEST_CASE("bivariate exp and log are inverse")
{
    BiSeries p = BiSeries::from_poly({{{0, 0}, 1}, {{1, 0}, -1}, {{1, 2}, 3}, {{0, 1}, Rational(1, 2)}}, 9);
    CHECK(series_exp(series_log(p)) == p);
    CHECK(series_inverse(p) * p == BiSeries::from_poly({{{0, 0}, 1}}, 9));
}

TEST_CASE("restriction to a line is a ring homomorphism")
{
    BiSeries a = BiSeries::from_poly({{{0, 0}, 1}, {{2, 1}, -3}, {{0, 1}, 2}}, 8);
    BiSeries b = BiSeries::from_poly({{{1, 0}, 1}, {{1, 3}, 5}}, 8);
    Rational c(3, 2);
    CHECK((a * b).restrict_to_line(c) == a.restrict_to_line(c) * b.restrict_to_line(c));
    CHECK(series_log(a).restrict_to_line(c) == series_log(a.restrict_to_line(c)));
}

TEST_CASE("compress finds the step")
{
    ScalarSeries s = ScalarSeries(ints({1, 0, 0, 2, 0, 0, 7})).truncated(8);
    auto c = compress(s);
    CHECK(c.step == 3);
    CHECK(c.series == ScalarSeries(ints({1, 2, 7})));
}

// ---------------------------------------------------------------------------

TEST_CASE("property: poly_mul associative and unital")
{
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 150; ++trial) {
        NCPoly a = random_poly(rng, 2, 5, 4), b = random_poly(rng, 2, 5, 4), c = random_poly(rng, 2, 5, 4);
        REQUIRE((a * b) * c == a * (b * c));
        CHECK(a * NCPoly(Rational(1)) == a);
        CHECK(NCPoly(Rational(1)) * a == a);
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("property: trace cyclicity")
{
    std::mt19937_64 rng(102);
    for (int trial = 0; trial < 150; ++trial) {
        NCPoly a = random_poly(rng, 3, 5, 4), b = random_poly(rng, 3, 5, 4);
        CHECK(trace_const(a * b) == trace_const(b * a));
        CHECK(trace_of_product(a, b) == trace_const(a * b));
    }
}

TEST_CASE("property: trace conjugation invariance")
{
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        NCPoly a = random_poly(rng, 2, 4, 3);
        Word g = random_word(rng, 2, 5);
        NCPoly conj = NCPoly(g) * a * NCPoly(g.inverse());
        for (unsigned k = 1; k <= 3; ++k) CHECK(trace_const(power(conj, k)) == trace_const(power(a, k)));
    }
}

TEST_CASE("property: abelianize is a ring homomorphism")
{
    std::mt19937_64 rng(104);
    auto mul = [](const CommPoly& p, const CommPoly& q) {
        CommPoly r;
        for (const auto& [e1, c1] : p)
            for (const auto& [e2, c2] : q) {
                std::vector<int> e = {e1[0] + e2[0], e1[1] + e2[1]};
                r[e] += c1 * c2;
            }
        std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
        return r;
    };
    for (int trial = 0; trial < 150; ++trial) {
        NCPoly a = random_poly(rng, 2, 5, 4), b = random_poly(rng, 2, 5, 4);
        CHECK(abelianize(a * b, 2) == mul(abelianize(a, 2), abelianize(b, 2)));
    }
}

TEST_CASE("property: series inverse both sides")
{
    std::mt19937_64 rng(105);
    for (int trial = 0; trial < 40; ++trial) {
        NCPoly p = random_poly(rng, 2, 4, 3, 3, true);
        p = p - NCPoly(Rational(trace_const(p))) + NCPoly(Rational(1 + trial % 3));
        TruncSeries s(p, 7);
        TruncSeries inv = series_inverse(s);
        TruncSeries one = TruncSeries::one(7);
        CHECK(s * inv == one);
        CHECK(inv * s == one);
    }
}
