#include "support.hpp"

#include "ncid/spectral.hpp"

using namespace ncid;
using namespace testing;

namespace {

// Tr(a^k) by summing over all k-tuples of support terms.
std::vector<Rational> brute_traces(const NCPoly& a, std::size_t K)
{
    std::vector<Rational> out;
    const auto& t = a.terms();
    for (std::size_t k = 1; k <= K; ++k) {
        Rational total = 0;
        std::vector<std::size_t> idx(k, 0);
        while (true) {
            Word p;
            Rational c = 1;
            for (auto i : idx) {
                p *= t[i].first;
                c *= t[i].second;
            }
            if (p.empty()) total += c;
            std::size_t pos = 0;
            while (pos < k && ++idx[pos] == t.size()) idx[pos++] = 0;
            if (pos == k) break;
        }
        out.push_back(total);
    }
    return out;
}

}  // namespace

TEST_CASE("power_traces examples")
{
    CHECK(power_traces(NCPoly::generator(0), 5) == ints({0, 0, 0, 0, 0}));
    CHECK(power_traces(plus_inverses(1), 4) == ints({0, 2, 0, 6}));
    CHECK(power_traces(sum_plus_product_inverse(2), 3) == ints({0, 0, 3}));
    CHECK_THROWS(power_traces(plus_inverses(1), 0));
}

TEST_CASE("f_series examples")
{
    ScalarSeries f = f_series(plus_inverses(1), 8);
    for (std::size_t m = 1; m <= 4; ++m) CHECK(f[2 * m] == Rational(binomial(2 * m, m)));
    CHECK(f[1] == 0);
    CHECK(f_series(NCPoly(), 6).is_zero());
    ScalarSeries f2 = f_series(plus_inverses(2), 4);
    CHECK(f2[2] == 4);
    CHECK(f2[4] == 28);
}

TEST_CASE("walk and power traces agree with brute force")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        NCPoly a = random_poly(rng, 2, 3, 2);
        auto brute = brute_traces(a, 6);
        CHECK(power_traces(a, 6) == brute);
        CHECK(walk_traces(a, 6) == brute);
    }
    CHECK(walk_traces(sum_plus_product_inverse(2), 9) == ints({0, 0, 3, 0, 0, 21, 0, 0, 183}));
    CHECK(walk_traces(NCPoly(Rational(5)), 3) == ints({5, 25, 125}));
}

TEST_CASE("char_series examples")
{
    CHECK(char_series(plus_inverses(1), 9) == ScalarSeries(ints({1, 0, -1, 0, -1, 0, -2, 0, -5, 0})));
    CHECK(char_series(NCPoly(Rational(3)), 5) == ScalarSeries(ints({1, -3, 0, 0, 0, 0})));
    CHECK(char_series(plus_inverses(2), 5) == ScalarSeries(ints({1, 0, -2, 0, -5, 0})));
}

TEST_CASE("closed form examples")
{
    CHECK(closed_form_plus_inverses(1, 8) == ScalarSeries(ints({1, 0, -1, 0, -1, 0, -2, 0, -5})));
    CHECK(closed_form_plus_inverses(2, 4) == ScalarSeries(ints({1, 0, -2, 0, -5})));
    CHECK(closed_form_plus_inverses(1, 0)[0] == 1);
    for (int n = 1; n <= 3; ++n) CHECK(char_series(plus_inverses(n), 16) == closed_form_plus_inverses(n, 16));
}

TEST_CASE("necklace_product examples")
{
    NecklaceStats st;
    CHECK(necklace_product(NCPoly(Rational(4)), 6, 1'000'000, &st) == ScalarSeries(ints({1, -4, 0, 0, 0, 0, 0})));
    CHECK(st.factors == 1);
    CHECK(necklace_product(plus_inverses(1), 10) == char_series(plus_inverses(1), 10));
    CHECK_THROWS_AS(necklace_product(NCPoly(Rational(1, 2)), 4), PreconditionError);
    CHECK_THROWS_AS(necklace_product(plus_inverses(2), 10, 100), BudgetExceeded);
}

TEST_CASE("property: differential identity t P' + F P = 0")
{
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        NCPoly a = random_poly(rng, 2, 4, 2);
        const std::size_t N = 10;
        ScalarSeries P = char_series(a, N), F = f_series(a, N);
        CHECK((P.euler() + F * P).is_zero());
    }
}

TEST_CASE("property: necklace product equals exp formula with integer coefficients")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        NCPoly a = random_poly(rng, 2, 4, 2);
        ScalarSeries neck = necklace_product(a, 10);
        CHECK(neck == char_series(a, 10));
        CHECK(neck.has_integer_coefficients());
    }
}

TEST_CASE("property: char_series conjugation invariant")
{
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        NCPoly a = random_poly(rng, 2, 3, 2);
        Word g = random_word(rng, 2, 3);
        NCPoly conj = NCPoly(g) * a * NCPoly(g.inverse());
        CHECK(char_series(conj, 8) == char_series(a, 8));
        CHECK(char_series(conj, 8, TraceMethod::powers) == char_series(a, 8));
    }
}
