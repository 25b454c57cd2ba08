#include "support.hpp"

#include "ncid/guessing.hpp"
#include "ncid/spectral.hpp"

using namespace ncid;
using namespace testing;

namespace {

// (1 + sqrt(1 - 4z)) / 2 via Catalan numbers: 1 - sum_{k>=1} Cat(k-1) z^k.
ScalarSeries catalan_root(std::size_t N)
{
    ScalarSeries s(N);
    s[0] = 1;
    for (std::size_t k = 1; k <= N; ++k) s[k] = -Rational(binomial(2 * (k - 1), k - 1)) / static_cast<unsigned long>(k);
    return s;
}

}  // namespace

TEST_CASE("guess_annihilator examples")
{
    auto Q = guess_annihilator(catalan_root(40), 1, 2);
    REQUIRE(Q);
    CHECK(Q->to_string() == "S^2 - S + z");
    CHECK(Q->verified);
    CHECK(Q->margin == 15);

    auto one = search_annihilator(ScalarSeries::constant(1, 20), 3, 3);
    REQUIRE(one.found);
    CHECK(one.found->to_string() == "S - 1");

    ScalarSeries e(60);
    Rational f = 1;
    for (std::size_t k = 0; k <= 60; ++k) {
        if (k) f /= static_cast<unsigned long>(k);
        e[k] = f;
    }
    CHECK_FALSE(search_annihilator(e, 4, 4).found);
    CHECK_THROWS_AS(guess_annihilator(catalan_root(10), 3, 3), InsufficientData);
}

TEST_CASE("verify_annihilator examples")
{
    auto Q = make_annihilator(1, 2, {{0, 2, 1}, {0, 1, -1}, {1, 1, 0}, {1, 0, 1}});
    CHECK(verify_annihilator(Q, catalan_root(30), 30).zero);

    auto S1 = make_annihilator(0, 1, {{0, 1, 1}, {0, 0, -1}});
    auto rep = verify_annihilator(S1, ScalarSeries(ints({1, 1, 0, 0, 0, 0})), 5);
    CHECK_FALSE(rep.zero);
    CHECK(rep.first_nonzero == 1u);

    auto W = make_annihilator(2, 2, {{0, 2, 1}, {1, 1, 2}, {0, 1, -1}, {2, 0, 1}});
    ScalarSeries c = catalan_root(20);
    CHECK(verify_annihilator(W, c * c, 20).zero);
}

TEST_CASE("normalization and primitive form")
{
    auto Q = make_annihilator(1, 2, {{0, 2, 4}, {0, 1, -4}, {1, 0, 4}});
    CHECK(Q.coeff(0, 2) == 1);
    CHECK(Q.primitive[2][0] == 1);
    auto R = make_annihilator(1, 1, {{1, 1, 6}, {0, 0, 4}});
    CHECK(R.coeff(1, 1) == 1);
    CHECK(R.coeff(0, 0) == Rational(2, 3));
    CHECK(R.primitive[1][1] == 3);
    CHECK(R.primitive[0][0] == 2);
}

TEST_CASE("binomial_transform examples")
{
    CommPoly one_minus_x{{{0, 0}, 1}, {{1, 0}, -1}};
    CHECK(binomial_transform(one_minus_x, 8) == BiSeries::from_poly(one_minus_x, 8));

    CommPoly P{{{0, 0}, 1}, {{1, 1}, -1}};
    BiSeries b = binomial_transform(P, 8);
    CHECK(b.at(1, 1) == -2);
    CHECK(b.at(2, 2) == -1);
    CHECK(b.at(3, 3) == -2);
    CHECK(b.at(1, 0) == 0);

    ScalarSeries diag = compress(binomial_transform_line(P, 1, 100)).series;
    CHECK(diag.truncated(3) == ScalarSeries(ints({1, -2, -1, -2})));
    auto found = search_annihilator(diag, 4, 4);
    REQUIRE(found.found);
    CHECK(found.found->to_string() == "S^2 + (2*z - 1)*S + z^2");
    CHECK_THROWS_AS(binomial_transform({{{0, 0}, 2}}, 4), PreconditionError);
}

TEST_CASE("line restriction matches the bivariate transform")
{
    CommPoly P{{{0, 0}, 1}, {{1, 0}, -1}, {{0, 1}, 2}, {{2, 1}, 3}};
    for (Rational c : {Rational(1), Rational(-2), Rational(3, 5)})
        CHECK(binomial_transform_line(P, c, 10) == binomial_transform(P, 10).restrict_to_line(c));
}

TEST_CASE("search is deterministic")
{
    ScalarSeries z = compress(char_series(plus_inverses(2), 120)).series;
    auto a = search_annihilator(z, 6, 4);
    auto b = search_annihilator(z, 6, 4);
    REQUIRE(a.found);
    CHECK(a.found->q == b.found->q);
    CHECK(a.found->deg_s == 2);
}
