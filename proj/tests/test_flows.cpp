#include "support.hpp"

#include "ncid/flows.hpp"
#include "ncid/guessing.hpp"

using namespace ncid;
using namespace testing;

namespace {

NCPoly P(std::initializer_list<Letter> l, long c = 1) { return NCPoly(w(l), c); }

// Count Dyck-style irreducible words: X^a...Y with balanced prefixes that only return to zero at the end.
std::size_t irreducible_bracketings(std::size_t len)
{
    std::size_t count = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << len); ++mask) {
        int h = 0;
        bool ok = true;
        for (std::size_t i = 0; i < len && ok; ++i) {
            h += (mask >> (len - 1 - i)) & 1 ? 1 : -1;
            if (h < 0 || (h == 0 && i + 1 < len)) ok = false;
        }
        if (ok && h == 0) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("shuffle_c examples")
{
    CHECK(shuffle_c(1, 1) == P({X, Y}) + P({Y, X}));
    CHECK(shuffle_c(0, 3) == P({Y, Y, Y}));
    CHECK(shuffle_c(2, 1) == P({X, X, Y}) + P({X, Y, X}) + P({Y, X, X}));
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= 4; ++m)
            if (n + m) CHECK(shuffle_c(n, m).size() == binomial(static_cast<unsigned long>(n + m), static_cast<unsigned long>(n)));
}

TEST_CASE("apply_delta examples")
{
    CHECK(apply_delta(1, 1, NCPoly::generator(0)) == P({Y, X, X}) - P({X, X, Y}));
    CHECK(apply_delta(1, 1, NCPoly::generator(1)).is_zero());
    CHECK(apply_delta(1, 1, P({X, Y})) == (P({Y, X, X}) - P({X, X, Y})) * NCPoly::generator(1));
}

TEST_CASE("intertwiner examples")
{
    TPoly d = intertwiner_Dt(1, 1);
    REQUIRE(d.degree() == 1);
    CHECK(d[0] == P({X, Y}) + P({Y, X}));
    CHECK(d[1] == P({Y, Y}));
    CHECK(intertwiner_Dt(0, 1).degree() == 0);
    CHECK(intertwiner_Dt(0, 1)[0] == NCPoly::generator(1));
    TPoly e = intertwiner_Dt(2, 1);
    CHECK(e[2] == shuffle_c(0, 3));
    CHECK(e[1] == shuffle_c(1, 2));
}

TEST_CASE("check_intertwine vanishes through total degree 6")
{
    for (int n = 0; n <= 5; ++n)
        for (int m = 1; n + m <= 6; ++m) CHECK(check_intertwine(n, m).is_zero());
}

TEST_CASE("bracket_residual examples")
{
    CHECK(bracket_residual({1, 1}, {2, 1}, NCPoly::generator(0), 8).is_zero());
    CHECK(bracket_residual({3, 2}, {0, 1}, NCPoly::generator(1), 8).is_zero());
    CHECK(bracket_residual({1, 1}, {1, 2}, P({X, Y, X}), 9).is_zero());
}

TEST_CASE("integrate_R examples")
{
    TSeriesPoly r = integrate_R(DeltaSpec::basis(1, 1, 6), 6);
    TruncSeries R1 = evaluate_tau(r, 1);
    CHECK(r[1].part(2) == shuffle_c(1, 1));
    CHECK(r[0] == TruncSeries::one(6));

    DeltaSpec zero;
    zero.order = 6;
    TSeriesPoly r0 = integrate_R(zero, 6);
    CHECK(r0.degree() == 0);
    CHECK(evaluate_tau(r0, 1) == TruncSeries::one(6));

    BiSeries lg = series_log(BiSeries::from_poly({{{0, 0}, 1}, {{1, 1}, -1}}, 8));
    TruncSeries R = evaluate_tau(integrate_R(DeltaSpec::from_series(lg), 8), 1);
    CHECK(R == catalan_R(8));
}

TEST_CASE("catalan_C examples")
{
    TruncSeries C = catalan_C(6);
    CHECK(C.to_poly() == P({X, Y}) + P({X, X, Y, Y}) + P({X, X, Y, X, Y, Y}) + P({X, X, X, Y, Y, Y}));
    TruncSeries C12 = catalan_C(12);
    for (std::size_t d = 1; d <= 12; ++d) {
        CHECK(C12.part(d).size() == irreducible_bracketings(d));
        for (const auto& [word, c] : C12.part(d).terms()) CHECK(c == 1);
    }
    auto rep = verify_conjugation(8);
    CHECK(rep.catalan_residual.is_zero());
}

TEST_CASE("verify_conjugation")
{
    auto rep = verify_conjugation(8);
    CHECK(rep.residual.is_zero());
    CHECK(rep.quadratic_residual.is_zero());
    CHECK_FALSE(rep.literal_sign_residual.is_zero());
    TruncSeries T = strip_leading_X(catalan_C(8));
    CHECK(T.part(1) == NCPoly::generator(1));
    CHECK(T.part(3) == P({X, Y, Y}));
}

TEST_CASE("t = 0 slice collapses")
{
    TruncSeries R = catalan_R(8), X(NCPoly::generator(0), 8);
    CHECK((R * X * series_inverse(R) * R - R * X).is_zero());
}

TEST_CASE("abelianized R is the binomial transform")
{
    for (CommPoly Pc : {CommPoly{{{0, 0}, 1}, {{1, 1}, -1}}, CommPoly{{{0, 0}, 1}, {{0, 1}, -1}, {{1, 1}, -1}}}) {
        BiSeries lg = series_log(BiSeries::from_poly(Pc, 8));
        TruncSeries R = evaluate_tau(integrate_R(DeltaSpec::from_series(lg), 8), 1);
        CHECK(abelianize(R) == binomial_transform(Pc, 8));
    }
    BiSeries bad = series_log(BiSeries::from_poly({{{0, 0}, 1}, {{1, 0}, -1}}, 4));
    CHECK_THROWS(DeltaSpec::from_series(bad));
}

TEST_CASE("property: shuffle derivations commute")
{
    std::mt19937_64 rng(31);
    std::vector<std::pair<int, int>> idx;
    for (int n = 0; n <= 5; ++n)
        for (int m = 1; n + m <= 6; ++m) idx.push_back({n, m});
    std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
    for (int trial = 0; trial < 60; ++trial) {
        auto a = idx[pick(rng)], b = idx[pick(rng)];
        NCPoly test = random_poly(rng, 2, 3, 3, 2, true);
        CHECK(bracket_residual(a, b, test, 10).is_zero());
    }
}

TEST_CASE("property: conjugation by R(1) is multiplicative")
{
    std::mt19937_64 rng(32);
    BiSeries lg = series_log(BiSeries::from_poly({{{0, 0}, 1}, {{1, 1}, -1}, {{0, 2}, 2}}, 7));
    TruncSeries R = evaluate_tau(integrate_R(DeltaSpec::from_series(lg), 7), 1);
    for (int trial = 0; trial < 20; ++trial) {
        TruncSeries a(random_poly(rng, 2, 3, 3, 2, true), 7), b(random_poly(rng, 2, 3, 3, 2, true), 7);
        CHECK(conjugation_automorphism(R, a * b) == conjugation_automorphism(R, a) * conjugation_automorphism(R, b));
        CHECK(conjugation_automorphism(R, a + b) == conjugation_automorphism(R, a) + conjugation_automorphism(R, b));
    }
}
