#include "support.hpp"

#include "ncid/dynamics.hpp"
#include "ncid/laurent.hpp"

#include <set>

using namespace ncid;
using namespace testing;

namespace {

RecoverOptions quick(u64 seed)
{
    RecoverOptions o;
    o.seed = seed;
    return o;
}

}  // namespace

TEST_CASE("enumerate_words counts")
{
    CHECK(enumerate_words(2, 1).size() == 5);
    CHECK(enumerate_words(2, 2).size() == 17);
    auto one = enumerate_words(1, 3);
    CHECK(one.size() == 7);
    CHECK(one[1] == w({X}));
    CHECK(one[2] == w({Xi}));
    for (int n = 1; n <= 3; ++n)
        for (int L = 0; L <= 4; ++L) {
            auto words = enumerate_words(n, L);
            CHECK(words.size() == word_count(n, L));
            CHECK(std::is_sorted(words.begin(), words.end()));
            CHECK(std::adjacent_find(words.begin(), words.end()) == words.end());
            for (const Word& v : words) CHECK(Word::reduce(v.letters()) == v);
            auto mon = enumerate_words(n, L, WordMode::monoid);
            CHECK(mon.size() == word_count(n, L, WordMode::monoid));
            for (const Word& v : mon) CHECK(v.is_positive());
        }
    CHECK(word_count(2, 10) == 118097);
    CHECK_THROWS_AS(enumerate_words(2, -1), std::invalid_argument);
}

TEST_CASE("property: Magnus order is a bi-invariant total order")
{
    std::mt19937_64 rng(8);
    MagnusOrder ord(2);
    for (int trial = 0; trial < 300; ++trial) {
        Word a = random_word(rng, 2, 8), b = random_word(rng, 2, 8), c = random_word(rng, 2, 6);
        auto ab = ord.compare(a, b);
        CHECK((ab == 0) == (a == b));
        CHECK(ord.compare(b, a) == (0 <=> ab));
        CHECK(ord.compare(c * a, c * b) == ab);
        CHECK(ord.compare(a * c, b * c) == ab);
        if (ab < 0 && ord.less(b, c)) CHECK(ord.less(a, c));
    }
    MagnusOrder three(3);
    CHECK(three.less(Word(), Word::generator(2)));
    CHECK(three.less(Word::generator(2, -1), Word()));
}

TEST_CASE("property: exact group-ring division")
{
    std::mt19937_64 rng(31);
    MagnusOrder ord(2);
    for (int trial = 0; trial < 120; ++trial) {
        NCPoly p = random_poly(rng, 2, 1 + trial % 5, 4), q = random_poly(rng, 2, 1 + trial % 4, 3);
        if (p.is_zero() || q.is_zero()) continue;
        CHECK(divide_right(p * q, q, ord) == p);
        CHECK(divide_left(q * p, q, ord) == p);
    }
    DivisionBudget small;
    small.max_quotient_terms = 50;
    CHECK_FALSE(divide_right(NCPoly(1), NCPoly(1) + NCPoly::generator(0), ord, small));
    CHECK_THROWS_AS(divide_right(NCPoly(1), NCPoly(), ord), std::domain_error);
}

TEST_CASE("laurent_expand")
{
    ExprPool pool(Alphabet::xy());
    ExprId e = parse_scalar_expr(pool, "(X*Y + Y^-1*X)*(X*Y - 2)");
    CHECK(laurent_expand(pool, e, 2) == to_ncpoly(pool, e));
    ExprId q = parse_scalar_expr(pool, "(X*Y*X + X)*(Y*X + 1)^-1");
    CHECK(laurent_expand(pool, q, 2) == NCPoly::generator(0));
    ExprId l = parse_scalar_expr(pool, "(1 + X)^-1*(X + X*X)");
    CHECK(laurent_expand(pool, l, 2) == NCPoly::generator(0));
    DivisionBudget small;
    small.max_quotient_terms = 40;
    CHECK_FALSE(laurent_expand(pool, parse_scalar_expr(pool, "(1 + X)^-1"), 2, small));
    CHECK_FALSE(laurent_expand(pool, parse_scalar_expr(pool, "Y*(1 + X)^-1"), 2, small));
    CHECK(syntactic_degree(pool, parse_scalar_expr(pool, "X*Y^-1 + 3*X")) == 2);
}

TEST_CASE("recover_laurent examples")
{
    ExprPool pool(Alphabet::xy());
    ExprId x = pool.var("X");
    auto c = recover_laurent(pool, x, Alphabet::xy(), 1);
    REQUIRE(c.ok());
    CHECK(c.poly == NCPoly::generator(0));
    CHECK(c.solved);
    CHECK(c.samples.size() >= 3);

    auto states = iterate_map(pool, MapSpec::S(1), 2);
    auto y2 = recover_laurent(pool, states[2][1], Alphabet::xy(), 3);
    REQUIRE(y2.ok());
    NCPolyBuilder b;
    b.add(w({X, Yi, Xi}), 1);
    b.add(w({Yi, Xi}), 1);
    b.add(w({Xi}), 1);
    CHECK(y2.poly == b.finish());
    CHECK(y2.min_full_rank_d >= 2);
    CHECK(y2.solve_d >= 3);

    RecoverOptions mono;
    mono.mode = WordMode::monoid;
    for (int L = 0; L <= 4; ++L) {
        auto r = recover_laurent(pool, pool.inv(x), Alphabet::xy(), L, mono);
        CHECK(r.status == LaurentCandidate::Status::infeasible);
    }

    LaurentCandidate two;
    two.poly = NCPoly(w({X}), 2);
    auto chk = coefficient_set_check(two, {0, 1});
    CHECK_FALSE(chk.ok);
    REQUIRE(chk.offenders.size() == 1);
    CHECK(chk.offenders[0].first == w({X}));
    CHECK(integer_coefficient_check(two).ok);
    two.poly = NCPoly(w({X}), Rational(1, 2));
    CHECK_FALSE(integer_coefficient_check(two).ok);
}

TEST_CASE("recover a higher degree target only after escalation")
{
    ExprPool pool(Alphabet::xy());
    ExprId e = parse_scalar_expr(pool, "(X*Y*X*Y + X)*(Y*X*Y + 1)^-1");
    CHECK(syntactic_degree(pool, e) == 7);
    auto low = recover_laurent(pool, e, Alphabet::xy(), 0);
    CHECK(low.status == LaurentCandidate::Status::infeasible);
    auto c = recover_escalating(pool, e, Alphabet::xy());
    REQUIRE(c.ok());
    CHECK(c.L == 2);
    CHECK(c.poly == NCPoly::generator(0));
    ExprId big = parse_scalar_expr(pool, "(1 + X)^-1");
    auto none = recover_escalating(pool, big, Alphabet::xy());
    CHECK(none.status == LaurentCandidate::Status::infeasible);
}

TEST_CASE("U recursion recovery")
{
    ExprPool pool(Alphabet::indexed(3, "U"));
    auto u = u_sequence(pool, 3, 5);
    const Letter U1{0, 1}, U1i{0, -1}, U2{1, 1}, U2i{1, -1}, U3{2, 1};
    auto r4 = recover_iterate(pool, u[3], pool.names());
    REQUIRE(r4.ok());
    CHECK(r4.poly == NCPoly(w({U1i})) + NCPoly(w({U1i, U3, U2})));
    auto r5 = recover_iterate(pool, u[4], pool.names());
    REQUIRE(r5.ok());
    CHECK(r5.poly == NCPoly(w({U2i})) + NCPoly(w({U3, U1i, U2i})) + NCPoly(w({U3, U1i, U3})));
    CHECK(integer_coefficient_check(r5).ok);
}

TEST_CASE("property: recovery is independent of the sample schedule")
{
    std::mt19937_64 rng(2718);
    int cases = 0;
    for (int trial = 0; trial < 40; ++trial) {
        NCPoly p = random_poly(rng, 2, 1 + trial % 4, 2, 2);
        ExprPool pool(Alphabet::xy());
        ExprId e = from_ncpoly(pool, p);
        auto a = recover_laurent(pool, e, Alphabet::xy(), 2, quick(1000 + static_cast<u64>(trial)));
        auto b = recover_laurent(pool, e, Alphabet::xy(), 2, quick(900000 + static_cast<u64>(trial)));
        REQUIRE(a.ok());
        REQUIRE(b.ok());
        CHECK(a.poly == p);
        CHECK(a.poly == b.poly);
        CHECK(a.samples[0].seed != b.samples[0].seed);
        ++cases;
    }
    CHECK(cases == 40);
}
