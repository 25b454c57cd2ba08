#include "support.hpp"

#include "ncid/dynamics.hpp"

using namespace ncid;
using namespace testing;

namespace {

QMatrix qmat(std::size_t n, std::initializer_list<long> v)
{
    QMatrix m(RationalField{}, n, n);
    std::size_t k = 0;
    for (long x : v) m(k / n, k % n) = x, ++k;
    return m;
}

template <class F>
Matrix<F> random_invertible(const F& f, std::size_t d, u64 seed)
{
    return sample_point(f, 1, d, seed, {true}).values[0];
}

template <class F>
Matrix<F> random_blocks(const F& f, std::size_t d, u64 seed)
{
    auto pt = sample_point(f, 9, d, seed, std::vector<bool>(9, true));
    Matrix<F> m(f, 3 * d, 3 * d);
    for (std::size_t k = 0; k < 9; ++k) m.set_block(k / 3 * d, k % 3 * d, pt.values[k]);
    return m;
}

template <class F>
Matrix<F> conjugate_blocks(const Matrix<F>& m, const Matrix<F>& g, std::size_t d)
{
    Matrix<F> gi = inverse(g), out = m;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) out.set_block(i * d, j * d, g * m.block(i * d, j * d, d, d) * gi);
    return out;
}

std::vector<bool> all_group(const ExprPool& pool) { return std::vector<bool>(pool.names().size(), true); }

}  // namespace

TEST_CASE("MapSpec parsing")
{
    CHECK(MapSpec::parse("S1").param == 1);
    CHECK(MapSpec::parse("S-1").param == -1);
    CHECK(MapSpec::parse("U5").kind == MapSpec::Kind::U);
    CHECK(MapSpec::parse("U5").arity() == 5);
    CHECK(MapSpec::S(3).name() == "S3");
    for (const char* bad : {"S0", "S-2", "U4", "U1", "Q1", "S", "S1x"}) CHECK_THROWS_AS(MapSpec::parse(bad), std::invalid_argument);
}

TEST_CASE("S1 iterates")
{
    ExprPool pool(Alphabet::xy());
    auto st = iterate_map(pool, MapSpec::S(1), 2);
    REQUIRE(st.size() == 3);
    CHECK(to_ncpoly(pool, st[1][0]) == NCPoly(w({X, Y, Xi})));
    CHECK(to_ncpoly(pool, st[1][1]) == NCPoly(w({Xi})) + NCPoly(w({Y, Xi})));
    // X2 = X Y X^-1 (X^-1 + Y X^-1) X Y^-1 X^-1
    auto x2 = laurent_expand(pool, st[2][0], 2);
    REQUIRE(x2);
    CHECK(*x2 == NCPoly(w({X, Y, Xi, Yi, Xi})) + NCPoly(w({X, Y, Xi, Xi})));
    for (std::size_t s = 1; s < st.size(); ++s) {
        auto res = recursion_residuals(pool, MapSpec::S(1), st[s - 1], st[s]);
        Schedule po;
        po.dims = {1, 2};
        po.fields = {FieldSpec::rationals(), FieldSpec::prime(1000003)};
        for (ExprId r : res) CHECK(prove_zero(pool, r, po, all_group(pool)).kind == ZeroVerdict::Kind::zero_evidence);
    }
}

TEST_CASE("U recursion residuals vanish and detect a wrong step")
{
    ExprPool pool(Alphabet::indexed(3, "U"));
    auto st = iterate_map(pool, MapSpec::U(3), 3);
    REQUIRE(st.size() == 4);
    Schedule po;
    po.dims = {2};
    po.fields = {FieldSpec::prime(1000003)};
    for (std::size_t s = 1; s < st.size(); ++s)
        for (ExprId r : recursion_residuals(pool, MapSpec::U(3), st[s - 1], st[s]))
            CHECK(prove_zero(pool, r, po, all_group(pool)).kind == ZeroVerdict::Kind::zero_evidence);
    State wrong = st[2];
    std::swap(wrong[1], wrong[2]);
    bool caught = false;
    for (ExprId r : recursion_residuals(pool, MapSpec::U(3), st[1], wrong))
        caught = caught || prove_zero(pool, r, po, all_group(pool)).kind == ZeroVerdict::Kind::nonzero;
    CHECK(caught);
}

TEST_CASE("Lax pair residual")
{
    auto rep = lax_residual(1, FieldSpec::rationals(), {Rational(2)}, 5, 3);
    CHECK(rep.zero());
    CHECK(rep.evaluations > 0);
    auto p = lax_residual(2, FieldSpec::prime(1000003), {Rational(2), Rational(5, 7)}, 4, 9);
    CHECK(p.zero());
    ExprPool pool(Alphabet::xy());
    CHECK_THROWS_AS(lax_blocks(pool, Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(lax_residual(1, FieldSpec::rationals(), {Rational(0)}, 1, 1), std::invalid_argument);
}

TEST_CASE("Lax residual is sensitive to the map")
{
    // replacing S(L) by L must leave a nonzero residual L V - V L
    ExprPool pool(Alphabet::xy());
    auto b = lax_blocks(pool, Rational(3));
    BlockExpr lv = block_mul(pool, b.L, b.V), vl = block_mul(pool, b.V, b.L);
    Schedule po;
    po.dims = {2};
    po.fields = {FieldSpec::prime(1000003)};
    bool nonzero = false;
    for (std::size_t k = 0; k < lv.cells.size(); ++k)
        nonzero = nonzero || prove_zero(pool, pool.sub(lv.cells[k], vl.cells[k]), po, all_group(pool)).kind == ZeroVerdict::Kind::nonzero;
    CHECK(nonzero);
}

TEST_CASE("bichar_poly")
{
    CommPoly one = bichar_poly(qmat(1, {3}), qmat(1, {-2}));
    CHECK(one == CommPoly{{{0, 0}, Rational(1)}, {{1, 0}, Rational(-3)}, {{0, 1}, Rational(2)}});

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> c(-6, 6);
    for (int trial = 0; trial < 30; ++trial) {
        long a11 = c(rng), a12 = c(rng), a21 = c(rng), a22 = c(rng);
        long b11 = c(rng), b12 = c(rng), b21 = c(rng), b22 = c(rng);
        QMatrix A = qmat(2, {a11, a12, a21, a22}), B = qmat(2, {b11, b12, b21, b22});
        // cofactor expansion of det(1 - xA - yB)
        CommPoly want;
        auto put = [&](int i, int j, long v) {
            if (v) want[{i, j}] = v;
        };
        put(0, 0, 1);
        put(1, 0, -(a11 + a22));
        put(0, 1, -(b11 + b22));
        put(2, 0, a11 * a22 - a12 * a21);
        put(0, 2, b11 * b22 - b12 * b21);
        put(1, 1, a11 * b22 + a22 * b11 - a12 * b21 - a21 * b12);
        CHECK(bichar_poly(A, B) == want);

        QMatrix g = random_invertible(RationalField{}, 2, static_cast<u64>(trial));
        QMatrix gi = inverse(g);
        CHECK(bichar_poly(g * A * gi, g * B * gi) == want);
    }
    CHECK_THROWS_AS(bichar_poly(qmat(1, {1}), qmat(2, {1, 0, 0, 1})), std::invalid_argument);
}

TEST_CASE("normalization")
{
    QMatrix ones = qmat(3, {2, 5, 1, -1, 4, 1, 1, 1, 1});
    CHECK(conjecture1_normalize(ones, 1) == ones);
    QMatrix m = qmat(3, {2, 5, 3, -1, 4, 7, 2, 6, 5});
    QMatrix n = conjecture1_normalize(m, 1);
    // L_1 = 5/3, L_2 = 5/7, R = (1/2, 1/6, 1/5)
    CHECK(n(0, 0) == Rational(5, 3));
    CHECK(n(0, 1) == Rational(25, 18));
    CHECK(n(1, 1) == Rational(10, 21));
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(n(2, k) == 1);
        CHECK(n(k, 2) == 1);
    }
    QMatrix sing = qmat(3, {2, 5, 0, -1, 4, 7, 2, 6, 5});
    CHECK_THROWS_AS(conjecture1_normalize(sing, 1), SingularMatrix);
    CHECK_THROWS_AS(conjecture1_normalize(qmat(2, {1, 1, 1, 1}), 1), std::invalid_argument);

    PrimeField f{1000003};
    for (u64 seed = 0; seed < 10; ++seed) {
        auto b = random_blocks(f, 2, seed);
        auto nb = conjecture1_normalize(b, 2);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(nb.block(4, 2 * k, 2, 2).is_identity());
            CHECK(nb.block(2 * k, 4, 2, 2).is_identity());
        }
    }
}

TEST_CASE("property: normalization commutes with simultaneous conjugation")
{
    PrimeField f{1000003};
    for (u64 seed = 0; seed < 40; ++seed) {
        const std::size_t d = 1 + seed % 3;
        auto m = random_blocks(f, d, seed);
        auto g = random_invertible(f, d, seed + 1000);
        auto lhs = conjecture1_normalize(conjugate_blocks(m, g, d), d);
        auto rhs = conjugate_blocks(conjecture1_normalize(m, d), g, d);
        CHECK(lhs == rhs);
        CHECK(simultaneously_conjugate(lhs, conjecture1_normalize(m, d), d, seed));
    }
}

TEST_CASE("simultaneous conjugacy detects different classes")
{
    PrimeField f{1000003};
    for (u64 seed = 0; seed < 10; ++seed) {
        auto m = random_blocks(f, 2, seed);
        auto g = random_invertible(f, 2, seed + 77);
        CHECK(simultaneously_conjugate(conjugate_blocks(m, g, 2), m, 2, seed));
        auto other = m;
        other(0, 0) = f.add(other(0, 0), 1);  // changes the trace of one block
        CHECK_FALSE(simultaneously_conjugate(other, m, 2, seed));
    }
}

TEST_CASE("involutions")
{
    QMatrix m = qmat(3, {2, 5, 3, -1, 4, 7, 2, 6, 5});
    CHECK(involution_I2(m, 1) == m.transposed());
    QMatrix i3 = involution_I3(m, 1);
    CHECK(i3(0, 1) == Rational(1, 5));
    CHECK(i3(1, 0) == -1);
    CHECK(apply_F(m, 1) == inverse(involution_I2(involution_I3(m, 1), 1)));

    PrimeField f{1000003};
    for (u64 seed = 0; seed < 20; ++seed) {
        const std::size_t d = 1 + seed % 3;
        auto b = random_blocks(f, d, seed);
        CHECK(involution_I1(involution_I1(b)) == b);
        CHECK(involution_I2(involution_I2(b, d), d) == b);
        CHECK(involution_I3(involution_I3(b, d), d) == b);
        // I2 permutes blocks and keeps them intact
        CHECK(involution_I2(b, d).block(0, d, d, d) == b.block(d, 0, d, d));
    }
}

TEST_CASE("period-three check on small samples")
{
    auto q = conjecture1_period_check(1, FieldSpec::rationals(), 8, 4);
    CHECK(q.trials.size() == 8);
    CHECK(q.nondegenerate() > 0);
    CHECK(q.residual_zero() == q.nondegenerate());
    CHECK(q.naive_zero() == q.nondegenerate());
    CHECK(q.involutions_ok());
    CHECK(q.nontrivial_rate() == 1.0);

    auto p = conjecture1_period_check(2, FieldSpec::prime(2147483629), 4, 11);
    CHECK(p.nondegenerate() == 4);
    CHECK(p.residual_zero() == 4);
    CHECK(p.involutions_ok());
    CHECK(p.nontrivial_rate() == 1.0);

    auto again = conjecture1_period_check(2, FieldSpec::prime(2147483629), 4, 11);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(again.trials[i].seed == p.trials[i].seed);
        CHECK(again.trials[i].naive_nonzero_entries == p.trials[i].naive_nonzero_entries);
    }
    CHECK_THROWS_AS(conjecture1_period_check(0, FieldSpec::rationals(), 1, 1), std::invalid_argument);
}

TEST_CASE("growth_probe")
{
    auto zero = growth_probe(MapSpec::S(1), 0);
    REQUIRE(zero.iterates.size() == 1);
    CHECK(zero.iterates[0].support == std::vector<std::size_t>{1, 1});

    auto s1 = growth_probe(MapSpec::S(1), 4);
    auto s3 = growth_probe(MapSpec::S(3), 3);
    REQUIRE(s1.iterates.size() == 5);
    for (const auto& it : s1.iterates) {
        CHECK(it.recursion_ok);
        for (bool r : it.recovered) CHECK(r);
    }
    for (const auto& it : s3.iterates) CHECK(it.recursion_ok);
    // abelianized, S1 is the period-5 Lyness map: y, (1+y)/x, (1+x+y)/xy, (1+x)/y, x
    const std::size_t lyness[] = {1, 2, 3, 2, 1};
    for (std::size_t s = 0; s < s1.iterates.size(); ++s) CHECK(s1.iterates[s].support[1] == lyness[s]);
    CHECK(s3.iterates[3].support[1] > 10 * s1.iterates[3].support[1]);
}
