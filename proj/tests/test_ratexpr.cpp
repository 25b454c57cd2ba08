#include "support.hpp"

#include "ncid/ratexpr.hpp"

using namespace ncid;
using namespace testing;

namespace {

const u64 kP = 2147483629ULL;

// Random expression over `nvars` variables; inverses only wrap variables or sums with a constant.
ExprId random_expr(ExprPool& pool, std::mt19937_64& rng, int nvars, int depth)
{
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
    switch (pick(rng)) {
    case 0:
        return pool.var(std::uniform_int_distribution<int>(0, nvars - 1)(rng));
    case 1: {
        int num = std::uniform_int_distribution<int>(-5, 5)(rng);
        int den = std::uniform_int_distribution<int>(1, 3)(rng);
        Rational q{Integer(num), Integer(den)};
        q.canonicalize();
        return pool.constant(q);
    }
    case 2:
    case 3:
        return pool.add(random_expr(pool, rng, nvars, depth - 1), random_expr(pool, rng, nvars, depth - 1));
    case 4:
    case 5:
        return pool.mul(random_expr(pool, rng, nvars, depth - 1), random_expr(pool, rng, nvars, depth - 1));
    default:
        return std::uniform_int_distribution<int>(0, 1)(rng) ? pool.neg(random_expr(pool, rng, nvars, depth - 1))
                                                              : pool.inv(random_expr(pool, rng, nvars, depth - 1));
    }
}

// Structural equality across two pools.
bool same_tree(const ExprPool& pa, ExprId a, const ExprPool& pb, ExprId b)
{
    const ExprNode &x = pa.node(a), &y = pb.node(b);
    if (x.kind != y.kind) return false;
    switch (x.kind) {
    case NodeKind::var:
        return pa.names().name(x.var) == pb.names().name(y.var);
    case NodeKind::constant:
        return x.value == y.value;
    case NodeKind::add:
    case NodeKind::mul:
        return same_tree(pa, x.a, pb, y.a) && same_tree(pa, x.b, pb, y.b);
    default:
        return same_tree(pa, x.a, pb, y.a);
    }
}

// Plain word-by-word evaluation of a Laurent polynomial.
PMatrix eval_poly(const NCPoly& p, const MatrixPoint<PrimeField>& pt)
{
    PrimeField f = pt.field;
    PMatrix acc(f, pt.d, pt.d);
    for (const auto& [word, c] : p.terms()) {
        PMatrix m = PMatrix::identity(f, pt.d);
        for (const Letter& l : word.letters()) {
            const PMatrix& v = pt.values[static_cast<std::size_t>(l.generator)];
            m = m * (l.exponent > 0 ? v : inverse(v));
        }
        acc = acc + m.scaled(f.from_rational(c));
    }
    return acc;
}

Schedule small_schedule()
{
    return {{1, 2, 3}, {FieldSpec::rationals(), FieldSpec::prime(kP)}, 3, 7};
}

}  // namespace

TEST_CASE("parse examples")
{
    ExprPool pool(Alphabet::xy());
    ExprId e = parse_scalar_expr(pool, "X*Y*X^-1");
    ExprId x = pool.var("X"), y = pool.var("Y");
    CHECK(e == pool.mul(pool.mul(x, y), pool.inv(x)));
    CHECK(print_expr(pool, e) == "X*Y*X^-1");

    ExprId s2 = parse_scalar_expr(pool, "(1+Y^-1)*X^-1");
    CHECK(s2 == pool.mul(pool.add(pool.one(), pool.inv(y)), pool.inv(x)));
    CHECK(print_expr(pool, s2) == "(1 + Y^-1)*X^-1");

    try {
        parse_expr(pool, "X*");
        FAIL("no error");
    } catch (const ParseError& err) {
        CHECK(err.offset() == 2);
    }
    CHECK_THROWS_AS(parse_expr(pool, "(X+"), ParseError);
    CHECK_THROWS_AS(parse_expr(pool, "X)"), ParseError);
    CHECK_THROWS_AS(parse_expr(pool, "X^0"), ParseError);
    CHECK_THROWS_AS(parse_expr(pool, "1/0"), ParseError);
    CHECK_THROWS_AS(parse_scalar_expr(pool, "[[X]]"), ParseError);
}

TEST_CASE("hash consing and constant folding")
{
    ExprPool pool;
    ExprId a = parse_scalar_expr(pool, "X*Y + X*Y");
    const ExprNode& n = pool.node(a);
    CHECK(n.kind == NodeKind::add);
    CHECK(n.a == n.b);
    CHECK(pool.dag_size(a) == 4);
    CHECK(pool.neg(pool.constant(3)) == pool.constant(-3));
    CHECK(parse_scalar_expr(pool, "2/4") == pool.constant(Rational(1, 2)));
    ExprId p4 = parse_scalar_expr(pool, "X^4");
    CHECK(pool.dag_size(p4) == 4);
    for (ExprId id : pool.reachable(a)) {
        const ExprNode& m = pool.node(id);
        if (m.kind == NodeKind::add || m.kind == NodeKind::mul) {
            CHECK(m.a < id);
            CHECK(m.b < id);
        }
    }
}

TEST_CASE("printer spot checks")
{
    ExprPool pool(Alphabet::xy());
    auto rt = [&](std::string_view s) { return print_expr(pool, parse_scalar_expr(pool, s)); };
    CHECK(rt("X - Y") == "X - Y");
    CHECK(rt("X + -3") == "X - 3");
    CHECK(rt("-(X*Y)") == "-(X*Y)");
    CHECK(rt("(X*Y)^-1") == "(X*Y)^-1");
    CHECK(rt("X - (Y - X)") == "X - (Y - X)");
    CHECK(rt("2/3*X") == "2/3*X");
    CHECK(rt("(-2)^-1*X") == "(-2)^-1*X");
    CHECK(rt("(X + Y)*(X - Y)") == "(X + Y)*(X - Y)");
}

TEST_CASE("block literals")
{
    ExprPool pool(Alphabet::xy());
    auto b = std::get<BlockExpr>(parse_expr(pool, "[[X, 1], [0, Y]]"));
    CHECK(b.rows == 2);
    CHECK(b.cols == 2);
    auto t = b.block_transpose();
    CHECK(t.at(0, 1) == b.at(1, 0));
    CHECK(print_block(pool, t) == "[[X, 0], [1, Y]]");
    CHECK_THROWS_AS(parse_expr(pool, "[[X, 1], [Y]]"), ParseError);

    auto pt = sample_point(PrimeField{kP}, 2, 2, 11);
    PMatrix bm = eval_block(pool, b, pt);
    CHECK(bm.block(0, 0, 2, 2) == pt.values[0]);
    CHECK(bm.block(2, 2, 2, 2) == pt.values[1]);
    CHECK(bm.block(0, 2, 2, 2).is_identity());
    CHECK(bm.block(2, 0, 2, 2).is_zero());

    // block transpose moves blocks without transposing them
    PMatrix tm = eval_block(pool, t, pt);
    CHECK(tm.block(0, 0, 2, 2) == pt.values[0]);
    CHECK(tm.block(2, 0, 2, 2).is_identity());

    auto prod = block_mul(pool, b, b);
    PMatrix pm = eval_block(pool, prod, pt);
    CHECK(pm == bm * bm);
    CHECK(eval_block(pool, block_add(pool, b, t), pt) == bm + tm);
}

TEST_CASE("sample_point")
{
    auto a = sample_point(PrimeField{5}, 3, 1, 42, {true, false, true});
    auto b = sample_point(PrimeField{5}, 3, 1, 42, {true, false, true});
    REQUIRE(a.values.size() == 3);
    for (std::size_t v = 0; v < 3; ++v) {
        CHECK(a.values[v] == b.values[v]);
        CHECK(a.values[v](0, 0) < 5);
    }
    CHECK(a.values[0](0, 0) != 0);
    CHECK(a.values[2](0, 0) != 0);

    for (u64 seed = 0; seed < 20; ++seed) {
        auto q = sample_point(RationalField{}, 2, 3, seed, {true, true});
        for (const auto& m : q.values) {
            CHECK(determinant(m) != 0);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    CHECK(m(i, j) >= -9);
                    CHECK(m(i, j) <= 9);
                    CHECK(is_integer(m(i, j)));
                }
        }
    }
    CHECK_THROWS_AS(sample_point(PrimeField{2}, 1, 0, 1), std::invalid_argument);
}

TEST_CASE("evaluation examples")
{
    ExprPool pool(Alphabet::xy());
    ExprId e = parse_scalar_expr(pool, "X*X^-1 - 1");
    for (std::size_t d = 1; d <= 3; ++d) CHECK(eval_expr(pool, e, sample_point(RationalField{}, 2, d, d, {true, true})).is_zero());

    ExprId c = parse_scalar_expr(pool, "X*Y - Y*X");
    CHECK(eval_expr(pool, c, sample_point(RationalField{}, 2, 1, 3)).is_zero());
    CHECK_FALSE(eval_expr(pool, c, sample_point(RationalField{}, 2, 2, 3)).is_zero());

    ExprId s = parse_scalar_expr(pool, "(X - X)^-1");
    ExprId inner = pool.inv(pool.sub(pool.var(0), pool.var(0)));
    CHECK(s == inner);
    try {
        eval_expr(pool, s, sample_point(RationalField{}, 2, 2, 1));
        FAIL("no throw");
    } catch (const SingularInverse& err) {
        CHECK(err.node() == inner);
    }

    ExprPool lonely;
    ExprId z = parse_scalar_expr(lonely, "Z");
    CHECK_THROWS_AS(eval_expr(lonely, z, sample_point(RationalField{}, 0, 1, 1)), std::invalid_argument);
}

TEST_CASE("prove_zero verdicts")
{
    ExprPool pool(Alphabet::xy());
    std::vector<bool> group{true, true};
    ExprId e = parse_scalar_expr(pool, "X*X^-1 - 1");
    ZeroVerdict v = prove_zero(pool, e, small_schedule(), group);
    CHECK(v.kind == ZeroVerdict::Kind::zero_evidence);
    CHECK(v.evaluations == 18);

    ExprId c = parse_scalar_expr(pool, "X*Y - Y*X");
    ZeroVerdict n = prove_zero(pool, c, small_schedule(), group);
    CHECK(n.kind == ZeroVerdict::Kind::nonzero);
    CHECK(n.witness_d == 2);
    CHECK(recheck_nonzero(pool, c, n, group));
    ZeroVerdict again = prove_zero(pool, c, small_schedule(), group);
    CHECK(again.witness_seed == n.witness_seed);
    CHECK(again.witness_field == n.witness_field);

    ExprId s = parse_scalar_expr(pool, "(X - X)^-1");
    ZeroVerdict bad = prove_zero(pool, s, {{2}, {FieldSpec::prime(kP)}, 1, 1});
    CHECK(bad.kind == ZeroVerdict::Kind::all_singular);
    CHECK(bad.singular == 100);
    CHECK(bad.singular_rate() == 1.0);

    // (1 + X)^-1 is singular for some scalar draws only
    ExprId r = parse_scalar_expr(pool, "(1 + X)^-1*(1 + X) - 1");
    ZeroVerdict part = prove_zero(pool, r, {{1}, {FieldSpec::prime(5)}, 40, 3});
    CHECK(part.kind == ZeroVerdict::Kind::zero_evidence);
    CHECK(part.singular > 0);
    CHECK(part.singular_rate() < 0.5);
}

TEST_CASE("to_ncpoly and from_ncpoly")
{
    ExprPool pool(Alphabet::xy());
    NCPoly p = to_ncpoly(pool, parse_scalar_expr(pool, "(X + Y^-1)*(X^-1 - 2*Y) + 3"));
    NCPolyBuilder b;
    b.add(Word(), 4);
    b.add(w({X, Y}), -2);
    b.add(w({Yi, Xi}), 1);
    b.add(Word(), -2);
    CHECK(p == b.finish());
    CHECK(to_ncpoly(pool, parse_scalar_expr(pool, "(X*Y)^-1")) == NCPoly(w({Yi, Xi}), 1));
    CHECK(to_ncpoly(pool, parse_scalar_expr(pool, "(2*X)^-1")) == NCPoly(w({Xi}), Rational(1, 2)));
    CHECK_THROWS_AS(to_ncpoly(pool, parse_scalar_expr(pool, "(1 + X)^-1")), std::domain_error);
}

TEST_CASE("property: parse(print(e)) is e")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        ExprPool pool(Alphabet({"X", "Y", "Z"}));
        ExprId e = random_expr(pool, rng, 3, 5);
        std::string text = print_expr(pool, e);
        ExprPool fresh(Alphabet({"X", "Y", "Z"}));
        ExprId back = parse_scalar_expr(fresh, text);
        INFO(text);
        CHECK(same_tree(pool, e, fresh, back));
        CHECK(pool.structural_hash(e) == fresh.structural_hash(back));
        CHECK(parse_scalar_expr(pool, text) == e);
    }
}

TEST_CASE("property: evaluation is a homomorphism")
{
    std::mt19937_64 rng(99);
    std::size_t checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        ExprPool pool(Alphabet({"X", "Y", "Z"}));
        ExprId a = random_expr(pool, rng, 3, 3), b = random_expr(pool, rng, 3, 3);
        auto pt = sample_point(PrimeField{kP}, 3, 1 + trial % 3, static_cast<u64>(trial), {true, true, true});
        try {
            PMatrix va = eval_expr(pool, a, pt), vb = eval_expr(pool, b, pt);
            CHECK(eval_expr(pool, pool.add(a, b), pt) == va + vb);
            CHECK(eval_expr(pool, pool.mul(a, b), pt) == va * vb);
            CHECK(eval_expr(pool, pool.neg(a), pt) == -va);
            if (!PrimeField{kP}.is_zero(determinant(va))) {
                PMatrix vi = eval_expr(pool, pool.inv(a), pt);
                CHECK((vi * va).is_identity());
            }
            auto many = eval_many(pool, {a, b}, pt);
            CHECK(many[0] == va);
            CHECK(many[1] == vb);
            ++checked;
        } catch (const SingularInverse&) {
        }
    }
    CHECK(checked > 250);
}

TEST_CASE("property: Laurent polynomials evaluate like their words")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        NCPoly p = random_poly(rng, 2, 5, 4);
        ExprPool pool(Alphabet::xy());
        ExprId e = from_ncpoly(pool, p);
        CHECK(to_ncpoly(pool, e) == p);
        auto pt = sample_point(PrimeField{kP}, 2, 2, static_cast<u64>(trial), {true, true});
        CHECK(eval_expr(pool, e, pt) == eval_poly(p, pt));
    }
}

TEST_CASE("property: substitution commutes with evaluation")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        ExprPool pool(Alphabet::xy());
        ExprId e = random_expr(pool, rng, 2, 4);
        ExprId fx = random_expr(pool, rng, 2, 2), fy = random_expr(pool, rng, 2, 2);
        ExprId sub = pool.substitute(e, {fx, fy});
        auto pt = sample_point(PrimeField{kP}, 2, 2, static_cast<u64>(trial) + 500, {true, true});
        try {
            auto images = eval_many(pool, {fx, fy}, pt);
            MatrixPoint<PrimeField> moved{pt.field, pt.d, pt.seed, images};
            PMatrix direct = eval_expr(pool, sub, pt);
            PMatrix via = eval_expr(pool, e, moved);
            CHECK(direct == via);
        } catch (const SingularInverse&) {
        }
    }
}
