#include "ncid/dynamics.hpp"

#include <algorithm>

namespace ncid {

MapSpec MapSpec::S(int l)
{
    if (l == 0 || l < -1) throw std::invalid_argument("S_l needs l >= 1 or l = -1");
    return {Kind::S, l};
}

MapSpec MapSpec::U(int k)
{
    if (k < 3 || k % 2 == 0) throw std::invalid_argument("U recursion needs odd k >= 3");
    return {Kind::U, k};
}

MapSpec MapSpec::parse(const std::string& name)
{
    if (name.size() < 2) throw std::invalid_argument("unknown map " + name);
    const std::string rest = name.substr(1);
    int v = 0;
    try {
        std::size_t used = 0;
        v = std::stoi(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(name);
    } catch (const std::exception&) {
        throw std::invalid_argument("unknown map " + name);
    }
    if (name[0] == 'S') return S(v);
    if (name[0] == 'U') return U(v);
    throw std::invalid_argument("unknown map " + name);
}

std::string MapSpec::name() const { return (kind == Kind::S ? "S" : "U") + std::to_string(param); }

Alphabet MapSpec::alphabet() const { return kind == Kind::S ? Alphabet::xy() : Alphabet::indexed(param, "U"); }

std::vector<ExprId> u_sequence(ExprPool& pool, int k, std::size_t count)
{
    MapSpec::U(k);
    std::vector<ExprId> u;
    for (int i = 0; i < k && u.size() < count; ++i) u.push_back(pool.var(i));
    const std::size_t K = static_cast<std::size_t>(k);
    // u[i] holds U_{i+1}
    for (std::size_t n = K + 1; n <= count; ++n) {
        ExprId back = u[n - K - 1], last = u[n - 2], mid = u[n - K];
        if (n % 2 == 0)
            u.push_back(pool.mul(pool.inv(back), pool.add(pool.one(), pool.mul(last, mid))));
        else
            u.push_back(pool.mul(pool.add(pool.one(), pool.mul(mid, last)), pool.inv(back)));
    }
    return u;
}

std::vector<State> iterate_map(ExprPool& pool, const MapSpec& spec, std::size_t steps)
{
    std::vector<State> out;
    if (spec.kind == MapSpec::Kind::U) {
        const std::size_t k = static_cast<std::size_t>(spec.param);
        auto u = u_sequence(pool, spec.param, k + 2 * steps);
        for (std::size_t s = 0; s <= steps; ++s) out.emplace_back(u.begin() + static_cast<long>(2 * s), u.begin() + static_cast<long>(2 * s + k));
        return out;
    }
    auto& names = pool.names();
    State st{pool.var(names.intern("X")), pool.var(names.intern("Y"))};
    out.push_back(st);
    for (std::size_t s = 0; s < steps; ++s) {
        ExprId x = st[0], y = st[1], xi = pool.inv(x);
        st = {pool.mul(pool.mul(x, y), xi), pool.mul(pool.add(pool.one(), pool.power(y, spec.param)), xi)};
        out.push_back(st);
    }
    return out;
}

std::vector<ExprId> recursion_residuals(ExprPool& pool, const MapSpec& spec, const State& from, const State& to)
{
    std::vector<ExprId> r;
    if (spec.kind == MapSpec::Kind::S) {
        ExprId x = from[0], y = from[1];
        r.push_back(pool.sub(pool.mul(to[0], x), pool.mul(x, y)));
        r.push_back(pool.sub(pool.mul(to[1], x), pool.add(pool.one(), pool.power(y, spec.param))));
        return r;
    }
    const std::size_t k = static_cast<std::size_t>(spec.param);
    for (std::size_t i = 0; i + 2 < k; ++i) r.push_back(pool.sub(to[i], from[i + 2]));
    std::vector<ExprId> seq(from.begin(), from.end());
    seq.push_back(to[k - 2]);
    seq.push_back(to[k - 1]);
    // seq[k] has even index, seq[k + 1] odd
    r.push_back(pool.sub(pool.mul(seq[0], seq[k]), pool.add(pool.one(), pool.mul(seq[k - 1], seq[1]))));
    r.push_back(pool.sub(pool.mul(seq[k + 1], seq[1]), pool.add(pool.one(), pool.mul(seq[2], seq[k]))));
    return r;
}

// ---------------------------------------------------------------------------
// Lax pair

LaxBlocks lax_blocks(ExprPool& pool, const Rational& t)
{
    if (t == 0) throw std::invalid_argument("lax_residual: t must be nonzero");
    auto& names = pool.names();
    ExprId X = pool.var(names.intern("X")), Y = pool.var(names.intern("Y"));
    ExprId one = pool.one(), Xi = pool.inv(X), Yi = pool.inv(Y);
    ExprId ct = pool.constant(t), cti = pool.constant(1 / t);
    ExprId tail = pool.add(pool.mul(Yi, Xi), Xi);  // Y^-1 X^-1 + X^-1

    LaxBlocks b;
    b.L = {2, 2, {pool.add(Yi, X), pool.add(pool.add(pool.mul(ct, Y), tail), one),
                  pool.add(Yi, pool.mul(cti, X)), pool.add(pool.add(Y, tail), cti)}};

    ExprId A = pool.inv(pool.add(pool.add(one, X), Y));  // (1 + X + Y)^-1
    ExprId B = pool.inv(pool.add(one, Yi));              // (1 + Y^-1)^-1
    b.V = {2, 2, {pool.mul(pool.mul(pool.mul(X, A), X), B), pool.mul(pool.mul(pool.mul(ct, X), A), Y),
                  pool.mul(pool.mul(pool.mul(X, B), X), A), pool.mul(pool.mul(X, Y), A)}};

    const std::vector<ExprId> images{pool.mul(pool.mul(X, Y), Xi), pool.mul(pool.add(one, Yi), Xi)};
    std::vector<ExprId> sub_images(static_cast<std::size_t>(pool.names().size()));
    for (std::size_t i = 0; i < sub_images.size(); ++i) sub_images[i] = pool.var(static_cast<int>(i));
    sub_images[static_cast<std::size_t>(names.find("X"))] = images[0];
    sub_images[static_cast<std::size_t>(names.find("Y"))] = images[1];
    b.SL = b.L;
    for (auto& cell : b.SL.cells) cell = pool.substitute(cell, sub_images);

    BlockExpr left = block_mul(pool, b.SL, b.V), right = block_mul(pool, b.V, b.L);
    b.residual = left;
    for (std::size_t k = 0; k < left.cells.size(); ++k) b.residual.cells[k] = pool.sub(left.cells[k], right.cells[k]);
    return b;
}

double LaxReport::degeneracy_rate() const
{
    std::size_t total = evaluations + singular;
    return total ? static_cast<double>(singular) / static_cast<double>(total) : 0.0;
}

namespace {

// det(1 - lambda M) agrees at 2d+1 values of lambda iff the polynomials agree.
template <class F>
bool same_spectrum(const Matrix<F>& a, const Matrix<F>& b)
{
    const F& f = a.field();
    const std::size_t n = a.rows();
    const Matrix<F> id = Matrix<F>::identity(f, n);
    for (std::size_t k = 0; k <= n; ++k) {
        auto lam = f.from_int(static_cast<long>(k));
        if (!f.is_zero(f.sub(determinant(id - a.scaled(lam)), determinant(id - b.scaled(lam))))) return false;
    }
    return true;
}

template <class F>
void run_lax(const ExprPool& pool, const std::vector<LaxBlocks>& blocks, F field, LaxReport& rep, u64 seed)
{
    const std::size_t nvars = static_cast<std::size_t>(pool.names().size());
    for (std::size_t ti = 0; ti < blocks.size(); ++ti)
        for (std::size_t trial = 0; trial < rep.trials; ++trial) {
            bool done = false;
            for (u64 attempt = 0; attempt < 100 && !done; ++attempt) {
                u64 s = mix_seed(seed, ti * 1000 + trial, rep.d, attempt);
                try {
                    auto pt = sample_point(field, nvars, rep.d, s, std::vector<bool>(nvars, true));
                    Matrix<F> res = eval_block(pool, blocks[ti].residual, pt);
                    Matrix<F> L = eval_block(pool, blocks[ti].L, pt), SL = eval_block(pool, blocks[ti].SL, pt);
                    ++rep.evaluations;
                    done = true;
                    bool bad = false;
                    if (!res.is_zero()) {
                        ++rep.nonzero;
                        bad = true;
                    }
                    if (!same_spectrum(L, SL)) {
                        ++rep.spectrum_mismatch;
                        bad = true;
                    }
                    if (bad && rep.witness_seed == 0) {
                        rep.witness_seed = s;
                        rep.witness_t = rep.t_values[ti];
                    }
                } catch (const SingularInverse&) {
                    ++rep.singular;
                } catch (const RetryBudgetExhausted&) {
                    ++rep.singular;
                }
            }
        }
}

}  // namespace

LaxReport lax_residual(std::size_t d, const FieldSpec& field, const std::vector<Rational>& t_values, std::size_t trials,
                       u64 seed)
{
    ExprPool pool(Alphabet::xy());
    std::vector<LaxBlocks> blocks;
    for (const Rational& t : t_values) blocks.push_back(lax_blocks(pool, t));
    LaxReport rep;
    rep.d = d;
    rep.field = field;
    rep.t_values = t_values;
    rep.trials = trials;
    if (field.rational)
        run_lax(pool, blocks, RationalField{}, rep, seed);
    else
        run_lax(pool, blocks, PrimeField{field.p}, rep, seed);
    return rep;
}

namespace {

// Coefficients (low to high) of the polynomial through (xs[i], ys[i]).
std::vector<Rational> interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys)
{
    const std::size_t n = xs.size();
    std::vector<Rational> dd = ys;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
    std::vector<Rational> c(n, Rational(0));
    for (std::size_t k = n; k-- > 0;) {
        // c = c * (x - xs[k]) + dd[k]
        for (std::size_t i = n - 1; i >= 1; --i) c[i] = c[i - 1] - xs[k] * c[i];
        c[0] = -xs[k] * c[0] + dd[k];
    }
    return c;
}

}  // namespace

CommPoly bichar_poly(const QMatrix& A, const QMatrix& B)
{
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw std::invalid_argument("bichar_poly: square matrices of equal size required");
    const std::size_t d = A.rows();
    RationalField f;
    std::vector<Rational> grid;
    for (std::size_t i = 0; i <= d; ++i) grid.emplace_back(static_cast<long>(i));
    const QMatrix id = QMatrix::identity(f, d);
    // per x value, the polynomial in y
    std::vector<std::vector<Rational>> in_y;
    for (const Rational& x : grid) {
        std::vector<Rational> vals;
        for (const Rational& y : grid) vals.push_back(determinant(id - A.scaled(x) - B.scaled(y)));
        in_y.push_back(interpolate(grid, vals));
    }
    CommPoly out;
    for (std::size_t m = 0; m <= d; ++m) {
        std::vector<Rational> vals;
        for (std::size_t i = 0; i <= d; ++i) vals.push_back(in_y[i][m]);
        auto cx = interpolate(grid, vals);
        for (std::size_t n = 0; n <= d; ++n)
            if (cx[n] != 0) out[{static_cast<int>(n), static_cast<int>(m)}] = cx[n];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Involutions

template <class F>
Matrix<F> involution_I2(const Matrix<F>& m, std::size_t d)
{
    Matrix<F> out(m.field(), m.rows(), m.cols());
    const std::size_t r = m.rows() / d;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) out.set_block(j * d, i * d, m.block(i * d, j * d, d, d));
    return out;
}

template <class F>
Matrix<F> involution_I3(const Matrix<F>& m, std::size_t d)
{
    Matrix<F> out(m.field(), m.rows(), m.cols());
    const std::size_t r = m.rows() / d;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) out.set_block(i * d, j * d, inverse(m.block(i * d, j * d, d, d)));
    return out;
}

template <class F>
Matrix<F> apply_F(const Matrix<F>& m, std::size_t d)
{
    return involution_I1(involution_I2(involution_I3(m, d), d));
}

template <class F>
Matrix<F> conjecture1_normalize(const Matrix<F>& m, std::size_t d)
{
    if (m.rows() != 3 * d || m.cols() != 3 * d) throw std::invalid_argument("conjecture1_normalize: expected 3x3 blocks");
    auto blk = [&](std::size_t i, std::size_t j) { return m.block(i * d, j * d, d, d); };
    std::vector<Matrix<F>> R, L;
    for (std::size_t j = 0; j < 3; ++j) R.push_back(inverse(blk(2, j)));
    const Matrix<F> m33 = blk(2, 2);
    for (std::size_t i = 0; i < 2; ++i) L.push_back(m33 * inverse(blk(i, 2)));
    L.push_back(Matrix<F>::identity(m.field(), d));
    Matrix<F> out(m.field(), 3 * d, 3 * d);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) out.set_block(i * d, j * d, L[i] * blk(i, j) * R[j]);
    return out;
}

namespace {

u64 next_u64(u64& state)
{
    state = mix_seed(state, 0x9e37);
    return state;
}

typename RationalField::Element draw_coeff(const RationalField&, u64& s) { return Rational(static_cast<long>(next_u64(s) % 19) - 9); }
typename PrimeField::Element draw_coeff(const PrimeField& f, u64& s) { return next_u64(s) % f.p; }

}  // namespace

template <class F>
bool simultaneously_conjugate(const Matrix<F>& a, const Matrix<F>& b, std::size_t d, u64 seed)
{
    const F& f = a.field();
    const std::size_t r = a.rows() / d, nb = r * r, u = d * d;
    // unknown g_{pq} at column p*d + q; rows: (g A - B g)_{rs} per block
    Matrix<F> sys(f, nb * u, u);
    for (std::size_t bi = 0; bi < r; ++bi)
        for (std::size_t bj = 0; bj < r; ++bj) {
            Matrix<F> A = a.block(bi * d, bj * d, d, d), B = b.block(bi * d, bj * d, d, d);
            const std::size_t base = (bi * r + bj) * u;
            for (std::size_t rr = 0; rr < d; ++rr)
                for (std::size_t ss = 0; ss < d; ++ss)
                    for (std::size_t k = 0; k < d; ++k) {
                        auto& x = sys(base + rr * d + ss, rr * d + k);
                        x = f.add(x, A(k, ss));
                        auto& y = sys(base + rr * d + ss, k * d + ss);
                        y = f.sub(y, B(rr, k));
                    }
        }
    auto basis = nullspace(sys);
    if (basis.empty()) return false;
    u64 state = seed;
    for (int attempt = 0; attempt < 8; ++attempt) {
        Matrix<F> g(f, d, d);
        for (const auto& v : basis) {
            auto c = attempt == 0 && basis.size() == 1 ? f.one() : draw_coeff(f, state);
            for (std::size_t k = 0; k < u; ++k) g(k / d, k % d) = f.add(g(k / d, k % d), f.mul(c, v[k]));
        }
        if (!f.is_zero(determinant(g))) return true;
    }
    return false;
}

std::size_t ConjectureReport::degenerate() const
{
    return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.degenerate; }));
}

double ConjectureReport::degeneracy_rate() const
{
    std::size_t draws = 0, bad = 0;
    for (const auto& t : trials) {
        draws += t.resamples + (t.degenerate ? 0 : 1);
        bad += t.resamples;
    }
    return draws ? static_cast<double>(bad) / static_cast<double>(draws) : 0.0;
}

std::size_t ConjectureReport::residual_zero() const
{
    return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return !t.degenerate && t.residual_zero; }));
}

std::size_t ConjectureReport::naive_zero() const
{
    return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return !t.degenerate && t.naive_zero; }));
}

bool ConjectureReport::involutions_ok() const
{
    return std::all_of(trials.begin(), trials.end(), [](const auto& t) { return t.degenerate || t.involutions_ok; });
}

double ConjectureReport::nontrivial_rate() const
{
    std::size_t n = 0, good = 0;
    for (const auto& t : trials) {
        if (t.degenerate) continue;
        ++n;
        if (!t.F_identity && !t.F2_identity) ++good;
    }
    return n ? static_cast<double>(good) / static_cast<double>(n) : 0.0;
}

namespace {

template <class F>
ConjectureTrial conjecture_trial(F field, std::size_t d, u64 seed)
{
    ConjectureTrial t;
    for (u64 attempt = 0; attempt < 100; ++attempt) {
        u64 s = mix_seed(seed, attempt, d, 0xc3);
        Matrix<F> m(field, 3 * d, 3 * d);
        try {
            // the nine entries are sampled like group variables since I3 inverts each one
            auto pt = sample_point(field, 9, d, s, std::vector<bool>(9, true));
            for (std::size_t k = 0; k < 9; ++k) m.set_block(k / 3 * d, k % 3 * d, pt.values[k]);
            Matrix<F> f1 = apply_F(m, d), f2 = apply_F(f1, d), f3 = apply_F(f2, d);
            Matrix<F> n0 = conjecture1_normalize(m, d), n1 = conjecture1_normalize(f1, d);
            Matrix<F> n2 = conjecture1_normalize(f2, d), n3 = conjecture1_normalize(f3, d);
            t.seed = s;
            t.resamples = attempt;
            t.involutions_ok = involution_I1(involution_I1(m)) == m && involution_I2(involution_I2(m, d), d) == m &&
                               involution_I3(involution_I3(m, d), d) == m;
            t.naive_zero = n3 == n0;
            Matrix<F> diff = n3 - n0;
            for (const auto& x : diff.data())
                if (!field.is_zero(x)) ++t.naive_nonzero_entries;
            t.residual_zero = simultaneously_conjugate(n3, n0, d, s);
            t.F_identity = simultaneously_conjugate(n1, n0, d, s + 1);
            t.F2_identity = simultaneously_conjugate(n2, n0, d, s + 2);
            return t;
        } catch (const SingularMatrix&) {
        } catch (const RetryBudgetExhausted&) {
        }
    }
    t.degenerate = true;
    t.resamples = 100;
    return t;
}

}  // namespace

ConjectureReport conjecture1_period_check(std::size_t d, const FieldSpec& field, std::size_t trials, u64 seed)
{
    if (d == 0) throw std::invalid_argument("conjecture1_period_check: d must be >= 1");
    ConjectureReport rep;
    rep.d = d;
    rep.field = field;
    for (std::size_t i = 0; i < trials; ++i) {
        u64 s = mix_seed(seed, i, d, field.p);
        rep.trials.push_back(field.rational ? conjecture_trial(RationalField{}, d, s) : conjecture_trial(PrimeField{field.p}, d, s));
    }
    return rep;
}

template Matrix<RationalField> involution_I2(const Matrix<RationalField>&, std::size_t);
template Matrix<PrimeField> involution_I2(const Matrix<PrimeField>&, std::size_t);
template Matrix<RationalField> involution_I3(const Matrix<RationalField>&, std::size_t);
template Matrix<PrimeField> involution_I3(const Matrix<PrimeField>&, std::size_t);
template Matrix<RationalField> apply_F(const Matrix<RationalField>&, std::size_t);
template Matrix<PrimeField> apply_F(const Matrix<PrimeField>&, std::size_t);
template Matrix<RationalField> conjecture1_normalize(const Matrix<RationalField>&, std::size_t);
template Matrix<PrimeField> conjecture1_normalize(const Matrix<PrimeField>&, std::size_t);
template bool simultaneously_conjugate(const Matrix<RationalField>&, const Matrix<RationalField>&, std::size_t, u64);
template bool simultaneously_conjugate(const Matrix<PrimeField>&, const Matrix<PrimeField>&, std::size_t, u64);

// ---------------------------------------------------------------------------
// Growth

OrbitReport growth_probe(const MapSpec& spec, std::size_t steps, const DivisionBudget& budget, u64 seed)
{
    OrbitReport rep;
    rep.spec = spec;
    ExprPool pool(spec.alphabet());
    auto states = iterate_map(pool, spec, steps);
    const int nvars = spec.arity();
    const PrimeField f{default_primes().front()};
    for (std::size_t s = 0; s < states.size(); ++s) {
        IterateReport it;
        it.step = s;
        for (ExprId e : states[s]) {
            it.dag_sizes.push_back(pool.dag_size(e));
            auto p = laurent_expand(pool, e, nvars, budget);
            it.recovered.push_back(p.has_value());
            it.support.push_back(p ? p->size() : 0);
            it.degree.push_back(p ? p->degree() : 0);
        }
        if (s > 0) {
            auto res = recursion_residuals(pool, spec, states[s - 1], states[s]);
            bool ok = false;
            for (u64 attempt = 0; attempt < 100 && !ok; ++attempt) {
                try {
                    auto pt = sample_point(f, static_cast<std::size_t>(nvars), 2, mix_seed(seed, s, attempt),
                                           std::vector<bool>(static_cast<std::size_t>(nvars), true));
                    auto vals = eval_many(pool, res, pt);
                    it.recursion_ok = std::all_of(vals.begin(), vals.end(), [](const PMatrix& m) { return m.is_zero(); });
                    ok = true;
                } catch (const SingularInverse&) {
                }
            }
            if (!ok) it.recursion_ok = false;
        }
        rep.iterates.push_back(std::move(it));
    }
    return rep;
}

}  // namespace ncid
