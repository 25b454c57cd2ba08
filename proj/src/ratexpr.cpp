#include "ncid/ratexpr.hpp"

#include <algorithm>
#include <cctype>

namespace ncid {

ExprId ExprPool::intern(ExprNode n)
{
    Key k{n.kind, n.a, n.b, n.var};
    if (auto it = index_.find(k); it != index_.end()) return it->second;
    ExprId id = static_cast<ExprId>(nodes_.size());
    nodes_.push_back(std::move(n));
    index_.emplace(k, id);
    return id;
}

ExprId ExprPool::var(int index)
{
    if (index < 0) throw std::invalid_argument("negative variable index");
    while (names_.size() <= index) names_.intern(names_.name(names_.size()));
    ExprNode n;
    n.kind = NodeKind::var;
    n.var = index;
    return intern(std::move(n));
}

ExprId ExprPool::constant(const Rational& c)
{
    if (auto it = constants_.find(c); it != constants_.end()) return it->second;
    ExprId id = static_cast<ExprId>(nodes_.size());
    ExprNode n;
    n.kind = NodeKind::constant;
    n.value = c;
    nodes_.push_back(std::move(n));
    constants_.emplace(c, id);
    return id;
}

ExprId ExprPool::add(ExprId a, ExprId b) { return intern({NodeKind::add, a, b, -1, Rational(0)}); }
ExprId ExprPool::mul(ExprId a, ExprId b) { return intern({NodeKind::mul, a, b, -1, Rational(0)}); }

ExprId ExprPool::neg(ExprId a)
{
    if (nodes_[a].kind == NodeKind::constant) return constant(-nodes_[a].value);
    return intern({NodeKind::neg, a, 0, -1, Rational(0)});
}

ExprId ExprPool::inv(ExprId a) { return intern({NodeKind::inv, a, 0, -1, Rational(0)}); }

ExprId ExprPool::power(ExprId a, int k)
{
    if (k == 0) throw std::invalid_argument("power: exponent 0");
    int m = k < 0 ? -k : k;
    ExprId r = a;
    for (int i = 1; i < m; ++i) r = mul(r, a);
    return k < 0 ? inv(r) : r;
}

std::vector<ExprId> ExprPool::reachable(ExprId root) const
{
    std::vector<ExprId> out;
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<ExprId> stack{root};
    seen[root] = true;
    while (!stack.empty()) {
        ExprId id = stack.back();
        stack.pop_back();
        out.push_back(id);
        const ExprNode& n = nodes_[id];
        auto push = [&](ExprId c) {
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
        };
        switch (n.kind) {
        case NodeKind::add:
        case NodeKind::mul:
            push(n.a);
            push(n.b);
            break;
        case NodeKind::neg:
        case NodeKind::inv:
            push(n.a);
            break;
        default:
            break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t ExprPool::dag_size(ExprId root) const { return reachable(root).size(); }

ExprId ExprPool::substitute(ExprId root, const std::vector<ExprId>& images)
{
    auto order = reachable(root);
    std::unordered_map<ExprId, ExprId> memo;
    memo.reserve(order.size());
    for (ExprId id : order) {
        ExprNode n = nodes_[id];
        ExprId r = id;
        switch (n.kind) {
        case NodeKind::var:
            if (static_cast<std::size_t>(n.var) < images.size()) r = images[static_cast<std::size_t>(n.var)];
            break;
        case NodeKind::constant:
            break;
        case NodeKind::add:
            r = add(memo.at(n.a), memo.at(n.b));
            break;
        case NodeKind::mul:
            r = mul(memo.at(n.a), memo.at(n.b));
            break;
        case NodeKind::neg:
            r = neg(memo.at(n.a));
            break;
        case NodeKind::inv:
            r = inv(memo.at(n.a));
            break;
        }
        memo[id] = r;
    }
    return memo.at(root);
}

std::uint64_t ExprPool::structural_hash(ExprId root) const
{
    std::unordered_map<ExprId, std::uint64_t> h;
    auto mix = [](std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    };
    for (ExprId id : reachable(root)) {
        const ExprNode& n = nodes_[id];
        std::uint64_t v = mix(static_cast<std::uint64_t>(n.kind) + 1);
        switch (n.kind) {
        case NodeKind::var:
            v = mix(v ^ static_cast<std::uint64_t>(n.var));
            break;
        case NodeKind::constant:
            v = mix(v ^ std::hash<std::string>{}(ncid::to_string(n.value)));
            break;
        case NodeKind::add:
        case NodeKind::mul:
            v = mix(mix(v ^ h.at(n.a)) ^ (h.at(n.b) * 3));
            break;
        default:
            v = mix(v ^ h.at(n.a));
        }
        h[id] = v;
    }
    return h.at(root);
}

BlockExpr BlockExpr::block_transpose() const
{
    BlockExpr t{cols, rows, std::vector<ExprId>(cells.size())};
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

BlockExpr block_add(ExprPool& pool, const BlockExpr& a, const BlockExpr& b)
{
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("block shape mismatch");
    BlockExpr r = a;
    for (std::size_t k = 0; k < r.cells.size(); ++k) r.cells[k] = pool.add(a.cells[k], b.cells[k]);
    return r;
}

BlockExpr block_mul(ExprPool& pool, const BlockExpr& a, const BlockExpr& b)
{
    if (a.cols != b.rows) throw std::invalid_argument("block shape mismatch");
    BlockExpr r{a.rows, b.cols, std::vector<ExprId>(a.rows * b.cols)};
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) {
            ExprId acc = pool.mul(a.at(i, 0), b.at(0, j));
            for (std::size_t k = 1; k < a.cols; ++k) acc = pool.add(acc, pool.mul(a.at(i, k), b.at(k, j)));
            r.at(i, j) = acc;
        }
    return r;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    Parser(ExprPool& pool, std::string_view text) : pool_(pool), s_(text) {}

    Parsed parse_top()
    {
        skip();
        Parsed out;
        if (peek() == '[') out = block();
        else out = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek()
    {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c)
    {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    BlockExpr block()
    {
        expect('[');
        std::vector<std::vector<ExprId>> rows;
        do {
            expect('[');
            std::vector<ExprId> row{expr()};
            while (accept(',')) row.push_back(expr());
            expect(']');
            rows.push_back(std::move(row));
        } while (accept(','));
        expect(']');
        BlockExpr b{rows.size(), rows.front().size(), {}};
        for (const auto& r : rows) {
            if (r.size() != b.cols) fail("ragged block literal");
            b.cells.insert(b.cells.end(), r.begin(), r.end());
        }
        return b;
    }

    ExprId expr()
    {
        ExprId acc = term();
        while (true) {
            if (accept('+')) acc = pool_.add(acc, term());
            else if (accept('-')) acc = pool_.add(acc, pool_.neg(term()));
            else return acc;
        }
    }

    ExprId term()
    {
        ExprId acc = unary();
        while (accept('*')) acc = pool_.mul(acc, unary());
        return acc;
    }

    ExprId unary()
    {
        if (accept('-')) return pool_.neg(unary());
        return postfix();
    }

    ExprId postfix()
    {
        ExprId base = atom();
        while (accept('^')) {
            bool negative = accept('-');
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            int k = std::stoi(std::string(s_.substr(start, pos_ - start)));
            if (k == 0) {
                pos_ = start;
                fail("exponent must be nonzero");
            }
            base = pool_.power(base, negative ? -k : k);
        }
        return base;
    }

    Integer integer()
    {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return Integer(std::string(s_.substr(start, pos_ - start)));
    }

    ExprId atom()
    {
        char c = peek();
        if (c == '(') {
            ++pos_;
            ExprId e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer num = integer();
            Integer den = 1;
            std::size_t save = pos_;
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) den = integer();
                else {
                    pos_ = save + 1;
                    fail("expected denominator");
                }
                if (den == 0) fail("zero denominator");
            }
            Rational q(num, den);
            q.canonicalize();
            return pool_.constant(q);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            return pool_.var(s_.substr(start, pos_ - start));
        }
        if (c == '\0') fail("unexpected end of input");
        if (c == '[') fail("block literal only allowed at top level");
        fail("unexpected character");
    }

    ExprPool& pool_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

// precedence: 1 sum, 2 product, 3 unary minus, 4 postfix
std::string print_rec(const ExprPool& pool, ExprId id, int ctx)
{
    const ExprNode& n = pool.node(id);
    auto wrap = [&](std::string s, int own) { return own < ctx ? "(" + s + ")" : s; };
    switch (n.kind) {
    case NodeKind::var:
        return pool.names().name(n.var);
    case NodeKind::constant: {
        std::string s = ncid::to_string(n.value);
        return n.value < 0 ? wrap(s, 3) : s;
    }
    case NodeKind::add: {
        std::string left = print_rec(pool, n.a, 1);
        const ExprNode& r = pool.node(n.b);
        std::string right;
        if (r.kind == NodeKind::neg) right = " - " + print_rec(pool, r.a, 2);
        else if (r.kind == NodeKind::constant && r.value < 0) right = " - " + ncid::to_string(Rational(-r.value));
        else right = " + " + print_rec(pool, n.b, 2);
        return wrap(left + right, 1);
    }
    case NodeKind::mul:
        return wrap(print_rec(pool, n.a, 2) + "*" + print_rec(pool, n.b, 3), 2);
    case NodeKind::neg:
        return wrap("-" + print_rec(pool, n.a, 3), 3);
    case NodeKind::inv:
        return print_rec(pool, n.a, 4) + "^-1";
    }
    return "?";
}

}  // namespace

Parsed parse_expr(ExprPool& pool, std::string_view text) { return Parser(pool, text).parse_top(); }

ExprId parse_scalar_expr(ExprPool& pool, std::string_view text)
{
    Parsed p = parse_expr(pool, text);
    if (auto* e = std::get_if<ExprId>(&p)) return *e;
    throw ParseError(0, "expected a scalar expression, got a block literal");
}

std::string print_expr(const ExprPool& pool, ExprId id) { return print_rec(pool, id, 0); }

std::string print_block(const ExprPool& pool, const BlockExpr& b)
{
    std::string out = "[";
    for (std::size_t i = 0; i < b.rows; ++i) {
        out += i ? ", [" : "[";
        for (std::size_t j = 0; j < b.cols; ++j) out += (j ? ", " : "") + print_expr(pool, b.at(i, j));
        out += "]";
    }
    return out + "]";
}

NCPoly to_ncpoly(const ExprPool& pool, ExprId root)
{
    std::unordered_map<ExprId, NCPoly> memo;
    for (ExprId id : pool.reachable(root)) {
        const ExprNode& n = pool.node(id);
        NCPoly r;
        switch (n.kind) {
        case NodeKind::var:
            if (n.var > 126) throw std::domain_error("too many variables for a word");
            r = NCPoly::generator(n.var);
            break;
        case NodeKind::constant:
            r = NCPoly(n.value);
            break;
        case NodeKind::add:
            r = memo.at(n.a) + memo.at(n.b);
            break;
        case NodeKind::mul:
            r = memo.at(n.a) * memo.at(n.b);
            break;
        case NodeKind::neg:
            r = -memo.at(n.a);
            break;
        case NodeKind::inv: {
            const NCPoly& a = memo.at(n.a);
            if (a.size() != 1) throw std::domain_error("inverse of a non-monomial is not a Laurent polynomial");
            const auto& [w, c] = a.terms().front();
            r = NCPoly(w.inverse(), 1 / c);
            break;
        }
        }
        memo.emplace(id, std::move(r));
    }
    return memo.at(root);
}

ExprId from_ncpoly(ExprPool& pool, const NCPoly& p)
{
    if (p.is_zero()) return pool.zero();
    std::optional<ExprId> acc;
    for (const auto& [w, c] : p.terms()) {
        std::optional<ExprId> mono;
        for (const Letter& l : w.letters()) {
            ExprId v = pool.var(l.generator);
            if (l.exponent < 0) v = pool.inv(v);
            mono = mono ? pool.mul(*mono, v) : v;
        }
        ExprId term;
        if (!mono) term = pool.constant(c);
        else if (c == 1) term = *mono;
        else if (c == -1) term = pool.neg(*mono);
        else term = pool.mul(pool.constant(c), *mono);
        acc = acc ? pool.add(*acc, term) : term;
    }
    return *acc;
}

// ---------------------------------------------------------------------------
// Evaluation

u64 mix_seed(u64 base, u64 a, u64 b, u64 c)
{
    auto step = [](u64 x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    };
    return step(step(step(step(base) ^ a) ^ b) ^ c);
}

namespace {

u64 next_random(u64& state)
{
    state += 0x9E3779B97F4A7C15ULL;
    u64 z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RationalField::Element draw(const RationalField&, u64& state) { return Rational(static_cast<long>(next_random(state) % 19) - 9); }
PrimeField::Element draw(const PrimeField& f, u64& state) { return next_random(state) % f.p; }

}  // namespace

template <class F>
Matrix<F> random_matrix(F field, std::size_t d, std::uint64_t& state)
{
    Matrix<F> m(field, d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = draw(field, state);
    return m;
}

template <class F>
MatrixPoint<F> sample_point(F field, std::size_t nvars, std::size_t d, u64 seed, const std::vector<bool>& group)
{
    if (d == 0) throw std::invalid_argument("sample_point: d must be >= 1");
    MatrixPoint<F> pt{field, d, seed, {}};
    u64 state = seed;
    for (std::size_t v = 0; v < nvars; ++v) {
        bool need_inv = v < group.size() && group[v];
        for (int attempt = 0;; ++attempt) {
            if (attempt == 100) throw RetryBudgetExhausted("sample_point: no invertible draw in 100 attempts");
            Matrix<F> m = random_matrix(field, d, state);
            if (!need_inv || !field.is_zero(determinant(m))) {
                pt.values.push_back(std::move(m));
                break;
            }
        }
    }
    return pt;
}

template <class F>
std::vector<Matrix<F>> eval_many(const ExprPool& pool, const std::vector<ExprId>& roots, const MatrixPoint<F>& point)
{
    const F& f = point.field;
    const std::size_t d = point.d;
    std::vector<ExprId> order;
    {
        std::vector<bool> mark(pool.size(), false);
        for (ExprId r : roots)
            for (ExprId id : pool.reachable(r)) mark[id] = true;
        for (ExprId id = 0; id < pool.size(); ++id)
            if (mark[id]) order.push_back(id);
    }
    std::unordered_map<ExprId, Matrix<F>> memo;
    memo.reserve(order.size());
    for (ExprId id : order) {
        const ExprNode& n = pool.node(id);
        Matrix<F> r;
        switch (n.kind) {
        case NodeKind::var:
            if (static_cast<std::size_t>(n.var) >= point.values.size())
                throw std::invalid_argument("variable " + pool.names().name(n.var) + " has no value");
            r = point.values[static_cast<std::size_t>(n.var)];
            break;
        case NodeKind::constant:
            r = Matrix<F>::identity(f, d).scaled(f.from_rational(n.value));
            break;
        case NodeKind::add:
            r = memo.at(n.a) + memo.at(n.b);
            break;
        case NodeKind::mul:
            r = memo.at(n.a) * memo.at(n.b);
            break;
        case NodeKind::neg:
            r = -memo.at(n.a);
            break;
        case NodeKind::inv:
            try {
                r = inverse(memo.at(n.a));
            } catch (const SingularMatrix&) {
                throw SingularInverse(id);
            }
            break;
        }
        memo.emplace(id, std::move(r));
    }
    std::vector<Matrix<F>> out;
    for (ExprId r : roots) out.push_back(memo.at(r));
    return out;
}

template <class F>
Matrix<F> eval_expr(const ExprPool& pool, ExprId root, const MatrixPoint<F>& point, std::size_t)
{
    return eval_many(pool, std::vector<ExprId>{root}, point).front();
}

template <class F>
Matrix<F> eval_block(const ExprPool& pool, const BlockExpr& b, const MatrixPoint<F>& point)
{
    auto vals = eval_many(pool, b.cells, point);
    const std::size_t d = point.d;
    Matrix<F> out(point.field, b.rows * d, b.cols * d);
    for (std::size_t i = 0; i < b.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) out.set_block(i * d, j * d, vals[i * b.cols + j]);
    return out;
}

template Matrix<RationalField> random_matrix(RationalField, std::size_t, std::uint64_t&);
template Matrix<PrimeField> random_matrix(PrimeField, std::size_t, std::uint64_t&);
template MatrixPoint<RationalField> sample_point(RationalField, std::size_t, std::size_t, u64, const std::vector<bool>&);
template MatrixPoint<PrimeField> sample_point(PrimeField, std::size_t, std::size_t, u64, const std::vector<bool>&);
template std::vector<Matrix<RationalField>> eval_many(const ExprPool&, const std::vector<ExprId>&, const MatrixPoint<RationalField>&);
template std::vector<Matrix<PrimeField>> eval_many(const ExprPool&, const std::vector<ExprId>&, const MatrixPoint<PrimeField>&);
template Matrix<RationalField> eval_expr(const ExprPool&, ExprId, const MatrixPoint<RationalField>&, std::size_t);
template Matrix<PrimeField> eval_expr(const ExprPool&, ExprId, const MatrixPoint<PrimeField>&, std::size_t);
template Matrix<RationalField> eval_block(const ExprPool&, const BlockExpr&, const MatrixPoint<RationalField>&);
template Matrix<PrimeField> eval_block(const ExprPool&, const BlockExpr&, const MatrixPoint<PrimeField>&);

std::string ZeroVerdict::kind_name() const
{
    switch (kind) {
    case Kind::zero_evidence:
        return "zero-evidence";
    case Kind::nonzero:
        return "nonzero";
    case Kind::all_singular:
        return "all-singular";
    }
    return "?";
}

namespace {

// Zero / nonzero at one seed; nullopt when the sample hit a singular inverse.
template <class F>
std::optional<bool> is_zero_at(const ExprPool& pool, ExprId e, F field, std::size_t nvars, std::size_t d, u64 seed,
                               const std::vector<bool>& group)
{
    try {
        auto pt = sample_point(field, nvars, d, seed, group);
        return eval_expr(pool, e, pt).is_zero();
    } catch (const SingularInverse&) {
        return std::nullopt;
    } catch (const RetryBudgetExhausted&) {
        return std::nullopt;
    }
}

std::optional<bool> is_zero_at(const ExprPool& pool, ExprId e, const FieldSpec& fs, std::size_t d, u64 seed,
                               const std::vector<bool>& group)
{
    std::size_t nvars = static_cast<std::size_t>(pool.names().size());
    if (fs.rational) return is_zero_at(pool, e, RationalField{}, nvars, d, seed, group);
    return is_zero_at(pool, e, PrimeField{fs.p}, nvars, d, seed, group);
}

}  // namespace

ZeroVerdict prove_zero(const ExprPool& pool, ExprId e, const Schedule& schedule, const std::vector<bool>& group)
{
    ZeroVerdict v;
    for (std::size_t di = 0; di < schedule.dims.size(); ++di)
        for (std::size_t fi = 0; fi < schedule.fields.size(); ++fi)
            for (std::size_t trial = 0; trial < schedule.trials; ++trial) {
                std::optional<bool> z;
                for (u64 attempt = 0; attempt < 100 && !z; ++attempt) {
                    u64 seed = mix_seed(schedule.seed, schedule.dims[di], fi * 1000003 + trial, attempt);
                    z = is_zero_at(pool, e, schedule.fields[fi], schedule.dims[di], seed, group);
                    if (!z) {
                        ++v.singular;
                        continue;
                    }
                    ++v.evaluations;
                    if (!*z) {
                        v.kind = ZeroVerdict::Kind::nonzero;
                        v.witness_d = schedule.dims[di];
                        v.witness_field = schedule.fields[fi];
                        v.witness_seed = seed;
                        return v;
                    }
                }
            }
    if (v.evaluations == 0) v.kind = ZeroVerdict::Kind::all_singular;
    return v;
}

bool recheck_nonzero(const ExprPool& pool, ExprId e, const ZeroVerdict& v, const std::vector<bool>& group)
{
    if (v.kind != ZeroVerdict::Kind::nonzero) return false;
    auto z = is_zero_at(pool, e, v.witness_field, v.witness_d, v.witness_seed, group);
    return z && !*z;
}

}  // namespace ncid
