#include "ncid/laurent.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

namespace ncid {

std::vector<Word> enumerate_words(int nvars, int L, WordMode mode)
{
    if (L < 0) throw std::invalid_argument("enumerate_words: L must be >= 0");
    std::vector<Letter> letters;
    for (int g = 0; g < nvars; ++g) {
        letters.push_back({g, 1});
        if (mode == WordMode::group) letters.push_back({g, -1});
    }
    std::vector<Word> out{Word()};
    std::size_t layer_begin = 0;
    for (int len = 1; len <= L; ++len) {
        std::size_t layer_end = out.size();
        for (std::size_t i = layer_begin; i < layer_end; ++i) {
            const Word base = out[i];
            for (const Letter& l : letters) {
                if (!base.empty() && base[base.length() - 1] == l.inverse()) continue;
                out.push_back(base * Word::generator(l.generator, l.exponent));
            }
        }
        layer_begin = layer_end;
    }
    return out;
}

std::size_t word_count(int nvars, int L, WordMode mode)
{
    std::size_t total = 1, layer = 1;
    for (int len = 1; len <= L; ++len) {
        if (mode == WordMode::monoid)
            layer *= static_cast<std::size_t>(nvars);
        else
            layer = len == 1 ? 2 * static_cast<std::size_t>(nvars) : layer * (2 * static_cast<std::size_t>(nvars) - 1);
        total += layer;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Magnus order

namespace {

std::vector<std::vector<long long>> magnus_parts(const Word& w, std::size_t n, int depth)
{
    std::vector<std::vector<long long>> parts(static_cast<std::size_t>(depth) + 1);
    std::size_t width = 1;
    for (int c = 0; c <= depth; ++c) {
        parts[static_cast<std::size_t>(c)].assign(width, 0);
        width *= n;
    }
    parts[0][0] = 1;
    auto add_to = [](long long& acc, long long v) {
        if (__builtin_add_overflow(acc, v, &acc)) throw std::overflow_error("Magnus coefficient overflow");
    };
    for (const Letter& l : w.letters()) {
        const std::size_t g = static_cast<std::size_t>(l.generator);
        if (l.exponent > 0) {
            // S * (1 + x): part_c += part_{c-1} x
            for (int c = depth; c >= 1; --c) {
                auto& hi = parts[static_cast<std::size_t>(c)];
                const auto& lo = parts[static_cast<std::size_t>(c) - 1];
                for (std::size_t k = 0; k < lo.size(); ++k)
                    if (lo[k]) add_to(hi[k * n + g], lo[k]);
            }
        } else {
            // T (1 + x) = S: part_c -= new part_{c-1} x
            for (int c = 1; c <= depth; ++c) {
                auto& hi = parts[static_cast<std::size_t>(c)];
                const auto& lo = parts[static_cast<std::size_t>(c) - 1];
                for (std::size_t k = 0; k < lo.size(); ++k)
                    if (lo[k]) add_to(hi[k * n + g], -lo[k]);
            }
        }
    }
    return parts;
}

std::strong_ordering compare_parts(const std::vector<std::vector<long long>>& a,
                                   const std::vector<std::vector<long long>>& b, std::size_t from)
{
    for (std::size_t c = from; c < a.size(); ++c)
        for (std::size_t k = 0; k < a[c].size(); ++k)
            if (a[c][k] != b[c][k]) return a[c][k] <=> b[c][k];
    return std::strong_ordering::equal;
}

}  // namespace

const MagnusOrder::Expansion& MagnusOrder::expansion(const Word& w, int depth)
{
    Expansion& e = cache_[w];
    if (e.depth < depth) {
        e.parts = magnus_parts(w, static_cast<std::size_t>(n_), depth);
        e.depth = depth;
    }
    return e;
}

std::strong_ordering MagnusOrder::compare(const Word& a, const Word& b)
{
    if (a == b) return std::strong_ordering::equal;
    const int cached = n_ <= 2 ? 8 : n_ == 3 ? 5 : 3;
    if (auto c = compare_parts(expansion(a, cached).parts, expansion(b, cached).parts, 1); c != 0) return c;
    // deep ties are rare; expand the pair without caching
    for (int depth = cached + 2;; depth += 2) {
        double width = 1;
        for (int k = 0; k < depth; ++k) width *= n_;
        if (width > 4e6) throw std::runtime_error("Magnus comparison needs too many coefficients");
        auto pa = magnus_parts(a, static_cast<std::size_t>(n_), depth);
        auto pb = magnus_parts(b, static_cast<std::size_t>(n_), depth);
        if (auto c = compare_parts(pa, pb, static_cast<std::size_t>(cached) + 1); c != 0) return c;
    }
}

namespace {

using Remainder = std::map<Word, Rational, MagnusOrder::Less>;

NCPoly::Term leading(const NCPoly& p, MagnusOrder& order)
{
    const NCPoly::Term* best = &p.terms().front();
    for (const auto& t : p.terms())
        if (order.less(best->first, t.first)) best = &t;
    return *best;
}

// a = q*b (right) or a = b*q (left)
std::optional<NCPoly> divide(const NCPoly& a, const NCPoly& b, MagnusOrder& order, const DivisionBudget& budget,
                             bool right)
{
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    if (b.size() == 1) {
        NCPoly inv(b.terms().front().first.inverse(), 1 / b.terms().front().second);
        return right ? a * inv : inv * a;
    }
    const auto [u, bc] = leading(b, order);
    const Word ui = u.inverse();
    Remainder r(MagnusOrder::Less{&order});
    for (const auto& [w, c] : a.terms()) r.emplace(w, c);
    NCPolyBuilder q;
    std::size_t qterms = 0;
    while (!r.empty()) {
        auto top = std::prev(r.end());
        const Word qw = right ? top->first * ui : ui * top->first;
        const Rational qc = top->second / bc;
        q.add(qw, qc);
        if (++qterms > budget.max_quotient_terms) return std::nullopt;
        for (const auto& [v, c] : b.terms()) {
            Word prod = right ? qw * v : v * qw;
            auto [it, fresh] = r.try_emplace(std::move(prod), 0);
            it->second -= qc * c;
            if (it->second == 0) r.erase(it);
        }
        if (r.size() > budget.max_remainder_terms) return std::nullopt;
    }
    return q.finish();
}

}  // namespace

std::optional<NCPoly> divide_right(const NCPoly& a, const NCPoly& b, MagnusOrder& order, const DivisionBudget& budget)
{
    return divide(a, b, order, budget, true);
}

std::optional<NCPoly> divide_left(const NCPoly& a, const NCPoly& b, MagnusOrder& order, const DivisionBudget& budget)
{
    return divide(a, b, order, budget, false);
}

std::optional<NCPoly> laurent_expand(const ExprPool& pool, ExprId root, int nvars, const DivisionBudget& budget)
{
    struct Value {
        NCPoly p;
        bool inverted = false;  // stands for p^-1
    };
    MagnusOrder order(std::max(nvars, 1));
    std::unordered_map<ExprId, Value> memo;
    for (ExprId id : pool.reachable(root)) {
        const ExprNode& n = pool.node(id);
        Value v;
        switch (n.kind) {
        case NodeKind::var:
            if (n.var >= nvars) return std::nullopt;
            v.p = NCPoly::generator(n.var);
            break;
        case NodeKind::constant:
            v.p = NCPoly(n.value);
            break;
        case NodeKind::add: {
            const Value &a = memo.at(n.a), &b = memo.at(n.b);
            if (a.inverted || b.inverted) return std::nullopt;
            v.p = a.p + b.p;
            break;
        }
        case NodeKind::neg: {
            const Value& a = memo.at(n.a);
            if (a.inverted) return std::nullopt;
            v.p = -a.p;
            break;
        }
        case NodeKind::inv: {
            const Value& a = memo.at(n.a);
            if (a.p.is_zero()) return std::nullopt;
            if (a.inverted) {
                v.p = a.p;
            } else if (a.p.size() == 1) {
                const auto& [w, c] = a.p.terms().front();
                v.p = NCPoly(w.inverse(), 1 / c);
            } else {
                v.p = a.p;
                v.inverted = true;
            }
            break;
        }
        case NodeKind::mul: {
            const Value &a = memo.at(n.a), &b = memo.at(n.b);
            if (a.p.size() * b.p.size() > budget.max_product_terms) return std::nullopt;
            if (a.inverted && b.inverted) {
                v.p = b.p * a.p;
                v.inverted = true;
            } else if (b.inverted) {
                auto q = divide_right(a.p, b.p, order, budget);
                if (!q) return std::nullopt;
                v.p = std::move(*q);
            } else if (a.inverted) {
                auto q = divide_left(b.p, a.p, order, budget);
                if (!q) return std::nullopt;
                v.p = std::move(*q);
            } else {
                v.p = a.p * b.p;
            }
            break;
        }
        }
        memo.emplace(id, std::move(v));
    }
    const Value& out = memo.at(root);
    if (out.inverted) return std::nullopt;
    return out.p;
}

int syntactic_degree(const ExprPool& pool, ExprId root)
{
    std::unordered_map<ExprId, int> deg;
    for (ExprId id : pool.reachable(root)) {
        const ExprNode& n = pool.node(id);
        int d = 0;
        switch (n.kind) {
        case NodeKind::var:
            d = 1;
            break;
        case NodeKind::constant:
            d = 0;
            break;
        case NodeKind::add:
            d = std::max(deg.at(n.a), deg.at(n.b));
            break;
        case NodeKind::mul:
            d = deg.at(n.a) + deg.at(n.b);
            break;
        default:
            d = deg.at(n.a);
        }
        deg[id] = d;
    }
    return deg.at(root);
}

std::vector<u64> default_primes()
{
    if (const char* env = std::getenv("NCID_PRIMES"); env && *env) {
        std::vector<u64> out;
        std::stringstream ss(env);
        std::string item;
        while (std::getline(ss, item, ',')) {
            u64 p = std::stoull(item);
            if (!is_prime_u64(p) || p >= (u64{1} << 32)) throw std::invalid_argument("NCID_PRIMES: " + item + " is not a prime below 2^32");
            out.push_back(p);
        }
        if (out.size() >= 2) return out;
        throw std::invalid_argument("NCID_PRIMES needs at least two primes");
    }
    return primes_below(u64{1} << 31, 3);
}

std::string LaurentCandidate::status_name() const
{
    switch (status) {
    case Status::recovered:
        return "recovered";
    case Status::infeasible:
        return "infeasible";
    case Status::rank_deficient:
        return "rank-deficient";
    case Status::singular:
        return "singular";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Recovery

namespace {

std::vector<bool> all_group(const Alphabet& a) { return std::vector<bool>(static_cast<std::size_t>(a.size()), true); }

template <class F>
Matrix<F> word_value(const Word& w, const MatrixPoint<F>& pt, std::unordered_map<Word, Matrix<F>, WordHash>& memo,
                     const std::vector<Matrix<F>>& inverses)
{
    if (auto it = memo.find(w); it != memo.end()) return it->second;
    Matrix<F> r;
    if (w.empty()) {
        r = Matrix<F>::identity(pt.field, pt.d);
    } else {
        Letter last = w[w.length() - 1];
        const auto g = static_cast<std::size_t>(last.generator);
        r = word_value(w.prefix(w.length() - 1), pt, memo, inverses) * (last.exponent > 0 ? pt.values[g] : inverses[g]);
    }
    memo.emplace(w, r);
    return r;
}

template <class F>
std::vector<Matrix<F>> basis_values(const std::vector<Word>& basis, const MatrixPoint<F>& pt)
{
    std::vector<Matrix<F>> inverses;
    for (const auto& m : pt.values) inverses.push_back(inverse(m));
    std::unordered_map<Word, Matrix<F>, WordHash> memo;
    std::vector<Matrix<F>> out;
    out.reserve(basis.size());
    for (const Word& w : basis) out.push_back(word_value(w, pt, memo, inverses));
    return out;
}

template <class F>
Matrix<F> poly_value(const NCPoly& p, const MatrixPoint<F>& pt)
{
    std::vector<Word> words;
    for (const auto& [w, c] : p.terms()) words.push_back(w);
    auto vals = basis_values(words, pt);
    Matrix<F> acc(pt.field, pt.d, pt.d);
    for (std::size_t k = 0; k < vals.size(); ++k) acc = acc + vals[k].scaled(pt.field.from_rational(p.terms()[k].second));
    return acc;
}

// Target value at a fresh point; resamples on singular inverses.
template <class F>
std::optional<std::pair<MatrixPoint<F>, Matrix<F>>> target_sample(const ExprPool& pool, ExprId target, F field,
                                                                  const Alphabet& alphabet, std::size_t d, u64 seed)
{
    for (u64 attempt = 0; attempt < 100; ++attempt) {
        u64 s = mix_seed(seed, attempt, d, 0x4c41);
        try {
            auto pt = sample_point(field, static_cast<std::size_t>(alphabet.size()), d, s, all_group(alphabet));
            auto val = eval_expr(pool, target, pt);
            return std::make_pair(std::move(pt), std::move(val));
        } catch (const SingularInverse&) {
        } catch (const RetryBudgetExhausted&) {
        }
    }
    return std::nullopt;
}

enum class SystemOutcome { unique, inconsistent, underdetermined, singular };

struct SystemResult {
    SystemOutcome outcome = SystemOutcome::singular;
    std::vector<u64> x;
};

SystemResult solve_system(const ExprPool& pool, ExprId target, const Alphabet& alphabet, const std::vector<Word>& basis,
                          std::size_t d, u64 p, u64 seed)
{
    const std::size_t n = basis.size(), per = d * d;
    const std::size_t samples = (n + per - 1) / per + 1;
    PrimeField f{p};
    PMatrix m(f, samples * per, n);
    std::vector<u64> rhs(samples * per);
    for (std::size_t s = 0; s < samples; ++s) {
        auto got = target_sample(pool, target, f, alphabet, d, mix_seed(seed, s, d, p));
        if (!got) return {};
        auto vals = basis_values(basis, got->first);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const std::size_t row = s * per + i * d + j;
                for (std::size_t k = 0; k < n; ++k) m(row, k) = vals[k](i, j);
                rhs[row] = got->second(i, j);
            }
    }
    auto res = solve_linear(m, rhs);
    switch (res.status) {
    case SolveStatus::unique:
        return {SystemOutcome::unique, std::move(res.x)};
    case SolveStatus::inconsistent:
        return {SystemOutcome::inconsistent, {}};
    default:
        return {SystemOutcome::underdetermined, {}};
    }
}

std::size_t trusted_dimension(int L) { return static_cast<std::size_t>(std::max(1, (L + 3) / 2)); }

}  // namespace

void verify_candidate(const ExprPool& pool, ExprId target, LaurentCandidate& c, const RecoverOptions& opts)
{
    auto primes = opts.primes.empty() ? default_primes() : opts.primes;
    const u64 p = primes.back();
    const std::size_t d0 = std::max<std::size_t>(2, trusted_dimension(c.L));
    c.samples.clear();
    bool all_zero = true;
    for (std::size_t k = 0; k < std::max<std::size_t>(opts.fresh_samples, 3); ++k) {
        const std::size_t d = d0 + k % 2;
        const u64 seed = mix_seed(opts.seed ^ 0x5eedf00dULL, k, d, 0x76);
        auto got = target_sample(pool, target, PrimeField{p}, c.alphabet, d, seed);
        if (!got) {
            all_zero = false;
            c.note = "verification sample stayed singular";
            continue;
        }
        bool zero = poly_value(c.poly, got->first) == got->second;
        c.samples.push_back({d, p, got->first.seed, zero});
        all_zero = all_zero && zero;
    }
    std::vector<std::size_t> dims;
    for (const auto& s : c.samples) dims.push_back(s.d);
    std::sort(dims.begin(), dims.end());
    dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
    c.verified = all_zero && c.samples.size() >= 3 && dims.size() >= 2;

    c.rational_ok = false;
    if (opts.rational_check && c.verified) {
        auto got = target_sample(pool, target, RationalField{}, c.alphabet, 2, mix_seed(opts.seed, 0x51, 2, 0));
        c.rational_ok = got && poly_value(c.poly, got->first) == got->second;
        c.verified = c.rational_ok;
    }
}

LaurentCandidate recover_from_basis(const ExprPool& pool, ExprId target, const Alphabet& alphabet, std::vector<Word> basis,
                                    int L, const RecoverOptions& opts)
{
    LaurentCandidate c;
    c.alphabet = alphabet;
    c.L = L;
    c.basis_source = "explicit";
    c.unknowns = basis.size();
    auto primes = opts.primes.empty() ? default_primes() : opts.primes;
    if (primes.size() < 2) throw std::invalid_argument("recover_laurent needs two primes");

    const std::size_t d_trust = trusted_dimension(L);
    const std::size_t d_start = basis.size() <= 200 ? 1 : d_trust;
    std::optional<std::size_t> accepted;
    SystemResult first;
    for (std::size_t d = d_start; d <= d_trust + 2; ++d) {
        SystemResult r = solve_system(pool, target, alphabet, basis, d, primes[0], opts.seed);
        if (r.outcome == SystemOutcome::singular) {
            c.status = LaurentCandidate::Status::singular;
            c.note = "persistent singular evaluation at d=" + std::to_string(d);
            return c;
        }
        if (r.outcome == SystemOutcome::inconsistent) {
            c.status = LaurentCandidate::Status::infeasible;
            c.note = "inconsistent at d=" + std::to_string(d);
            return c;
        }
        if (r.outcome == SystemOutcome::unique) {
            if (!c.min_full_rank_d) c.min_full_rank_d = d;
            if (d >= d_trust) {
                accepted = d;
                first = std::move(r);
                break;
            }
        }
    }
    if (!accepted) {
        c.status = LaurentCandidate::Status::rank_deficient;
        c.note = "no full column rank up to d=" + std::to_string(d_trust + 2);
        return c;
    }
    c.solve_d = *accepted;
    SystemResult second = solve_system(pool, target, alphabet, basis, *accepted, primes[1], opts.seed + 1);
    if (second.outcome != SystemOutcome::unique) {
        c.status = LaurentCandidate::Status::rank_deficient;
        c.note = "second prime disagrees on rank";
        return c;
    }
    NCPolyBuilder b;
    const Integer m0(std::to_string(primes[0]));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        Integer r(std::to_string(first.x[k])), m = m0;
        crt_combine(r, m, second.x[k], primes[1]);
        auto q = rational_reconstruct(r, m);
        if (!q) {
            c.status = LaurentCandidate::Status::infeasible;
            c.note = "rational reconstruction failed";
            return c;
        }
        if (*q != 0) b.add(basis[k], *q);
    }
    c.poly = b.finish();
    c.solved = true;
    c.status = LaurentCandidate::Status::recovered;
    verify_candidate(pool, target, c, opts);
    return c;
}

LaurentCandidate recover_laurent(const ExprPool& pool, ExprId target, const Alphabet& alphabet, int L,
                                 const RecoverOptions& opts)
{
    auto c = recover_from_basis(pool, target, alphabet, enumerate_words(alphabet.size(), L, opts.mode), L, opts);
    c.basis_source = "enumerated";
    return c;
}

LaurentCandidate recover_escalating(const ExprPool& pool, ExprId target, const Alphabet& alphabet,
                                    const RecoverOptions& opts, int cap)
{
    LaurentCandidate last;
    for (int L = 0;; L = std::min(L + 2, cap)) {
        if (word_count(alphabet.size(), L, opts.mode) > opts.max_unknowns) {
            last.status = LaurentCandidate::Status::infeasible;
            last.note = "basis at L=" + std::to_string(L) + " exceeds the unknown budget";
            last.L = L;
            return last;
        }
        last = recover_laurent(pool, target, alphabet, L, opts);
        if (last.status != LaurentCandidate::Status::infeasible || L >= cap) return last;
    }
}

LaurentCandidate recover_iterate(const ExprPool& pool, ExprId target, const Alphabet& alphabet,
                                 const RecoverOptions& opts, const DivisionBudget& budget)
{
    auto expanded = laurent_expand(pool, target, alphabet.size(), budget);
    if (!expanded) return recover_escalating(pool, target, alphabet, opts);
    const int L = static_cast<int>(expanded->degree());
    if (word_count(alphabet.size(), L, opts.mode) <= opts.max_unknowns) return recover_laurent(pool, target, alphabet, L, opts);
    if (expanded->size() <= opts.max_unknowns) {
        std::vector<Word> basis;
        for (const auto& [w, c] : expanded->terms()) basis.push_back(w);
        auto c = recover_from_basis(pool, target, alphabet, std::move(basis), L, opts);
        c.basis_source = "expanded";
        return c;
    }
    LaurentCandidate c;
    c.alphabet = alphabet;
    c.L = L;
    c.basis_source = "verify-only";
    c.unknowns = expanded->size();
    c.poly = std::move(*expanded);
    c.status = LaurentCandidate::Status::recovered;
    verify_candidate(pool, target, c, opts);
    return c;
}

CoefficientCheck coefficient_set_check(const LaurentCandidate& c, const std::vector<Rational>& allowed)
{
    CoefficientCheck out;
    for (const auto& t : c.poly.terms())
        if (std::find(allowed.begin(), allowed.end(), t.second) == allowed.end()) out.offenders.push_back(t);
    out.ok = out.offenders.empty();
    return out;
}

CoefficientCheck integer_coefficient_check(const LaurentCandidate& c)
{
    CoefficientCheck out;
    for (const auto& t : c.poly.terms())
        if (!is_integer(t.second)) out.offenders.push_back(t);
    out.ok = out.offenders.empty();
    return out;
}

}  // namespace ncid
