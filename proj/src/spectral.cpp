#include "ncid/spectral.hpp"

#include <algorithm>
#include <map>

namespace ncid {

std::vector<Rational> power_traces(const NCPoly& a, std::size_t K)
{
    if (K == 0) throw std::invalid_argument("power_traces: K must be >= 1");
    std::vector<NCPoly> pw{NCPoly(Rational(1)), a};
    const std::size_t half = (K + 1) / 2;
    while (pw.size() <= half) pw.push_back(pw.back() * a);
    std::vector<Rational> out(K);
    for (std::size_t k = 1; k <= K; ++k) out[k - 1] = trace_of_product(pw[(k + 1) / 2], pw[k / 2]);
    return out;
}

namespace {

using Mat = std::vector<Rational>;  // q x q, row-major

struct WalkSystem {
    std::size_t q = 1;            // automaton states; 0 is the word boundary
    std::size_t step = 1;         // letter steps per support word
    Mat idle;                     // steps that stay on the vertex
    std::map<char, Mat> moves;    // steps along a signed letter (Word code)
};

void add_at(Mat& m, std::size_t q, std::size_t i, std::size_t j, const Rational& c) { m[i * q + j] += c; }

WalkSystem linearize(const NCPoly& a)
{
    WalkSystem w;
    w.step = std::max<std::size_t>(1, a.degree());
    w.q = 1 + a.size() * (w.step - 1);
    w.idle.assign(w.q * w.q, Rational(0));
    std::size_t next_aux = 1;
    for (const auto& [g, c] : a.terms()) {
        std::string_view code = g.code();
        std::size_t from = 0;
        for (std::size_t s = 0; s < w.step; ++s) {
            std::size_t to = s + 1 == w.step ? 0 : next_aux++;
            Rational weight = s == 0 ? c : Rational(1);
            if (s < code.size()) {
                auto [it, fresh] = w.moves.try_emplace(code[s]);
                if (fresh) it->second.assign(w.q * w.q, Rational(0));
                add_at(it->second, w.q, from, to, weight);
            } else {
                add_at(w.idle, w.q, from, to, weight);
            }
            from = to;
        }
    }
    return w;
}

// acc += A * B
void mul_add(Mat& acc, const Mat& A, const Mat& B, std::size_t q)
{
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t k = 0; k < q; ++k) {
            const Rational& x = A[i * q + k];
            if (x == 0) continue;
            for (std::size_t j = 0; j < q; ++j)
                if (B[k * q + j] != 0) acc[i * q + j] += x * B[k * q + j];
        }
}

bool is_zero(const Mat& m)
{
    return std::all_of(m.begin(), m.end(), [](const Rational& x) { return x == 0; });
}

}  // namespace

std::vector<Rational> walk_traces(const NCPoly& a, std::size_t K)
{
    if (K == 0) throw std::invalid_argument("walk_traces: K must be >= 1");
    if (a.is_zero()) return std::vector<Rational>(K, Rational(0));
    WalkSystem w = linearize(a);
    const std::size_t q = w.q, n_max = w.step * K;
    const Mat zero(q * q, Rational(0));

    std::vector<char> letters;
    for (const auto& [y, m] : w.moves) letters.push_back(y);
    auto index_of = [&](char y) -> int {
        auto it = std::find(letters.begin(), letters.end(), y);
        return it == letters.end() ? -1 : static_cast<int>(it - letters.begin());
    };
    std::vector<int> inv(letters.size());
    for (std::size_t i = 0; i < letters.size(); ++i) inv[i] = index_of(static_cast<char>(-letters[i]));

    // phi[y][n]: first passage from a vertex to its y-neighbour in exactly n steps.
    // back[y][n] = A_y * phi[y^-1][n-1]: an excursion into the y-branch and back.
    std::vector<std::vector<Mat>> phi(letters.size(), std::vector<Mat>(n_max + 1, zero));
    std::vector<std::vector<Mat>> back(letters.size(), std::vector<Mat>(n_max + 1, zero));
    std::vector<Mat> G(n_max + 1, zero);
    for (std::size_t i = 0; i < q; ++i) G[0][i * q + i] = 1;

    for (std::size_t n = 1; n <= n_max; ++n) {
        for (std::size_t y = 0; y < letters.size(); ++y) {
            if (inv[y] < 0 || n < 2) continue;
            mul_add(back[y][n], w.moves.at(letters[y]), phi[static_cast<std::size_t>(inv[y])][n - 1], q);
        }
        for (std::size_t y = 0; y < letters.size(); ++y) {
            Mat acc = n == 1 ? w.moves.at(letters[y]) : zero;
            mul_add(acc, w.idle, phi[y][n - 1], q);
            for (std::size_t y2 = 0; y2 < letters.size(); ++y2) {
                if (y2 == y) continue;
                for (std::size_t i = 2; i < n; ++i)
                    if (!is_zero(back[y2][i])) mul_add(acc, back[y2][i], phi[y][n - i], q);
            }
            phi[y][n] = std::move(acc);
        }
        Mat g = zero;
        mul_add(g, w.idle, G[n - 1], q);
        for (std::size_t y = 0; y < letters.size(); ++y)
            for (std::size_t i = 2; i <= n; ++i)
                if (!is_zero(back[y][i])) mul_add(g, back[y][i], G[n - i], q);
        G[n] = std::move(g);
    }

    std::vector<Rational> out(K);
    for (std::size_t k = 1; k <= K; ++k) out[k - 1] = G[w.step * k][0];
    return out;
}

}  // namespace ncid

namespace ncid {

ScalarSeries f_series(const NCPoly& a, std::size_t N, TraceMethod method)
{
    ScalarSeries f(N);
    if (N == 0) return f;
    auto tr = method == TraceMethod::powers ? power_traces(a, N) : walk_traces(a, N);
    for (std::size_t k = 1; k <= N; ++k) f[k] = tr[k - 1];
    return f;
}

ScalarSeries char_series_from_traces(const std::vector<Rational>& traces, std::size_t N)
{
    if (traces.size() < N) throw std::invalid_argument("char_series: not enough traces");
    ScalarSeries s(N);
    for (std::size_t k = 1; k <= N; ++k) s[k] = -traces[k - 1] / static_cast<unsigned long>(k);
    return series_exp(s);
}

ScalarSeries char_series(const NCPoly& a, std::size_t N, TraceMethod method)
{
    if (N == 0) throw std::invalid_argument("char_series: N must be >= 1");
    auto tr = method == TraceMethod::powers ? power_traces(a, N) : walk_traces(a, N);
    return char_series_from_traces(tr, N);
}

namespace {

class NecklaceSearch {
public:
    NecklaceSearch(const NCPoly& a, std::size_t N, std::size_t budget) : N_(N), budget_(budget)
    {
        for (const auto& [w, c] : a.terms()) {
            words_.push_back(w);
            coeffs_.push_back(c.get_num());
            max_len_ = std::max(max_len_, w.length());
        }
    }

    ScalarSeries run(NecklaceStats* stats)
    {
        ScalarSeries result = ScalarSeries::constant(1, N_);
        if (words_.empty()) return result;
        for (std::size_t k = 1; k <= N_; ++k) {
            k_ = k;
            seq_.assign(k + 1, 0);
            prod_.assign(k + 1, Word());
            coef_.assign(k + 1, Integer(1));
            factors_.clear();
            // FKM: seq_[1..k] with seq_[0] unused
            for (std::size_t j = 0; j < words_.size(); ++j) {
                seq_[1] = j;
                if (extend(1)) visit(2, 1);
            }
            for (const Integer& c : factors_) {
                // multiply by (1 - c t^k)
                for (std::size_t e = N_; e >= k; --e) result[e] -= Rational(c) * result[e - k];
                ++stats_.factors;
            }
        }
        if (stats) *stats = stats_;
        return result;
    }

private:
    bool extend(std::size_t pos)
    {
        if (++stats_.nodes > budget_) throw BudgetExceeded("necklace enumeration exceeded its node budget");
        prod_[pos] = prod_[pos - 1] * words_[seq_[pos]];
        coef_[pos] = coef_[pos - 1] * coeffs_[seq_[pos]];
        return prod_[pos].length() <= (k_ - pos) * max_len_;
    }

    void visit(std::size_t t, std::size_t p)
    {
        if (t > k_) {
            if (p == k_ && prod_[k_].empty()) factors_.push_back(coef_[k_]);
            return;
        }
        seq_[t] = seq_[t - p];
        if (extend(t)) visit(t + 1, p);
        for (std::size_t j = seq_[t - p] + 1; j < words_.size(); ++j) {
            seq_[t] = j;
            if (extend(t)) visit(t + 1, t);
        }
    }

    std::size_t N_, budget_, k_ = 0, max_len_ = 0;
    std::vector<Word> words_;
    std::vector<Integer> coeffs_;
    std::vector<std::size_t> seq_;
    std::vector<Word> prod_;
    std::vector<Integer> coef_;
    std::vector<Integer> factors_;
    NecklaceStats stats_;
};

}  // namespace

ScalarSeries necklace_product(const NCPoly& a, std::size_t N, std::size_t node_budget, NecklaceStats* stats)
{
    if (!a.has_integer_coefficients()) throw PreconditionError("necklace_product requires integer coefficients");
    if (N == 0) throw std::invalid_argument("necklace_product: N must be >= 1");
    return NecklaceSearch(a, N, node_budget).run(stats);
}

ScalarSeries closed_form_plus_inverses(int n, std::size_t N)
{
    if (n < 1) throw std::invalid_argument("closed_form_plus_inverses: n must be >= 1");
    const long m = 2L * n - 1;
    ScalarSeries rad = ScalarSeries::constant(1, N) - ScalarSeries::monomial(Rational(4 * m), 2, N);
    ScalarSeries f = series_power(rad, Rational(1, 2));
    ScalarSeries one = ScalarSeries::constant(1, N);
    ScalarSeries num = series_power(Rational(1, 2) * (f + one), Rational(n));
    ScalarSeries den = Rational(1, m) * (Rational(n) * f + ScalarSeries::constant(Rational(n - 1), N));
    return num * series_power(den, Rational(1 - n));
}

NCPoly plus_inverses(int n)
{
    NCPolyBuilder b;
    for (int i = 0; i < n; ++i) {
        b.add(Word::generator(i, 1), 1);
        b.add(Word::generator(i, -1), 1);
    }
    return b.finish();
}

NCPoly sum_plus_product_inverse(int n)
{
    NCPolyBuilder b;
    Word prod;
    for (int i = 0; i < n; ++i) {
        b.add(Word::generator(i, 1), 1);
        prod *= Word::generator(i, 1);
    }
    b.add(prod.inverse(), 1);
    return b.finish();
}

}  // namespace ncid
