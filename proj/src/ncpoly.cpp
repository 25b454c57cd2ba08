#include "ncid/ncpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace ncid {

NCPoly::NCPoly(const Rational& c)
{
    if (c != 0) terms_.emplace_back(Word(), c);
}

NCPoly::NCPoly(const Word& w, const Rational& c)
{
    if (c != 0) terms_.emplace_back(w, c);
}

NCPoly NCPoly::from_terms(std::vector<Term> terms)
{
    NCPolyBuilder b;
    b.reserve(terms.size());
    for (auto& [w, c] : terms) b.add(std::move(w), c);
    return b.finish();
}

std::size_t NCPoly::degree() const
{
    std::size_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.first.length());
    return d;
}

Rational NCPoly::coefficient(const Word& w) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), w,
                               [](const Term& t, const Word& key) { return t.first < key; });
    if (it != terms_.end() && it->first == w) return it->second;
    return 0;
}

bool NCPoly::has_integer_coefficients() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return is_integer(t.second); });
}

int NCPoly::generator_bound() const
{
    int b = 0;
    for (const auto& t : terms_) b = std::max(b, t.first.generator_bound());
    return b;
}

NCPoly NCPoly::operator-() const
{
    NCPoly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
}

namespace {
template <class Op>
std::vector<NCPoly::Term> merge(const std::vector<NCPoly::Term>& a, const std::vector<NCPoly::Term>& b, Op op)
{
    std::vector<NCPoly::Term> out;
    out.reserve(a.size() + b.size());
    auto i = a.begin(), j = b.begin();
    while (i != a.end() || j != b.end()) {
        if (j == b.end() || (i != a.end() && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == a.end() || j->first < i->first) {
            out.emplace_back(j->first, op(Rational(0), j->second));
            ++j;
        } else {
            Rational c = op(i->second, j->second);
            if (c != 0) out.emplace_back(i->first, std::move(c));
            ++i;
            ++j;
        }
    }
    return out;
}
}  // namespace

NCPoly operator+(const NCPoly& a, const NCPoly& b)
{
    return NCPoly::adopt(merge(a.terms_, b.terms_, [](const Rational& x, const Rational& y) { return Rational(x + y); }));
}

NCPoly operator-(const NCPoly& a, const NCPoly& b)
{
    return NCPoly::adopt(merge(a.terms_, b.terms_, [](const Rational& x, const Rational& y) { return Rational(x - y); }));
}

NCPoly operator*(const NCPoly& a, const NCPoly& b)
{
    if (a.is_zero() || b.is_zero()) return {};
    NCPolyBuilder acc;
    acc.reserve(a.size() * b.size());
    for (const auto& [u, cu] : a.terms_)
        for (const auto& [v, cv] : b.terms_) acc.add(u * v, cu * cv);
    return acc.finish();
}

NCPoly operator*(const Rational& c, const NCPoly& a)
{
    if (c == 0) return {};
    NCPoly r = a;
    for (auto& t : r.terms_) t.second *= c;
    return r;
}

NCPoly NCPoly::truncated(std::size_t n) const
{
    NCPoly r;
    for (const auto& t : terms_)
        if (t.first.length() <= n) r.terms_.push_back(t);
    return r;
}

NCPoly NCPoly::homogeneous_part(std::size_t d) const
{
    NCPoly r;
    for (const auto& t : terms_)
        if (t.first.length() == d) r.terms_.push_back(t);
    return r;
}

NCPoly NCPoly::antipode() const
{
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [w, c] : terms_) out.emplace_back(w.inverse(), c);
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    NCPoly r;
    r.terms_ = std::move(out);
    return r;
}

std::string NCPoly::to_string(const Alphabet& alphabet) const
{
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        Rational mag = abs(c);
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        first = false;
        if (w.empty()) {
            out += ncid::to_string(mag);
        } else {
            if (mag != 1) out += ncid::to_string(mag) + "*";
            out += w.to_string(alphabet);
        }
    }
    return out;
}

void NCPolyBuilder::add(const Word& w, const Rational& c)
{
    if (c == 0) return;
    auto [it, inserted] = acc_.try_emplace(w, c);
    if (!inserted) it->second += c;
}

void NCPolyBuilder::add(Word&& w, const Rational& c)
{
    if (c == 0) return;
    auto [it, inserted] = acc_.try_emplace(std::move(w), c);
    if (!inserted) it->second += c;
}

void NCPolyBuilder::add(const NCPoly& p, const Rational& scale)
{
    for (const auto& [w, c] : p.terms()) add(w, c * scale);
}

NCPoly NCPolyBuilder::finish()
{
    std::vector<NCPoly::Term> out;
    out.reserve(acc_.size());
    for (auto& [w, c] : acc_)
        if (c != 0) out.emplace_back(w, std::move(c));
    acc_.clear();
    std::sort(out.begin(), out.end(), [](const NCPoly::Term& x, const NCPoly::Term& y) { return x.first < y.first; });
    return NCPoly::adopt(std::move(out));
}

NCPoly commutator(const NCPoly& a, const NCPoly& b) { return a * b - b * a; }

NCPoly power(const NCPoly& a, unsigned k)
{
    NCPoly r(Rational(1));
    for (unsigned i = 0; i < k; ++i) r = r * a;
    return r;
}

Rational trace_of_product(const NCPoly& a, const NCPoly& b)
{
    Rational s = 0;
    const NCPoly& small = a.size() <= b.size() ? a : b;
    const NCPoly& large = a.size() <= b.size() ? b : a;
    for (const auto& [u, c] : small.terms()) {
        Rational d = large.coefficient(u.inverse());
        if (d != 0) s += c * d;
    }
    return s;
}

CommPoly abelianize(const NCPoly& a, int ngens)
{
    CommPoly out;
    for (const auto& [w, c] : a.terms()) {
        std::vector<int> e(static_cast<std::size_t>(ngens), 0);
        for (std::size_t i = 0; i < w.length(); ++i) {
            Letter l = w[i];
            if (l.generator >= ngens) throw std::out_of_range("abelianize: generator beyond ngens");
            e[static_cast<std::size_t>(l.generator)] += l.exponent;
        }
        auto& slot = out[e];
        slot += c;
        if (slot == 0) out.erase(e);
    }
    return out;
}

}  // namespace ncid
