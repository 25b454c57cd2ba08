#include "ncid/word.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace ncid {

Alphabet Alphabet::indexed(int n, std::string_view stem)
{
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back(std::string(stem) + std::to_string(i));
    return Alphabet(std::move(names));
}

std::string Alphabet::name(int g) const
{
    if (g >= 0 && g < size()) return names_[static_cast<std::size_t>(g)];
    return "X" + std::to_string(g + 1);
}

int Alphabet::intern(std::string_view name)
{
    if (int i = find(name); i >= 0) return i;
    names_.emplace_back(name);
    return size() - 1;
}

int Alphabet::find(std::string_view name) const
{
    auto it = std::find(names_.begin(), names_.end(), name);
    return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

Letter Word::decode(char c)
{
    int v = static_cast<signed char>(c);
    return v > 0 ? Letter{v - 1, 1} : Letter{-v - 1, -1};
}

Word Word::generator(int g, int exponent)
{
    if (g < 0 || g > 126) throw std::out_of_range("generator index out of range");
    if (exponent != 1 && exponent != -1) throw std::invalid_argument("exponent must be +1 or -1");
    return Word(std::string(1, encode({g, exponent})));
}

Word Word::reduce(std::span<const Letter> raw)
{
    std::string out;
    out.reserve(raw.size());
    for (const Letter& l : raw) {
        if (l.exponent != 1 && l.exponent != -1) throw std::invalid_argument("exponent must be +1 or -1");
        if (l.generator < 0 || l.generator > 126) throw std::out_of_range("generator index out of range");
        char c = encode(l);
        if (!out.empty() && out.back() == static_cast<char>(-c))
            out.pop_back();
        else
            out.push_back(c);
    }
    return Word(std::move(out));
}

Letter Word::operator[](std::size_t i) const { return decode(code_[i]); }

std::vector<Letter> Word::letters() const
{
    std::vector<Letter> out;
    out.reserve(code_.size());
    for (char c : code_) out.push_back(decode(c));
    return out;
}

Word Word::inverse() const
{
    std::string out(code_.rbegin(), code_.rend());
    for (char& c : out) c = static_cast<char>(-c);
    return Word(std::move(out));
}

bool Word::is_positive() const
{
    return std::all_of(code_.begin(), code_.end(), [](char c) { return static_cast<signed char>(c) > 0; });
}

int Word::generator_bound() const
{
    int b = 0;
    for (char c : code_) b = std::max(b, std::abs(static_cast<int>(static_cast<signed char>(c))));
    return b;
}

Word Word::prefix(std::size_t n) const { return Word(code_.substr(0, n)); }

Word Word::suffix_from(std::size_t pos) const { return Word(code_.substr(pos)); }

Word operator*(const Word& a, const Word& b)
{
    std::size_t k = 0;
    const std::size_t na = a.code_.size(), nb = b.code_.size();
    while (k < na && k < nb && a.code_[na - 1 - k] == static_cast<char>(-b.code_[k])) ++k;
    std::string out;
    out.reserve(na + nb - 2 * k);
    out.append(a.code_, 0, na - k);
    out.append(b.code_, k, std::string::npos);
    return Word(std::move(out));
}

namespace {
// X1 < X1^-1 < X2 < X2^-1 < ...
int letter_rank(char c)
{
    int v = static_cast<signed char>(c);
    return v > 0 ? 2 * (v - 1) : 2 * (-v - 1) + 1;
}
}  // namespace

std::strong_ordering operator<=>(const Word& a, const Word& b)
{
    if (auto c = a.code_.size() <=> b.code_.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.code_.size(); ++i) {
        if (a.code_[i] == b.code_[i]) continue;
        return letter_rank(a.code_[i]) <=> letter_rank(b.code_[i]);
    }
    return std::strong_ordering::equal;
}

std::string Word::to_string(const Alphabet& alphabet) const
{
    if (code_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < code_.size(); ++i) {
        if (i) out += '*';
        Letter l = decode(code_[i]);
        out += alphabet.name(l.generator);
        if (l.exponent < 0) out += "^-1";
    }
    return out;
}

}  // namespace ncid
