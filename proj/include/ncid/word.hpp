#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ncid {

/// One signed letter: a 0-based generator index raised to +1 or -1.
struct Letter {
    int generator = 0;
    int exponent = 1;

    friend bool operator==(const Letter&, const Letter&) = default;
    Letter inverse() const { return {generator, -exponent}; }
};

/// Generator names used by the text front-end. Unknown indices print as X<i+1>.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {}

    static Alphabet xy() { return Alphabet({"X", "Y"}); }
    /// X1, X2, ..., Xn.
    static Alphabet indexed(int n, std::string_view stem = "X");

    int size() const { return static_cast<int>(names_.size()); }
    std::string name(int g) const;
    /// Index of `name`, appending it when absent.
    int intern(std::string_view name);
    /// Index of `name` or -1.
    int find(std::string_view name) const;
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
};

/// A reduced word in a free group (or free monoid when every exponent is +1).
///
/// Letters are packed one per byte as +(g+1) / -(g+1); the packed string is the
/// hash key, so at most 127 generators are supported.
class Word {
public:
    Word() = default;

    static Word generator(int g, int exponent = 1);
    /// Free reduction of an arbitrary letter sequence.
    static Word reduce(std::span<const Letter> raw);

    std::size_t length() const { return code_.size(); }
    bool empty() const { return code_.empty(); }
    Letter operator[](std::size_t i) const;
    std::vector<Letter> letters() const;

    Word inverse() const;
    /// Monoid word: all exponents +1.
    bool is_positive() const;
    /// Largest generator index + 1 (0 for the empty word).
    int generator_bound() const;

    Word prefix(std::size_t n) const;
    Word suffix_from(std::size_t pos) const;

    friend Word operator*(const Word& a, const Word& b);
    Word& operator*=(const Word& b) { return *this = *this * b; }

    friend bool operator==(const Word&, const Word&) = default;
    /// Length-lexicographic order with X1 < X1^-1 < X2 < X2^-1 < ...
    friend std::strong_ordering operator<=>(const Word& a, const Word& b);

    /// Canonical text, e.g. `X*Y^-1*X`; the empty word prints as `1`.
    std::string to_string(const Alphabet& alphabet = Alphabet::xy()) const;

    std::string_view code() const { return code_; }

private:
    explicit Word(std::string code) : code_(std::move(code)) {}
    static char encode(Letter l) { return static_cast<char>(l.exponent > 0 ? l.generator + 1 : -(l.generator + 1)); }
    static Letter decode(char c);

    std::string code_;
};

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept { return std::hash<std::string_view>{}(w.code()); }
};

/// reduce_word on a raw signed-letter sequence.
inline Word reduce_word(std::span<const Letter> raw) { return Word::reduce(raw); }
inline Word word_inverse(const Word& w) { return w.inverse(); }

}  // namespace ncid
