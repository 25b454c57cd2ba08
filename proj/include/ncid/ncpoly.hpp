#pragma once

#include "ncid/scalar.hpp"
#include "ncid/word.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ncid {

/// Finite linear combination of reduced words with rational coefficients:
/// an element of Q[Free_n] (or of Q<X_1..X_n> when all words are positive).
///
/// Terms are kept sorted by the word order with no zero coefficients, so two
/// equal polynomials have identical term vectors.
class NCPoly {
public:
    using Term = std::pair<Word, Rational>;

    NCPoly() = default;
    NCPoly(const Rational& c);  // NOLINT: scalars embed as c*id
    NCPoly(const Word& w, const Rational& c = 1);
    static NCPoly from_terms(std::vector<Term> terms);
    static NCPoly generator(int g, int exponent = 1) { return NCPoly(Word::generator(g, exponent)); }

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    /// Maximum word length over the support (0 for the zero polynomial).
    std::size_t degree() const;
    Rational coefficient(const Word& w) const;
    bool has_integer_coefficients() const;
    int generator_bound() const;

    NCPoly operator-() const;
    friend NCPoly operator+(const NCPoly& a, const NCPoly& b);
    friend NCPoly operator-(const NCPoly& a, const NCPoly& b);
    friend NCPoly operator*(const NCPoly& a, const NCPoly& b);
    friend NCPoly operator*(const Rational& c, const NCPoly& a);
    NCPoly& operator+=(const NCPoly& b) { return *this = *this + b; }
    NCPoly& operator-=(const NCPoly& b) { return *this = *this - b; }
    NCPoly& operator*=(const NCPoly& b) { return *this = *this * b; }
    friend bool operator==(const NCPoly&, const NCPoly&) = default;

    /// Keeps only words of length <= n.
    NCPoly truncated(std::size_t n) const;
    /// Homogeneous part of word length exactly d.
    NCPoly homogeneous_part(std::size_t d) const;
    /// Image under word inversion (the antipode w -> w^-1).
    NCPoly antipode() const;

    /// Canonical text `c*w + ...`, unit coefficients omitted, `0` for zero.
    std::string to_string(const Alphabet& alphabet = Alphabet::xy()) const;

private:
    friend class NCPolyBuilder;
    static NCPoly adopt(std::vector<Term> sorted_terms)
    {
        NCPoly r;
        r.terms_ = std::move(sorted_terms);
        return r;
    }
    std::vector<Term> terms_;
};

/// Accumulates terms in a hash table; `finish()` yields the canonical polynomial.
class NCPolyBuilder {
public:
    void reserve(std::size_t n) { acc_.reserve(n); }
    void add(const Word& w, const Rational& c);
    void add(Word&& w, const Rational& c);
    void add(const NCPoly& p, const Rational& scale = 1);
    std::size_t size() const { return acc_.size(); }
    NCPoly finish();

private:
    std::unordered_map<Word, Rational, WordHash> acc_;
};

inline NCPoly poly_mul(const NCPoly& a, const NCPoly& b) { return a * b; }
NCPoly commutator(const NCPoly& a, const NCPoly& b);
NCPoly power(const NCPoly& a, unsigned k);

/// Coefficient of the identity word.
inline Rational trace_const(const NCPoly& a) { return a.coefficient(Word()); }
/// trace_const(a*b) without forming the product: sum_u a_u * b_{u^-1}.
Rational trace_of_product(const NCPoly& a, const NCPoly& b);

/// Commutative Laurent polynomial: exponent vector -> coefficient.
using CommPoly = std::map<std::vector<int>, Rational>;

/// Abelianization X_i -> x_i into commutative Laurent polynomials in `ngens` variables.
CommPoly abelianize(const NCPoly& a, int ngens);

}  // namespace ncid
