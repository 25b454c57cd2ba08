#pragma once

#include "ncid/ncpoly.hpp"
#include "ncid/scalar.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace ncid {

class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Commutative power series in one variable known through t^order.
class ScalarSeries {
public:
    ScalarSeries() = default;
    /// Zero series known through t^order.
    explicit ScalarSeries(std::size_t order) : c_(order + 1) {}
    ScalarSeries(std::vector<Rational> coeffs);  // NOLINT
    static ScalarSeries constant(const Rational& c, std::size_t order);
    /// c*t^k.
    static ScalarSeries monomial(const Rational& c, std::size_t k, std::size_t order);

    std::size_t order() const { return c_.size() - 1; }
    std::size_t size() const { return c_.size(); }
    const Rational& operator[](std::size_t k) const { return c_[k]; }
    Rational& operator[](std::size_t k) { return c_[k]; }
    const std::vector<Rational>& coefficients() const { return c_; }
    Rational at(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

    ScalarSeries truncated(std::size_t order) const;
    bool has_integer_coefficients() const;
    bool is_zero() const;

    friend ScalarSeries operator+(const ScalarSeries& a, const ScalarSeries& b);
    friend ScalarSeries operator-(const ScalarSeries& a, const ScalarSeries& b);
    friend ScalarSeries operator*(const ScalarSeries& a, const ScalarSeries& b);
    friend ScalarSeries operator*(const Rational& k, const ScalarSeries& a);
    ScalarSeries operator-() const { return Rational(-1) * *this; }
    friend bool operator==(const ScalarSeries&, const ScalarSeries&) = default;

    /// t * d/dt.
    ScalarSeries euler() const;
    ScalarSeries derivative() const;
    /// Substitute t -> t^g, keeping the known range.
    ScalarSeries stretch(std::size_t g) const;

    std::string to_string(std::string_view var = "t") const;

private:
    std::vector<Rational> c_{Rational(0)};
};

ScalarSeries series_exp(const ScalarSeries& s);   // requires s[0] == 0
ScalarSeries series_log(const ScalarSeries& s);   // requires s[0] == 1
ScalarSeries series_inverse(const ScalarSeries& s);  // requires s[0] != 0
/// s^alpha for s[0] == 1 and rational alpha.
ScalarSeries series_power(const ScalarSeries& s, const Rational& alpha);

enum class ExpLog { exp, log };
ScalarSeries scalar_series_exp_log(const ScalarSeries& s, ExpLog mode);

/// Largest g such that every nonzero coefficient of index > 0 sits at a multiple of g,
/// and the series in z = t^g. g is 0 when only the constant term is nonzero.
struct CompressedSeries {
    std::size_t step = 1;
    ScalarSeries series;
};
CompressedSeries compress(const ScalarSeries& s);

/// Commutative series in x, y truncated at total degree `order`.
class BiSeries {
public:
    BiSeries() = default;
    explicit BiSeries(std::size_t order);
    /// Polynomial {(n,m) -> c}; monomials above `order` are dropped. Exponents must be >= 0.
    static BiSeries from_poly(const CommPoly& p, std::size_t order);

    std::size_t order() const { return parts_.size() - 1; }
    const Rational& at(std::size_t n, std::size_t m) const { return parts_[n + m][n]; }
    Rational& at(std::size_t n, std::size_t m) { return parts_[n + m][n]; }
    Rational get(std::size_t n, std::size_t m) const;

    friend BiSeries operator+(const BiSeries& a, const BiSeries& b);
    friend BiSeries operator-(const BiSeries& a, const BiSeries& b);
    friend BiSeries operator*(const BiSeries& a, const BiSeries& b);
    friend bool operator==(const BiSeries&, const BiSeries&) = default;
    bool is_zero() const;

    /// x d/dx + y d/dy: multiplies the degree-k part by k.
    BiSeries euler() const;
    /// Restriction to the line x = s, y = slope * s.
    ScalarSeries restrict_to_line(const Rational& slope) const;

    std::string to_string() const;

private:
    // parts_[k][n] is the coefficient of x^n y^(k-n)
    std::vector<std::vector<Rational>> parts_{{Rational(0)}};
};

BiSeries series_inverse(const BiSeries& s);
BiSeries series_log(const BiSeries& s);
BiSeries series_exp(const BiSeries& s);

/// Degree-graded truncation of the completed free algebra Q<<X_1..X_n>>.
/// parts_[d] holds only positive words of length exactly d.
class TruncSeries {
public:
    static constexpr std::size_t kDefaultOrder = 12;

    explicit TruncSeries(std::size_t order = kDefaultOrder) : parts_(order + 1) {}
    TruncSeries(const NCPoly& p, std::size_t order);
    static TruncSeries one(std::size_t order) { return TruncSeries(NCPoly(Rational(1)), order); }

    std::size_t order() const { return parts_.size() - 1; }
    const NCPoly& part(std::size_t d) const { return parts_[d]; }
    NCPoly to_poly() const;
    bool is_zero() const;
    TruncSeries truncated(std::size_t order) const;

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
    friend TruncSeries operator*(const Rational& k, const TruncSeries& a);
    TruncSeries operator-() const { return Rational(-1) * *this; }
    friend bool operator==(const TruncSeries&, const TruncSeries&) = default;

    std::string to_string(const Alphabet& alphabet = Alphabet::xy()) const;

private:
    std::vector<NCPoly> parts_;
};

/// Inverse of a series with invertible scalar constant term.
TruncSeries series_inverse(const TruncSeries& s);
/// X -> x, Y -> y on a two-generator series.
BiSeries abelianize(const TruncSeries& s);

/// Polynomial in a central variable with coefficients of type T (NCPoly or TruncSeries).
template <class T>
class CentralPoly {
public:
    CentralPoly() = default;
    explicit CentralPoly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

    std::size_t size() const { return c_.size(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<T>& coefficients() const { return c_; }
    const T& operator[](std::size_t k) const { return c_[k]; }
    bool is_zero() const { return c_.empty(); }

    friend CentralPoly operator+(CentralPoly a, const CentralPoly& b)
    {
        if (a.c_.size() < b.c_.size()) a.c_.resize(b.c_.size(), zero_like(b.c_.front()));
        for (std::size_t k = 0; k < b.c_.size(); ++k) a.c_[k] = a.c_[k] + b.c_[k];
        a.trim();
        return a;
    }
    friend CentralPoly operator-(const CentralPoly& a, const CentralPoly& b) { return a + b.negated(); }
    friend CentralPoly operator*(const CentralPoly& a, const CentralPoly& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> out(a.c_.size() + b.c_.size() - 1, zero_like(a.c_.front()));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
        return CentralPoly(std::move(out));
    }
    CentralPoly negated() const
    {
        CentralPoly r = *this;
        for (auto& x : r.c_) x = Rational(-1) * x;
        return r;
    }

private:
    static T zero_like(const T& x)
    {
        if constexpr (std::is_same_v<T, TruncSeries>)
            return TruncSeries(x.order());
        else
            return T();
    }
    void trim()
    {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<T> c_;
};

}  // namespace ncid
