#pragma once

#include "ncid/scalar.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ncid {

struct RationalField {
    using Element = Rational;
    Element zero() const { return 0; }
    Element one() const { return 1; }
    Element from_int(long v) const { return v; }
    Element from_rational(const Rational& q) const { return q; }
    Element add(const Element& a, const Element& b) const { return a + b; }
    Element sub(const Element& a, const Element& b) const { return a - b; }
    Element mul(const Element& a, const Element& b) const { return a * b; }
    Element neg(const Element& a) const { return -a; }
    Element inv(const Element& a) const { return 1 / a; }
    bool is_zero(const Element& a) const { return a == 0; }
    friend bool operator==(const RationalField&, const RationalField&) = default;
};

struct PrimeField {
    using Element = u64;
    u64 p = 2147483647;

    Element zero() const { return 0; }
    Element one() const { return 1; }
    Element from_int(long v) const
    {
        long r = v % static_cast<long>(p);
        return static_cast<u64>(r < 0 ? r + static_cast<long>(p) : r);
    }
    /// Throws when p divides the denominator.
    Element from_rational(const Rational& q) const
    {
        auto r = reduce_mod(q, p);
        if (!r) throw std::domain_error("denominator vanishes modulo p");
        return *r;
    }
    Element add(Element a, Element b) const { return add_mod(a, b, p); }
    Element sub(Element a, Element b) const { return sub_mod(a, b, p); }
    Element mul(Element a, Element b) const { return mul_mod(a, b, p); }
    Element neg(Element a) const { return a == 0 ? 0 : p - a; }
    Element inv(Element a) const { return inv_mod(a, p); }
    bool is_zero(Element a) const { return a == 0; }
    friend bool operator==(const PrimeField&, const PrimeField&) = default;
};

class SingularMatrix : public std::domain_error {
public:
    SingularMatrix() : std::domain_error("singular matrix") {}
};

/// Dense row-major matrix over a field object F.
template <class F>
class Matrix {
public:
    using E = typename F::Element;

    Matrix() = default;
    Matrix(F field, std::size_t rows, std::size_t cols)
        : f_(field), rows_(rows), cols_(cols), a_(rows * cols, field.zero())
    {
    }
    static Matrix identity(F field, std::size_t n)
    {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
        return m;
    }

    const F& field() const { return f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    E& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const E& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    const std::vector<E>& data() const { return a_; }

    bool is_zero() const
    {
        for (const auto& x : a_)
            if (!f_.is_zero(x)) return false;
        return true;
    }
    bool is_identity() const
    {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                const E& x = (*this)(i, j);
                if (i == j ? !f_.is_zero(f_.sub(x, f_.one())) : !f_.is_zero(x)) return false;
            }
        return true;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b)
    {
        check_same(a, b);
        Matrix r = a;
        for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] = a.f_.add(a.a_[k], b.a_[k]);
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b)
    {
        check_same(a, b);
        Matrix r = a;
        for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] = a.f_.sub(a.a_[k], b.a_[k]);
        return r;
    }
    Matrix operator-() const
    {
        Matrix r = *this;
        for (auto& x : r.a_) x = f_.neg(x);
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
        Matrix r(a.f_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const E& x = a(i, k);
                if (a.f_.is_zero(x)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) = a.f_.add(r(i, j), a.f_.mul(x, b(k, j)));
            }
        return r;
    }
    Matrix scaled(const E& c) const
    {
        Matrix r = *this;
        for (auto& x : r.a_) x = f_.mul(c, x);
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    Matrix block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const
    {
        Matrix out(f_, r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) out(i, j) = (*this)(i0 + i, j0 + j);
        return out;
    }
    void set_block(std::size_t i0, std::size_t j0, const Matrix& b)
    {
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }
    Matrix transposed() const
    {
        Matrix r(f_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

private:
    static void check_same(const Matrix& a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
    }

    F f_{};
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<E> a_;
};

using QMatrix = Matrix<RationalField>;
using PMatrix = Matrix<PrimeField>;

/// In-place reduced row echelon form; returns the pivot columns.
template <class F>
std::vector<std::size_t> rref(Matrix<F>& m)
{
    const F& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && f.is_zero(m(piv, c))) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
        auto inv = f.inv(m(r, c));
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), inv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || f.is_zero(m(i, c))) continue;
            auto k = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!f.is_zero(m(r, j))) m(i, j) = f.sub(m(i, j), f.mul(k, m(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class F>
std::size_t rank(Matrix<F> m)
{
    return rref(m).size();
}

/// Basis of the right kernel, one vector per free column (free entry = 1).
template <class F>
std::vector<std::vector<typename F::Element>> nullspace(Matrix<F> m)
{
    const F& f = m.field();
    auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<typename F::Element>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<typename F::Element> v(m.cols(), f.zero());
        v[free] = f.one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(m(r, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class F>
Matrix<F> inverse(const Matrix<F>& m)
{
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    const F& f = m.field();
    Matrix<F> aug(f, n, 2 * n);
    aug.set_block(0, 0, m);
    for (std::size_t i = 0; i < n; ++i) aug(i, n + i) = f.one();
    auto pivots = rref(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) throw SingularMatrix();
    return aug.block(0, n, n, n);
}

template <class F>
typename F::Element determinant(Matrix<F> m)
{
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
    const F& f = m.field();
    const std::size_t n = m.rows();
    auto det = f.one();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && f.is_zero(m(piv, c))) ++piv;
        if (piv == n) return f.zero();
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            det = f.neg(det);
        }
        det = f.mul(det, m(c, c));
        auto inv = f.inv(m(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            if (f.is_zero(m(i, c))) continue;
            auto k = f.mul(m(i, c), inv);
            for (std::size_t j = c; j < n; ++j) m(i, j) = f.sub(m(i, j), f.mul(k, m(c, j)));
        }
    }
    return det;
}

enum class SolveStatus { unique, inconsistent, underdetermined };

template <class F>
struct SolveResult {
    SolveStatus status = SolveStatus::inconsistent;
    std::size_t rank = 0;
    std::vector<typename F::Element> x;
};

/// Solves m x = b, demanding full column rank for a unique answer.
template <class F>
SolveResult<F> solve_linear(const Matrix<F>& m, const std::vector<typename F::Element>& b)
{
    const std::size_t n = m.cols();
    Matrix<F> aug(m.field(), m.rows(), n + 1);
    aug.set_block(0, 0, m);
    for (std::size_t i = 0; i < m.rows(); ++i) aug(i, n) = b[i];
    auto pivots = rref(aug);
    SolveResult<F> out;
    bool inconsistent = !pivots.empty() && pivots.back() == n;
    out.rank = inconsistent ? pivots.size() - 1 : pivots.size();
    if (inconsistent) return out;
    if (out.rank < n) {
        out.status = SolveStatus::underdetermined;
        return out;
    }
    out.status = SolveStatus::unique;
    out.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.x[i] = aug(i, n);
    return out;
}

}  // namespace ncid
