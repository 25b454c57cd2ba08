#pragma once

#include "ncid/ncpoly.hpp"
#include "ncid/series.hpp"

#include <cstddef>
#include <map>
#include <utility>

namespace ncid {

/// Sum of all words with n letters X and m letters Y (X = generator 0, Y = generator 1).
NCPoly shuffle_c(int n, int m);

/// delta = sum f_{n,m} delta_{n,m} with m >= 1, kept through total degree `order`.
struct DeltaSpec {
    std::map<std::pair<int, int>, Rational> f;
    std::size_t order = TruncSeries::kDefaultOrder;

    static DeltaSpec basis(int n, int m, std::size_t order = TruncSeries::kDefaultOrder);
    /// Coefficients of a generating series; throws if any x^n (m = 0) term is nonzero.
    static DeltaSpec from_series(const BiSeries& g);
    /// D with delta(X) = [D, X]: sum f_{n,m} c_{n,m}.
    NCPoly conjugator() const;
    BiSeries generating_series() const;
    bool is_zero() const { return f.empty(); }
};

/// delta_{n,m}(a) for a polynomial in positive words.
NCPoly apply_delta(int n, int m, const NCPoly& a);
NCPoly apply_delta(const DeltaSpec& spec, const NCPoly& a);
TruncSeries apply_delta(const DeltaSpec& spec, const TruncSeries& a);

using TPoly = CentralPoly<NCPoly>;
using TSeriesPoly = CentralPoly<TruncSeries>;

/// D_t = sum_{0<=k<=n} c_{n-k,m+k} t^k.
TPoly intertwiner_Dt(int n, int m);
/// [c_{n,m}, X] - [D_t, X + tY] as a polynomial in t.
TPoly check_intertwine(int n, int m);
/// (d1 d2 - d2 d1)(test), words longer than N dropped.
NCPoly bracket_residual(std::pair<int, int> i1, std::pair<int, int> i2, const NCPoly& test, std::size_t N);

/// R(tau) solving R' = delta(R) + R D, R(0) = 1, as a polynomial in tau.
TSeriesPoly integrate_R(const DeltaSpec& spec, std::size_t N);
TruncSeries evaluate_tau(const TSeriesPoly& r, const Rational& tau);

/// C = X (1 - C)^-1 Y through degree N.
TruncSeries catalan_C(std::size_t N);
/// T = X^-1 C, read off by removing the leading X of every word of C.
TruncSeries strip_leading_X(const TruncSeries& c);

struct ConjugationReport {
    TSeriesPoly residual;           // (R X R^-1 + tY) R_t - R_t (X + tY)
    TruncSeries catalan_residual;   // C - X (1 - C)^-1 Y
    TruncSeries quadratic_residual; // X T T - T + Y
    TruncSeries literal_sign_residual;  // X T T + T - Y: the sign pattern A = X^-1, B = -X^-1 Y
    bool zero() const { return residual.is_zero() && catalan_residual.is_zero() && quadratic_residual.is_zero(); }
};

/// The Catalan example: R = 1 - YX - C, R_t = R (1 - t T^2).
ConjugationReport verify_conjugation(std::size_t N);

/// 1 - YX - C.
TruncSeries catalan_R(std::size_t N);

/// X -> R X R^-1, Y -> Y applied to a series.
TruncSeries conjugation_automorphism(const TruncSeries& R, const TruncSeries& a);

}  // namespace ncid
