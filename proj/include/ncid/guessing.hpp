#pragma once

#include "ncid/ncpoly.hpp"
#include "ncid/series.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace ncid {

class InsufficientData : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Q(t, S) = sum q[j][i] t^i S^j annihilating a series.
///
/// Normalized so the coefficient of t^i S^degS with the smallest such i is 1;
/// `primitive` holds the same polynomial cleared to coprime integers with that
/// coefficient positive.
struct AnnihilatorPoly {
    int deg_t = 0;
    int deg_s = 0;
    std::vector<std::vector<Rational>> q;        // q[j][i]
    std::vector<std::vector<Integer>> primitive;  // q[j][i] * lcm(den), / gcd(num)
    std::size_t used = 0;    // series coefficients the solve was built from
    std::size_t margin = 0;  // further coefficients checked exactly
    bool verified = false;

    const Rational& coeff(int i, int j) const { return q[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; }
    /// e.g. `S^2 - S + z`.
    std::string to_string(std::string_view t = "z", std::string_view s = "S") const;
    /// [[i, j, q_ij], ...] over nonzero coefficients.
    std::vector<std::tuple<int, int, Rational>> entries() const;
};

AnnihilatorPoly make_annihilator(int deg_t, int deg_s, const std::vector<std::tuple<int, int, Rational>>& entries);

struct ResidualReport {
    bool zero = true;
    std::optional<std::size_t> first_nonzero;
    std::size_t checked_through = 0;
};

/// Q(t, s(t)) composed exactly through t^upto.
ResidualReport verify_annihilator(const AnnihilatorPoly& Q, const ScalarSeries& s, std::size_t upto);

/// Exact annihilator with deg_t <= degT and deg_S <= degS,
/// solved on all but the last `margin` known coefficients and verified on those.
///
/// Throws InsufficientData unless (degT+1)(degS+1) + margin coefficients are known.
std::optional<AnnihilatorPoly> guess_annihilator(const ScalarSeries& s, int degT, int degS, std::size_t margin = 15);

struct GuessSearch {
    std::optional<AnnihilatorPoly> found;
    std::size_t pairs_tried = 0;
    std::size_t pairs_skipped = 0;  // not enough coefficients
};

/// First hit in the order: deg_S + deg_T ascending, then deg_S ascending.
GuessSearch search_annihilator(const ScalarSeries& s, int max_deg_t, int max_deg_s, std::size_t margin = 15);

/// exp(sum C(n+m, n) f_{n,m} x^n y^m) where log P = sum f_{n,m} x^n y^m, through total degree N.
BiSeries binomial_transform(const CommPoly& P, std::size_t N);
/// The same series restricted to x = s, y = slope * s, computed without the bivariate exp.
ScalarSeries binomial_transform_line(const CommPoly& P, const Rational& slope, std::size_t N);

}  // namespace ncid
