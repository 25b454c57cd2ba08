#pragma once

#include "ncid/ncpoly.hpp"
#include "ncid/series.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ncid {

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// [Tr(a^1), ..., Tr(a^K)] from explicit powers of a.
///
/// Tr(a^k) is read off as tr(a^ceil(k/2) * a^floor(k/2)), so only powers up to
/// ceil(K/2) are ever expanded.
std::vector<Rational> power_traces(const NCPoly& a, std::size_t K);

/// Same values by counting weighted closed walks on the Cayley tree.
///
/// Each support word becomes a chain of single-letter steps padded with idle
/// steps to a common length; first-passage generating matrices then give the
/// return series without ever expanding a^k.
std::vector<Rational> walk_traces(const NCPoly& a, std::size_t K);

enum class TraceMethod { powers, walks };

/// F_a = sum_{k>=1} Tr(a^k) t^k through t^N.
ScalarSeries f_series(const NCPoly& a, std::size_t N, TraceMethod method = TraceMethod::walks);
/// P_a = exp(-sum Tr(a^k) t^k / k) through t^N.
ScalarSeries char_series(const NCPoly& a, std::size_t N, TraceMethod method = TraceMethod::walks);
ScalarSeries char_series_from_traces(const std::vector<Rational>& traces, std::size_t N);

struct NecklaceStats {
    std::size_t factors = 0;  // necklaces with product id
    std::size_t nodes = 0;    // search tree nodes visited
};

/// prod over k <= N and aperiodic minimal sequences (g_1..g_k) with g_1...g_k = id
/// of (1 - c_{g_1}...c_{g_k} t^k), truncated at t^N.
///
/// Requires integer coefficients. Throws BudgetExceeded past `node_budget` search nodes.
ScalarSeries necklace_product(const NCPoly& a, std::size_t N, std::size_t node_budget = 50'000'000,
                              NecklaceStats* stats = nullptr);

/// ((f+1)/2)^n / ((n f + n - 1)/(2n - 1))^(n-1) with f = sqrt(1 - 4(2n-1) t^2).
ScalarSeries closed_form_plus_inverses(int n, std::size_t N);

/// X_1 + X_1^-1 + ... + X_n + X_n^-1.
NCPoly plus_inverses(int n);
/// X_1 + ... + X_n + (X_1...X_n)^-1.
NCPoly sum_plus_product_inverse(int n);

}  // namespace ncid
