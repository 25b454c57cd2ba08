#pragma once

#include "ncid/laurent.hpp"
#include "ncid/linalg.hpp"
#include "ncid/ncpoly.hpp"
#include "ncid/ratexpr.hpp"

#include <string>
#include <vector>

namespace ncid {

/// S_l: (X, Y) -> (X Y X^-1, (1 + Y^l) X^-1), S_minus1 the l = -1 case, and the
/// U_n recursion of odd order k >= 3.
struct MapSpec {
    enum class Kind { S, U };
    Kind kind = Kind::S;
    int param = 1;  // l for S, k for U

    static MapSpec S(int l);
    static MapSpec S_minus1() { return S(-1); }
    static MapSpec U(int k);
    /// "S1", "S2", "S-1", "U3", ...
    static MapSpec parse(const std::string& name);

    std::string name() const;
    int arity() const { return kind == Kind::S ? 2 : param; }
    Alphabet alphabet() const;
};

using State = std::vector<ExprId>;

/// states[0] is the initial variables; states[s] is the s-th iterate.
/// For U_k one step is (U_1..U_k) -> (U_3..U_{k+2}).
std::vector<State> iterate_map(ExprPool& pool, const MapSpec& spec, std::size_t steps);

/// U_1 .. U_count for the order-k recursion (index 0 holds U_1).
std::vector<ExprId> u_sequence(ExprPool& pool, int k, std::size_t count);

/// Residual of the defining equations between two consecutive states:
/// X' X - X Y and Y' X - (1 + Y^l) for S; U_{n-k} U_n - (1 + U_{n-1} U_{n-k+1}) (n even)
/// or U_n U_{n-k} - (1 + U_{n-k+1} U_{n-1}) (n odd) for U.
std::vector<ExprId> recursion_residuals(ExprPool& pool, const MapSpec& spec, const State& from, const State& to);

// ---------------------------------------------------------------------------
// Lax pair for S_minus1

struct LaxBlocks {
    BlockExpr L, V, SL, residual;  // residual = S(L) V - V L
};
/// Throws std::invalid_argument for t = 0.
LaxBlocks lax_blocks(ExprPool& pool, const Rational& t);

struct LaxReport {
    std::size_t d = 0;
    FieldSpec field;
    std::vector<Rational> t_values;
    std::size_t trials = 0;
    std::size_t evaluations = 0;
    std::size_t singular = 0;
    std::size_t nonzero = 0;
    std::size_t spectrum_mismatch = 0;  // det(1 - lambda L) changed under the map
    u64 witness_seed = 0;
    Rational witness_t;

    bool zero() const { return nonzero == 0 && spectrum_mismatch == 0 && evaluations > 0; }
    double degeneracy_rate() const;
};

LaxReport lax_residual(std::size_t d, const FieldSpec& field, const std::vector<Rational>& t_values, std::size_t trials,
                       u64 seed);

/// det(1 - x A - y B) by interpolation on a (d+1) x (d+1) grid.
CommPoly bichar_poly(const QMatrix& A, const QMatrix& B);

// ---------------------------------------------------------------------------
// 3x3 block involutions

template <class F>
Matrix<F> involution_I1(const Matrix<F>& m) { return inverse(m); }
/// Block transpose; d x d entries are not transposed.
template <class F>
Matrix<F> involution_I2(const Matrix<F>& m, std::size_t d);
/// Blockwise inverse.
template <class F>
Matrix<F> involution_I3(const Matrix<F>& m, std::size_t d);
/// I1 o I2 o I3.
template <class F>
Matrix<F> apply_F(const Matrix<F>& m, std::size_t d);

/// M''_ij = L_i M_ij R_j with R_j = M_3j^-1, L_3 = 1, L_i = M_33 M_i3^-1.
/// Throws SingularMatrix for a singular boundary block.
template <class F>
Matrix<F> conjecture1_normalize(const Matrix<F>& m, std::size_t d);

/// True when some invertible g gives g A_ij g^-1 = B_ij for all blocks.
template <class F>
bool simultaneously_conjugate(const Matrix<F>& a, const Matrix<F>& b, std::size_t d, u64 seed);

struct ConjectureTrial {
    u64 seed = 0;
    std::size_t resamples = 0;  // degenerate draws before this one
    bool degenerate = false;    // resample budget exhausted
    bool residual_zero = false;       // normalize(F^3 M) ~ normalize(M) up to simultaneous conjugation
    bool naive_zero = false;          // normalize(F^3 M) == normalize(M)
    std::size_t naive_nonzero_entries = 0;
    bool involutions_ok = false;
    bool F_identity = false;
    bool F2_identity = false;
};

struct ConjectureReport {
    std::size_t d = 0;
    FieldSpec field;
    std::vector<ConjectureTrial> trials;

    std::size_t degenerate() const;
    std::size_t nondegenerate() const { return trials.size() - degenerate(); }
    double degeneracy_rate() const;
    std::size_t residual_zero() const;
    std::size_t naive_zero() const;
    bool involutions_ok() const;
    /// Fraction of non-degenerate trials where both F and F^2 act nontrivially.
    double nontrivial_rate() const;
};

/// `trials` non-degenerate samples, each resampled at most 100 times.
ConjectureReport conjecture1_period_check(std::size_t d, const FieldSpec& field, std::size_t trials, u64 seed);

// ---------------------------------------------------------------------------
// Orbits

struct IterateReport {
    std::size_t step = 0;
    std::vector<std::size_t> dag_sizes;
    std::vector<std::size_t> support;   // 0 when recovery failed
    std::vector<std::size_t> degree;
    std::vector<bool> recovered;
    bool recursion_ok = true;
};

struct OrbitReport {
    MapSpec spec;
    std::vector<IterateReport> iterates;
};

OrbitReport growth_probe(const MapSpec& spec, std::size_t steps, const DivisionBudget& budget = {}, u64 seed = 1);

}  // namespace ncid
