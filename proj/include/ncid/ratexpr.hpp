#pragma once

#include "ncid/linalg.hpp"
#include "ncid/ncpoly.hpp"
#include "ncid/scalar.hpp"
#include "ncid/word.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace ncid {

using ExprId = std::uint32_t;

enum class NodeKind : std::uint8_t { var, constant, add, mul, neg, inv };

struct ExprNode {
    NodeKind kind = NodeKind::constant;
    ExprId a = 0, b = 0;  // operands
    int var = -1;
    Rational value;       // constants only
};

/// Hash-consed store of noncommutative rational expressions.
///
/// Children always get smaller ids than their parents. Structurally equal
/// expressions are one node. The only rewrite is folding Neg(Const c) to Const(-c).
class ExprPool {
public:
    ExprPool() = default;
    explicit ExprPool(Alphabet names) : names_(std::move(names)) {}

    ExprId var(int index);
    ExprId var(std::string_view name) { return var(names_.intern(name)); }
    ExprId constant(const Rational& c);
    ExprId zero() { return constant(0); }
    ExprId one() { return constant(1); }
    ExprId add(ExprId a, ExprId b);
    ExprId sub(ExprId a, ExprId b) { return add(a, neg(b)); }
    ExprId mul(ExprId a, ExprId b);
    ExprId neg(ExprId a);
    ExprId inv(ExprId a);
    /// a^k for k >= 1 as a left-nested product; negative k inverts it.
    ExprId power(ExprId a, int k);

    const ExprNode& node(ExprId id) const { return nodes_[id]; }
    std::size_t size() const { return nodes_.size(); }
    /// Nodes reachable from `root`.
    std::size_t dag_size(ExprId root) const;
    /// Reachable nodes in increasing id order (a valid evaluation order).
    std::vector<ExprId> reachable(ExprId root) const;

    const Alphabet& names() const { return names_; }
    Alphabet& names() { return names_; }

    /// Replaces Var(i) by images[i] (variables past the end are kept).
    ExprId substitute(ExprId root, const std::vector<ExprId>& images);
    /// 64-bit structural hash independent of node numbering.
    std::uint64_t structural_hash(ExprId root) const;

private:
    ExprId intern(ExprNode n);

    struct Key {
        NodeKind kind;
        ExprId a, b;
        int var;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept
        {
            std::uint64_t h = static_cast<std::uint64_t>(k.kind);
            h = h * 0x9E3779B97F4A7C15ULL + k.a;
            h = h * 0x9E3779B97F4A7C15ULL + k.b;
            h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(static_cast<std::int64_t>(k.var));
            return static_cast<std::size_t>(h ^ (h >> 29));
        }
    };

    Alphabet names_;
    std::vector<ExprNode> nodes_;
    std::unordered_map<Key, ExprId, KeyHash> index_;
    std::map<Rational, ExprId> constants_;
};

/// r x c grid of expressions.
struct BlockExpr {
    std::size_t rows = 0, cols = 0;
    std::vector<ExprId> cells;

    ExprId& at(std::size_t i, std::size_t j) { return cells[i * cols + j]; }
    ExprId at(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
    /// Swaps block positions; entries are left alone.
    BlockExpr block_transpose() const;
};

BlockExpr block_add(ExprPool& pool, const BlockExpr& a, const BlockExpr& b);
BlockExpr block_mul(ExprPool& pool, const BlockExpr& a, const BlockExpr& b);

class ParseError : public std::invalid_argument {
public:
    ParseError(std::size_t offset, const std::string& what)
        : std::invalid_argument(what + " at offset " + std::to_string(offset)), offset_(offset)
    {
    }
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

using Parsed = std::variant<ExprId, BlockExpr>;

/// Grammar: sums, differences, products, unary minus, postfix ^k and ^-k,
/// parentheses, rationals like 5/7, identifiers, and one top-level block
/// literal [[a, b], [c, d]].
Parsed parse_expr(ExprPool& pool, std::string_view text);
/// parse_expr that rejects block literals.
ExprId parse_scalar_expr(ExprPool& pool, std::string_view text);

/// Canonical text; parse_expr(print_expr(e)) rebuilds the same node.
std::string print_expr(const ExprPool& pool, ExprId id);
std::string print_block(const ExprPool& pool, const BlockExpr& b);

/// Converts an inverse-free expression (inverses allowed on monomials) to NCPoly.
/// Throws std::domain_error otherwise.
NCPoly to_ncpoly(const ExprPool& pool, ExprId id);
ExprId from_ncpoly(ExprPool& pool, const NCPoly& p);

// ---------------------------------------------------------------------------
// Evaluation at matrix points

class SingularInverse : public std::domain_error {
public:
    explicit SingularInverse(ExprId node)
        : std::domain_error("singular inverse at node " + std::to_string(node)), node_(node)
    {
    }
    ExprId node() const { return node_; }

private:
    ExprId node_;
};

class RetryBudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Q (used for small dimensions) or F_p.
struct FieldSpec {
    bool rational = false;
    u64 p = 0;

    static FieldSpec rationals() { return {true, 0}; }
    static FieldSpec prime(u64 p) { return {false, p}; }
    std::string to_string() const { return rational ? "Q" : "F_" + std::to_string(p); }
    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

template <class F>
struct MatrixPoint {
    F field{};
    std::size_t d = 1;
    u64 seed = 0;
    std::vector<Matrix<F>> values;  // one per variable index
};

/// Uniform entries (Q: integers in [-9, 9]); group variables get invertible
/// matrices by rejection, at most 100 draws each.
template <class F>
MatrixPoint<F> sample_point(F field, std::size_t nvars, std::size_t d, u64 seed, const std::vector<bool>& group = {});

template <class F>
Matrix<F> random_matrix(F field, std::size_t d, std::uint64_t& state);

/// Homomorphic evaluation with per-call memoization. Throws SingularInverse.
template <class F>
Matrix<F> eval_expr(const ExprPool& pool, ExprId root, const MatrixPoint<F>& point, std::size_t d_override = 0);
/// Entry-wise evaluation of a block expression, assembled into one (r d) x (c d) matrix.
template <class F>
Matrix<F> eval_block(const ExprPool& pool, const BlockExpr& b, const MatrixPoint<F>& point);

/// Evaluates several roots sharing one memo table.
template <class F>
std::vector<Matrix<F>> eval_many(const ExprPool& pool, const std::vector<ExprId>& roots, const MatrixPoint<F>& point);

/// Deterministic seed derivation for schedules.
u64 mix_seed(u64 base, u64 a, u64 b = 0, u64 c = 0);

struct Schedule {
    std::vector<std::size_t> dims;
    std::vector<FieldSpec> fields;
    std::size_t trials = 5;
    u64 seed = 1;
};

struct ZeroVerdict {
    enum class Kind { zero_evidence, nonzero, all_singular };
    Kind kind = Kind::zero_evidence;
    std::size_t evaluations = 0;
    std::size_t singular = 0;
    // witness for nonzero
    std::size_t witness_d = 0;
    FieldSpec witness_field;
    u64 witness_seed = 0;

    double singular_rate() const
    {
        std::size_t total = evaluations + singular;
        return total ? static_cast<double>(singular) / static_cast<double>(total) : 0.0;
    }
    std::string kind_name() const;
};

/// Randomized identity test: nonzero at any sample gives a reproducible witness.
/// `group` flags variables that must be sampled invertible.
ZeroVerdict prove_zero(const ExprPool& pool, ExprId e, const Schedule& schedule, const std::vector<bool>& group = {});

/// Re-evaluates at the witness point; true when the value there is nonzero.
bool recheck_nonzero(const ExprPool& pool, ExprId e, const ZeroVerdict& v, const std::vector<bool>& group = {});

}  // namespace ncid
