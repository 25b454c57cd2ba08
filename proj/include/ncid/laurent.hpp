#pragma once

#include "ncid/ncpoly.hpp"
#include "ncid/ratexpr.hpp"

#include <compare>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ncid {

enum class WordMode { group, monoid };

/// All reduced words of length <= L in length-lex order.
std::vector<Word> enumerate_words(int nvars, int L, WordMode mode = WordMode::group);
/// 1 + sum_{l=1..L} 2n(2n-1)^(l-1) in group mode, sum n^l in monoid mode.
std::size_t word_count(int nvars, int L, WordMode mode = WordMode::group);

/// Bi-invariant total order on a free group from the Magnus expansion
/// X_i -> 1 + x_i: words compare by their coefficient sequences in deg-lex order.
class MagnusOrder {
public:
    explicit MagnusOrder(int nvars) : n_(nvars) {}
    std::strong_ordering compare(const Word& a, const Word& b);
    bool less(const Word& a, const Word& b) { return compare(a, b) < 0; }

    struct Less {
        MagnusOrder* order;
        bool operator()(const Word& a, const Word& b) const { return order->less(a, b); }
    };

private:
    struct Expansion {
        int depth = 0;
        std::vector<std::vector<long long>> parts;  // parts[c]: n^c coefficients
    };
    const Expansion& expansion(const Word& w, int depth);

    int n_;
    std::unordered_map<Word, Expansion, WordHash> cache_;
};

struct DivisionBudget {
    std::size_t max_quotient_terms = 200000;
    std::size_t max_remainder_terms = 4000000;
    std::size_t max_product_terms = 4000000;  // |a| * |b| before multiplying
};

/// q with q * b == a, or nullopt when the division does not terminate within budget.
std::optional<NCPoly> divide_right(const NCPoly& a, const NCPoly& b, MagnusOrder& order, const DivisionBudget& budget = {});
/// q with b * q == a.
std::optional<NCPoly> divide_left(const NCPoly& a, const NCPoly& b, MagnusOrder& order, const DivisionBudget& budget = {});

/// Symbolic Laurent expansion of an expression whose non-monomial inverses
/// only occur as exact left or right divisors. nullopt when that fails.
std::optional<NCPoly> laurent_expand(const ExprPool& pool, ExprId root, int nvars, const DivisionBudget& budget = {});

/// Degree estimate: Var 1, Const 0, Add max, Mul sum, Neg and Inv keep the child's.
int syntactic_degree(const ExprPool& pool, ExprId root);

struct RecoverOptions {
    std::vector<u64> primes;        // empty: the three largest primes below 2^31
    u64 seed = 1;
    std::size_t fresh_samples = 4;  // split over two dimensions
    std::size_t max_unknowns = 800;
    WordMode mode = WordMode::group;
    bool rational_check = true;     // one evaluation over Q at d = 2
};

struct VerificationSample {
    std::size_t d = 0;
    u64 p = 0;
    u64 seed = 0;
    bool zero = false;
};

struct LaurentCandidate {
    enum class Status { recovered, infeasible, rank_deficient, singular };

    Status status = Status::infeasible;
    Alphabet alphabet;
    int L = 0;
    std::string basis_source;  // enumerated | expanded | verify-only
    std::size_t unknowns = 0;
    std::size_t solve_d = 0;
    std::size_t min_full_rank_d = 0;  // smallest tried d with full column rank
    NCPoly poly;
    bool solved = false;  // coefficients came from the linear solve
    bool verified = false;
    bool rational_ok = false;
    std::vector<VerificationSample> samples;
    std::string note;

    bool ok() const { return status == Status::recovered && verified; }
    std::string status_name() const;
};

/// Solves for coefficients over all reduced words of length <= L.
LaurentCandidate recover_laurent(const ExprPool& pool, ExprId target, const Alphabet& alphabet, int L,
                                 const RecoverOptions& opts = {});
/// Same with an explicit candidate basis.
LaurentCandidate recover_from_basis(const ExprPool& pool, ExprId target, const Alphabet& alphabet,
                                    std::vector<Word> basis, int L, const RecoverOptions& opts = {});
/// L = 0, 2, 4, ... up to `cap` while the basis fits max_unknowns.
LaurentCandidate recover_escalating(const ExprPool& pool, ExprId target, const Alphabet& alphabet,
                                    const RecoverOptions& opts = {}, int cap = 10);
/// Expansion first; full enumeration when it fits max_unknowns, else the expanded
/// support as basis, else verification of the expansion only.
LaurentCandidate recover_iterate(const ExprPool& pool, ExprId target, const Alphabet& alphabet,
                                 const RecoverOptions& opts = {}, const DivisionBudget& budget = {});

/// Checks that `poly` matches `target` at fresh points; fills c.samples and c.verified.
void verify_candidate(const ExprPool& pool, ExprId target, LaurentCandidate& c, const RecoverOptions& opts);

struct CoefficientCheck {
    bool ok = true;
    std::vector<NCPoly::Term> offenders;
};
CoefficientCheck coefficient_set_check(const LaurentCandidate& c, const std::vector<Rational>& allowed);
CoefficientCheck integer_coefficient_check(const LaurentCandidate& c);

std::vector<u64> default_primes();

}  // namespace ncid
