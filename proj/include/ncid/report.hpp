#pragma once

#include "ncid/dynamics.hpp"
#include "ncid/flows.hpp"
#include "ncid/guessing.hpp"
#include "ncid/laurent.hpp"
#include "ncid/ratexpr.hpp"
#include "ncid/spectral.hpp"

#include "json.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ncid {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Portable splitmix64 stream; the same seed gives the same draws everywhere.
class SeededRng {
public:
    explicit SeededRng(u64 seed) : s_(seed) {}
    u64 next();
    u64 below(u64 n) { return next() % n; }
    long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<u64>(hi - lo + 1))); }

private:
    u64 s_;
};

/// Integers that fit in 64 bits become JSON numbers, everything else a "p/q" string.
Json rational_json(const Rational& q);
Json series_json(const ScalarSeries& s);
Json annihilator_json(const AnnihilatorPoly& q);
Json support_json(const NCPoly& p, const Alphabet& alphabet);
Json comm_poly_json(const CommPoly& p);

/// Parses a commutative polynomial in x, y such as "1 - x*y + 2*x^2".
CommPoly parse_comm_poly(std::string_view text);
std::string comm_poly_string(const CommPoly& p);

/// Every report sets "pass"; the caller decides the exit code from it.

struct CharpolyConfig {
    std::string expr;    // group-ring element, e.g. "X + X^-1"
    std::string family;  // plus-inverses | sum-plus-product-inverse; overrides expr
    int n = 1;
    std::size_t order = 12;
    int max_deg_t = 4;
    int max_deg_s = 4;
    std::size_t margin = 15;
    bool guess = true;
};
Json charpoly_report(const CharpolyConfig& cfg);

struct GuessConfig {
    std::vector<Rational> coefficients;
    int max_deg_t = 4;
    int max_deg_s = 4;
    std::size_t margin = 15;
    std::string series_id = "input";
};
Json guess_report(const GuessConfig& cfg);

struct FlowsConfig {
    bool catalan = false;
    bool intertwine = false;
    std::string delta;  // "log(<poly in x, y>)"
    std::size_t order = 8;
    int max_degree = 6;
    std::size_t bracket_cases = 30;
    u64 seed = 1;
};
Json flows_report(const FlowsConfig& cfg);

struct ZeroConfig {
    std::string expr;
    std::vector<std::string> group;  // variables sampled invertible; empty: all
    Schedule schedule;
};
Json zero_report(const ZeroConfig& cfg);

struct DynConfig {
    std::string map = "S1";
    std::size_t steps = 3;
    std::size_t d = 1;
    std::size_t trials = 20;
    std::vector<FieldSpec> fields;
    std::vector<Rational> t_values{1, 2, 3, Rational(5, 7)};
    u64 seed = 1;
};
Json lax_report(const DynConfig& cfg);
Json conj3_report(const DynConfig& cfg);
Json recover_report(const DynConfig& cfg);
Json growth_report(const DynConfig& cfg);
Json iterate_report(const DynConfig& cfg);

/// Fields used when none are given: Q and the first two default primes.
std::vector<FieldSpec> default_fields(bool with_rationals = true);

Json candidate_json(const LaurentCandidate& c);

}  // namespace ncid
