#pragma once

#include "ncid/report.hpp"

#include <string>
#include <vector>

namespace ncid {

struct SuiteOptions {
    u64 seed = 42;
    std::vector<int> only;  // empty: criteria 1..10
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    Json details;
    Json findings = Json::array();
    double seconds = 0;
};

inline constexpr int kCriteria = 10;

/// Criterion 10 reruns the seeded criteria and compares their serialized details;
/// `earlier` supplies first-run results so they are not recomputed.
CriterionResult run_criterion(int id, const SuiteOptions& opts, const std::vector<CriterionResult>& earlier = {});
std::vector<CriterionResult> run_suite(const SuiteOptions& opts);

/// {"schema_version", "tool", "seed", "criteria": [...], "pass"}; timing only when asked.
Json suite_json(const std::vector<CriterionResult>& results, const SuiteOptions& opts, bool timing);
/// "PASS 3 annihilators for P_a (1.2 s)".
std::string criterion_line(const CriterionResult& r);

/// Bound on deg_S for exp of the binomially weighted log P: C(deg_x + deg_y, deg_x).
int binomial_transform_degree_bound(const CommPoly& P);

}  // namespace ncid
