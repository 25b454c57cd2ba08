// Runs every acceptance criterion and prints one PASS/FAIL line each.
// argv[1], when given, is the ncid binary; criterion 10 then also diffs two CLI runs.

#include "ncid/suite.hpp"

#include <array>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>

using namespace ncid;

namespace {

bool capture(const std::string& cmd, std::string& out)
{
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    if (!pipe) return false;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
    return true;
}

}  // namespace

int main(int argc, char** argv)
{
    SuiteOptions opts;
    std::vector<CriterionResult> results;
    for (int id = 1; id <= kCriteria; ++id) {
        CriterionResult r = run_criterion(id, opts, results);
        if (id == 10 && argc > 1) {
            const std::string cmd = std::string("'") + argv[1] + "' --paper-suite --seed 42 --no-timestamp 2>/dev/null";
            std::string a, b;
            const bool ran = capture(cmd, a) && capture(cmd, b);
            const bool same = ran && !a.empty() && a == b;
            r.details["cli_runs_identical"] = same;
            r.details["cli_output_bytes"] = a.size();
            r.pass = r.pass && same;
        }
        std::cout << criterion_line(r) << std::endl;
        for (const auto& f : r.findings) std::cout << "  FINDING: " << f.dump() << "\n";
        if (!r.pass && r.details.contains("items")) {
            for (const auto& it : r.details["items"])
                if (!it.value("ok", true)) std::cout << "  failed item: " << it.dump() << "\n";
        } else if (!r.pass) {
            std::cout << "  details: " << r.details.dump().substr(0, 2000) << "\n";
        }
        results.push_back(std::move(r));
    }
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << (kCriteria - failed) << "/" << kCriteria << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
