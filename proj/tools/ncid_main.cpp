#include "ncid/report.hpp"
#include "ncid/suite.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ncid;

namespace {

struct Common {
    u64 seed = 42;
    std::string format = "json";
    std::string output;
    bool no_timestamp = false;
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string part; std::getline(in, part, sep);)
        if (!part.empty()) out.push_back(part);
    return out;
}

std::vector<FieldSpec> parse_fields(const std::string& text)
{
    std::vector<FieldSpec> out;
    for (const auto& f : split(text, ',')) {
        if (f == "Q" || f == "q")
            out.push_back(FieldSpec::rationals());
        else
            out.push_back(FieldSpec::prime(std::stoull(f)));
    }
    return out;
}

std::vector<Rational> parse_rationals(const std::string& text)
{
    std::vector<Rational> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_rational(part));
    return out;
}

std::string utc_now()
{
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void emit_scalars(std::ostream& out, const Json& j, const std::string& prefix)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_primitive()) out << prefix << it.key() << ": " << it.value().dump() << "\n";
        else if (it.value().is_object() && prefix.size() < 4) {
            out << prefix << it.key() << ":\n";
            emit_scalars(out, it.value(), prefix + "  ");
        }
    }
}

int write_out(const Common& c, const std::string& text)
{
    if (c.output.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(c.output);
    if (!f) {
        std::cerr << "ncid: cannot write " << c.output << "\n";
        return 2;
    }
    f << text;
    return 0;
}

int finish(const Common& c, const std::string& command, const Json& config, const Json& report)
{
    const bool pass = report.value("pass", false);
    Json env{{"schema_version", kSchemaVersion},
             {"tool", {{"name", "ncid"}, {"version", kToolVersion}}},
             {"command", command},
             {"config", config},
             {"seed", c.seed},
             {"report", report},
             {"pass", pass}};
    if (!c.no_timestamp) env["timestamp"] = utc_now();
    std::string text;
    if (c.format == "text") {
        std::ostringstream out;
        out << "ncid " << command << ": " << (pass ? "PASS" : "FAIL") << "\n";
        emit_scalars(out, report, "  ");
        text = out.str();
    } else {
        text = env.dump(2) + "\n";
    }
    if (int rc = write_out(c, text)) return rc;
    if (!pass) std::cerr << "ncid " << command << ": check FAILED\n";
    if (report.contains("findings") && !report["findings"].empty())
        std::cerr << "FINDING: " << report["findings"].size() << " nonzero residual(s); see report.findings\n";
    return pass ? 0 : 1;
}

int run_suite_command(const Common& c, const std::string& criteria)
{
    SuiteOptions opts;
    opts.seed = c.seed;
    for (const auto& id : split(criteria, ',')) opts.only.push_back(std::stoi(id));
    std::vector<CriterionResult> results;
    std::vector<int> ids = opts.only;
    if (ids.empty())
        for (int i = 1; i <= kCriteria; ++i) ids.push_back(i);
    for (int id : ids) {
        results.push_back(run_criterion(id, opts, results));
        std::cerr << criterion_line(results.back()) << std::endl;
        for (const auto& f : results.back().findings) std::cerr << "  FINDING: " << f.dump() << "\n";
    }
    Json j = suite_json(results, opts, !c.no_timestamp);
    if (!c.no_timestamp) j["timestamp"] = utc_now();
    std::string text;
    if (c.format == "text") {
        for (const auto& r : results) text += criterion_line(r) + "\n";
    } else {
        text = j.dump(2) + "\n";
    }
    if (int rc = write_out(c, text)) return rc;
    return j["pass"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Noncommutative identity checks: characteristic series, flows, and birational dynamics"};
    app.set_config("--config", "", "key=value file; explicit flags take precedence");
    app.config_formatter(std::make_shared<CLI::ConfigINI>());
    app.require_subcommand(0, 1);
    app.fallthrough();

    Common c;
    bool suite = false;
    std::string criteria;
    app.add_flag("--paper-suite", suite, "Run the full acceptance battery");
    app.add_option("--criteria", criteria, "Comma list of criteria for --paper-suite");
    app.add_option("--seed", c.seed, "Base seed")->capture_default_str();
    app.add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.add_option("--output", c.output, "Write the report here instead of stdout");
    app.add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp and timing fields");

    CharpolyConfig cp;
    auto* charpoly = app.add_subcommand("charpoly", "Traces, P_a, necklace and closed-form checks, annihilator");
    charpoly->add_option("--expr", cp.expr, "Group-ring element, e.g. \"X+X^-1\"");
    charpoly->add_option("--family", cp.family, "plus-inverses or sum-plus-product-inverse")
        ->check(CLI::IsMember({"plus-inverses", "sum-plus-product-inverse"}));
    charpoly->add_option("--n", cp.n, "Generators for --family")->check(CLI::Range(1, 8))->capture_default_str();
    charpoly->add_option("--order", cp.order, "Series order N")->check(CLI::Range(1, 4000))->capture_default_str();
    charpoly->add_option("--max-deg-t", cp.max_deg_t)->capture_default_str();
    charpoly->add_option("--max-deg-s", cp.max_deg_s)->capture_default_str();
    charpoly->add_option("--margin", cp.margin)->capture_default_str();
    bool no_guess = false;
    charpoly->add_flag("--no-guess", no_guess, "Skip the annihilator search");

    GuessConfig gc;
    std::string series_text;
    auto* guess = app.add_subcommand("guess", "Annihilator search for a given series");
    guess->add_option("--series", series_text, "Comma-separated coefficients from t^0")->required();
    guess->add_option("--max-deg-t", gc.max_deg_t)->capture_default_str();
    guess->add_option("--max-deg-s", gc.max_deg_s)->capture_default_str();
    guess->add_option("--margin", gc.margin)->capture_default_str();

    FlowsConfig fc;
    auto* flows = app.add_subcommand("flows", "Shuffle derivations, the Catalan example, abelianization");
    flows->add_flag("--catalan", fc.catalan);
    flows->add_flag("--intertwine", fc.intertwine);
    flows->add_option("--delta", fc.delta, "log(<polynomial in x, y>)");
    flows->add_option("--order", fc.order)->check(CLI::Range(2, 14))->capture_default_str();
    flows->add_option("--max-degree", fc.max_degree)->check(CLI::Range(1, 9))->capture_default_str();
    flows->add_option("--bracket-cases", fc.bracket_cases)->capture_default_str();

    ZeroConfig zc;
    std::string zero_dims = "1,2,3", zero_fields;
    auto* zero = app.add_subcommand("zero", "Randomized identity test of a rational expression");
    zero->add_option("--expr", zc.expr)->required();
    zero->add_option("--group", zc.group, "Variables sampled invertible (default: all)")->delimiter(',');
    zero->add_option("--dims", zero_dims)->capture_default_str();
    zero->add_option("--fields", zero_fields, "e.g. Q,2147483647");
    zero->add_option("--trials", zc.schedule.trials)->capture_default_str();

    DynConfig dc;
    std::string dyn_fields, dyn_t;
    auto* dyn = app.add_subcommand("dyn", "Birational dynamics");
    dyn->require_subcommand(1);
    auto add_dyn = [&](const char* name, const char* help) {
        auto* s = dyn->add_subcommand(name, help);
        s->add_option("--d", dc.d, "Matrix dimension")->check(CLI::Range(1, 12))->capture_default_str();
        s->add_option("--trials", dc.trials)->capture_default_str();
        s->add_option("--fields", dyn_fields, "e.g. Q,2147483647");
        s->add_option("--t", dyn_t, "Spectral parameters, e.g. 1,2,3,5/7");
        s->add_option("--map", dc.map, "S1, S2, S-1, U3, ...")->capture_default_str();
        s->add_option("--steps", dc.steps)->check(CLI::Range(0, 12))->capture_default_str();
        return s;
    };
    auto* lax = add_dyn("lax", "Lax pair residual for S-1");
    auto* conj3 = add_dyn("conj3", "Period-three check of the normalized block map");
    auto* recover = add_dyn("recover", "Laurent recovery of the iterates");
    auto* growth = add_dyn("growth", "Expression and support growth along an orbit");
    auto* iterate = add_dyn("iterate", "Print the iterates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (suite) return run_suite_command(c, criteria);
        if (*charpoly) {
            if (cp.expr.empty() == cp.family.empty()) throw std::invalid_argument("give exactly one of --expr and --family");
            cp.guess = !no_guess;
            Json cfg{{"expr", cp.expr}, {"family", cp.family}, {"n", cp.n}, {"order", cp.order}, {"max_deg_t", cp.max_deg_t},
                     {"max_deg_s", cp.max_deg_s}, {"margin", cp.margin}, {"guess", cp.guess}};
            return finish(c, "charpoly", cfg, charpoly_report(cp));
        }
        if (*guess) {
            gc.coefficients = parse_rationals(series_text);
            Json cfg{{"series", series_text}, {"max_deg_t", gc.max_deg_t}, {"max_deg_s", gc.max_deg_s}, {"margin", gc.margin}};
            return finish(c, "guess", cfg, guess_report(gc));
        }
        if (*flows) {
            fc.seed = c.seed;
            Json cfg{{"catalan", fc.catalan}, {"intertwine", fc.intertwine}, {"delta", fc.delta}, {"order", fc.order},
                     {"max_degree", fc.max_degree}, {"bracket_cases", fc.bracket_cases}};
            return finish(c, "flows", cfg, flows_report(fc));
        }
        if (*zero) {
            for (const auto& d : split(zero_dims, ',')) zc.schedule.dims.push_back(std::stoul(d));
            zc.schedule.fields = zero_fields.empty() ? default_fields() : parse_fields(zero_fields);
            zc.schedule.seed = c.seed;
            Json cfg{{"expr", zc.expr}, {"group", zc.group}, {"dims", zero_dims}, {"trials", zc.schedule.trials}};
            return finish(c, "zero", cfg, zero_report(zc));
        }
        if (*dyn) {
            dc.seed = c.seed;
            if (!dyn_fields.empty()) dc.fields = parse_fields(dyn_fields);
            if (!dyn_t.empty()) dc.t_values = parse_rationals(dyn_t);
            Json tv = Json::array();
            for (const auto& t : dc.t_values) tv.push_back(to_string(t));
            Json cfg{{"d", dc.d}, {"trials", dc.trials}, {"fields", dyn_fields}, {"t", tv}, {"map", dc.map}, {"steps", dc.steps},
                     {"primes", default_primes()}};
            if (*lax) return finish(c, "dyn lax", cfg, lax_report(dc));
            if (*conj3) return finish(c, "dyn conj3", cfg, conj3_report(dc));
            if (*recover) return finish(c, "dyn recover", cfg, recover_report(dc));
            if (*growth) return finish(c, "dyn growth", cfg, growth_report(dc));
            if (*iterate) return finish(c, "dyn iterate", cfg, iterate_report(dc));
        }
        std::cerr << app.help();
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "ncid: parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "ncid: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ncid: " << e.what() << "\n";
        return 1;
    }
}
