#include "ncid/report.hpp"
#include "ncid/suite.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ncid;

namespace {

std::vector<std::string> series_strings(const ScalarSeries& s)
{
    std::vector<std::string> out;
    for (const auto& c : s.coefficients()) out.push_back(to_string(c));
    return out;
}

NCPoly parse_element(const std::string& text)
{
    ExprPool pool;
    return to_ncpoly(pool, parse_scalar_expr(pool, text));
}

std::vector<FieldSpec> fields_from(const std::vector<std::string>& names)
{
    std::vector<FieldSpec> out;
    for (const auto& f : names) out.push_back(f == "Q" ? FieldSpec::rationals() : FieldSpec::prime(std::stoull(f)));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "ncid native core; reports are returned as JSON text";
    m.attr("version") = kToolVersion;
    m.attr("schema_version") = kSchemaVersion;

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("char_series", [](const std::string& expr, std::size_t order) { return series_strings(char_series(parse_element(expr), order)); },
          py::arg("expr"), py::arg("order"));
    m.def("necklace_product", [](const std::string& expr, std::size_t order) { return series_strings(necklace_product(parse_element(expr), order)); },
          py::arg("expr"), py::arg("order"));
    m.def("walk_traces", [](const std::string& expr, std::size_t k) {
        std::vector<std::string> out;
        for (const auto& c : walk_traces(parse_element(expr), k)) out.push_back(to_string(c));
        return out;
    }, py::arg("expr"), py::arg("k"));
    m.def("normalize_expr", [](const std::string& text) {
        ExprPool pool;
        return print_expr(pool, parse_scalar_expr(pool, text));
    }, py::arg("text"));

    m.def("charpoly_report", [](const std::string& expr, const std::string& family, int n, std::size_t order, int max_deg_t,
                                int max_deg_s, bool guess) {
        CharpolyConfig c;
        c.expr = expr;
        c.family = family;
        c.n = n;
        c.order = order;
        c.max_deg_t = max_deg_t;
        c.max_deg_s = max_deg_s;
        c.guess = guess;
        return charpoly_report(c).dump();
    }, py::arg("expr") = "", py::arg("family") = "", py::arg("n") = 1, py::arg("order") = 12, py::arg("max_deg_t") = 4,
       py::arg("max_deg_s") = 4, py::arg("guess") = true);

    m.def("guess_report", [](const std::vector<std::string>& series, int max_deg_t, int max_deg_s, std::size_t margin) {
        GuessConfig c;
        for (const auto& s : series) c.coefficients.push_back(parse_rational(s));
        c.max_deg_t = max_deg_t;
        c.max_deg_s = max_deg_s;
        c.margin = margin;
        return guess_report(c).dump();
    }, py::arg("series"), py::arg("max_deg_t") = 4, py::arg("max_deg_s") = 4, py::arg("margin") = 15);

    m.def("zero_report", [](const std::string& expr, const std::vector<std::size_t>& dims, std::size_t trials, u64 seed,
                            const std::vector<std::string>& fields) {
        ZeroConfig c;
        c.expr = expr;
        c.schedule.dims = dims;
        c.schedule.trials = trials;
        c.schedule.seed = seed;
        c.schedule.fields = fields.empty() ? default_fields() : fields_from(fields);
        return zero_report(c).dump();
    }, py::arg("expr"), py::arg("dims") = std::vector<std::size_t>{1, 2, 3}, py::arg("trials") = 5, py::arg("seed") = 42,
       py::arg("fields") = std::vector<std::string>{});

    m.def("dyn_report", [](const std::string& kind, const std::string& map, std::size_t steps, std::size_t d, std::size_t trials,
                           u64 seed, const std::vector<std::string>& fields) {
        DynConfig c;
        c.map = map;
        c.steps = steps;
        c.d = d;
        c.trials = trials;
        c.seed = seed;
        c.fields = fields_from(fields);
        if (kind == "lax") return lax_report(c).dump();
        if (kind == "conj3") return conj3_report(c).dump();
        if (kind == "recover") return recover_report(c).dump();
        if (kind == "growth") return growth_report(c).dump();
        if (kind == "iterate") return iterate_report(c).dump();
        throw std::invalid_argument("unknown dyn report " + kind);
    }, py::arg("kind"), py::arg("map") = "S1", py::arg("steps") = 3, py::arg("d") = 1, py::arg("trials") = 20,
       py::arg("seed") = 1, py::arg("fields") = std::vector<std::string>{});

    m.def("run_criteria", [](const std::vector<int>& ids, u64 seed) {
        SuiteOptions o;
        o.seed = seed;
        o.only = ids;
        std::vector<CriterionResult> results;
        for (int id : ids) results.push_back(run_criterion(id, o, results));
        return suite_json(results, o, false).dump();
    }, py::arg("ids"), py::arg("seed") = 42);
}
