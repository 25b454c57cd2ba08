#include "ncid/report.hpp"

#include <algorithm>
#include <set>

namespace ncid {

u64 SeededRng::next()
{
    u64 z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Json rational_json(const Rational& q)
{
    if (is_integer(q) && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return to_string(q);
}

Json series_json(const ScalarSeries& s)
{
    Json out = Json::array();
    for (const Rational& c : s.coefficients()) out.push_back(rational_json(c));
    return out;
}

Json annihilator_json(const AnnihilatorPoly& q)
{
    Json entries = Json::array();
    for (const auto& [i, j, c] : q.entries()) entries.push_back({i, j, rational_json(c)});
    return {{"degT", q.deg_t}, {"degS", q.deg_s}, {"annihilator", entries}, {"text", q.to_string()},
            {"margin", q.margin}, {"used", q.used}, {"verified", q.verified}};
}

Json support_json(const NCPoly& p, const Alphabet& alphabet)
{
    Json out = Json::array();
    for (const auto& [w, c] : p.terms()) out.push_back({w.to_string(alphabet), rational_json(c)});
    return out;
}

Json comm_poly_json(const CommPoly& p)
{
    Json out = Json::array();
    for (const auto& [e, c] : p) out.push_back({e, rational_json(c)});
    return out;
}

CommPoly parse_comm_poly(std::string_view text)
{
    ExprPool pool(Alphabet({"x", "y"}));
    ExprId e = parse_scalar_expr(pool, text);
    if (pool.names().size() > 2) throw std::invalid_argument("only the variables x and y are allowed");
    CommPoly p = abelianize(to_ncpoly(pool, e), 2);
    for (const auto& [exp, c] : p)
        if (exp[0] < 0 || exp[1] < 0) throw std::invalid_argument("negative exponents are not allowed here");
    return p;
}

std::string comm_poly_string(const CommPoly& p)
{
    if (p.empty()) return "0";
    std::vector<std::pair<std::vector<int>, Rational>> terms(p.begin(), p.end());
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        return a.first[0] + a.first[1] < b.first[0] + b.first[1];
    });
    std::string out;
    for (const auto& [e, c] : terms) {
        std::string mono;
        const char* names[] = {"x", "y"};
        for (int v = 0; v < 2; ++v) {
            if (e[v] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += names[v];
            if (e[v] > 1) mono += "^" + std::to_string(e[v]);
        }
        Rational a = abs(c);
        std::string coef = mono.empty() ? to_string(a) : a == 1 ? "" : to_string(a) + "*";
        if (out.empty())
            out = (c < 0 ? "-" : "") + coef + mono;
        else
            out += (c < 0 ? " - " : " + ") + coef + mono;
    }
    return out;
}

std::vector<FieldSpec> default_fields(bool with_rationals)
{
    std::vector<FieldSpec> out;
    if (with_rationals) out.push_back(FieldSpec::rationals());
    auto primes = default_primes();
    for (std::size_t i = 0; i < 2 && i < primes.size(); ++i) out.push_back(FieldSpec::prime(primes[i]));
    return out;
}

namespace {

Json fields_json(const std::vector<FieldSpec>& fields)
{
    Json out = Json::array();
    for (const auto& f : fields) out.push_back(f.to_string());
    return out;
}

Json rationals_json(const std::vector<Rational>& v)
{
    Json out = Json::array();
    for (const auto& q : v) out.push_back(rational_json(q));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Json charpoly_report(const CharpolyConfig& cfg)
{
    NCPoly a;
    Alphabet alphabet;
    std::string input;
    bool plus_family = false;
    if (cfg.family == "plus-inverses") {
        a = plus_inverses(cfg.n);
        alphabet = Alphabet::indexed(cfg.n);
        plus_family = true;
    } else if (cfg.family == "sum-plus-product-inverse") {
        a = sum_plus_product_inverse(cfg.n);
        alphabet = Alphabet::indexed(cfg.n);
    } else if (!cfg.family.empty()) {
        throw std::invalid_argument("unknown family " + cfg.family);
    } else {
        ExprPool pool;
        ExprId e = parse_scalar_expr(pool, cfg.expr);
        a = to_ncpoly(pool, e);
        alphabet = pool.names();
        int g = a.generator_bound();
        plus_family = g > 0 && a == plus_inverses(g);
    }
    input = a.to_string(alphabet);

    auto traces = walk_traces(a, cfg.order);
    ScalarSeries P = char_series_from_traces(traces, cfg.order);
    Json r;
    r["input"] = input;
    r["N"] = cfg.order;
    r["traces"] = rationals_json(traces);
    r["P_coefficients"] = series_json(P);
    r["integer_coefficients"] = P.has_integer_coefficients();

    bool pass = true;
    if (a.has_integer_coefficients()) {
        try {
            NecklaceStats st;
            bool match = necklace_product(a, cfg.order, 50'000'000, &st) == P;
            r["necklace_match"] = match;
            r["necklace_factors"] = st.factors;
            pass = pass && match;
        } catch (const BudgetExceeded&) {
            r["necklace_match"] = nullptr;
            r["necklace_note"] = "node budget exceeded";
        }
    } else {
        r["necklace_match"] = nullptr;
    }
    if (plus_family) {
        int n = a.generator_bound();
        bool match = closed_form_plus_inverses(n, cfg.order) == P;
        r["closed_form_match"] = match;
        pass = pass && match;
    } else {
        r["closed_form_match"] = nullptr;
    }
    if (cfg.guess) {
        auto comp = compress(P);
        Json g;
        g["series_id"] = "P_a";
        g["variable"] = comp.step <= 1 ? "t" : "z = t^" + std::to_string(comp.step);
        g["step"] = comp.step;
        GuessSearch s = search_annihilator(comp.series, cfg.max_deg_t, cfg.max_deg_s, cfg.margin);
        g["pairs_tried"] = s.pairs_tried;
        g["pairs_skipped"] = s.pairs_skipped;
        g["found"] = s.found.has_value();
        if (s.found) g.update(annihilator_json(*s.found));
        r["guess"] = g;
    }
    r["pass"] = pass;
    return r;
}

Json guess_report(const GuessConfig& cfg)
{
    ScalarSeries s(cfg.coefficients);
    auto comp = compress(s);
    GuessSearch g = search_annihilator(comp.series, cfg.max_deg_t, cfg.max_deg_s, cfg.margin);
    Json r;
    r["series_id"] = cfg.series_id;
    r["N"] = cfg.coefficients.size();
    r["step"] = comp.step;
    r["pairs_tried"] = g.pairs_tried;
    r["pairs_skipped"] = g.pairs_skipped;
    r["found"] = g.found.has_value();
    if (g.found) r.update(annihilator_json(*g.found));
    r["pass"] = g.found.has_value();
    return r;
}

Json flows_report(const FlowsConfig& cfg)
{
    const bool all = !cfg.catalan && !cfg.intertwine && cfg.delta.empty();
    Json r;
    bool pass = true;
    r["N"] = cfg.order;
    if (all || cfg.intertwine) {
        Json bad = Json::array();
        std::size_t checked = 0;
        for (int n = 0; n < cfg.max_degree; ++n)
            for (int m = 1; n + m <= cfg.max_degree; ++m, ++checked)
                if (!check_intertwine(n, m).is_zero()) bad.push_back({n, m});
        std::vector<std::pair<int, int>> idx;
        for (int n = 0; n < cfg.max_degree; ++n)
            for (int m = 1; n + m <= cfg.max_degree; ++m) idx.push_back({n, m});
        SeededRng rng(mix_seed(cfg.seed, 0xb4ac));
        std::size_t bracket_bad = 0;
        for (std::size_t k = 0; k < cfg.bracket_cases && !idx.empty(); ++k) {
            auto i1 = idx[rng.below(idx.size())], i2 = idx[rng.below(idx.size())];
            NCPolyBuilder b;
            for (int t = 0, terms = static_cast<int>(1 + rng.below(3)); t < terms; ++t) {
                std::vector<Letter> raw;
                for (u64 len = rng.below(4); raw.size() < len;) raw.push_back({static_cast<int>(rng.below(2)), 1});
                b.add(Word::reduce(raw), rng.range(1, 2));
            }
            if (!bracket_residual(i1, i2, b.finish(), 10).is_zero()) ++bracket_bad;
        }
        r["intertwine"] = {{"max_degree", cfg.max_degree}, {"checked", checked}, {"nonzero", bad},
                           {"bracket_cases", cfg.bracket_cases}, {"bracket_order", 10}, {"bracket_nonzero", bracket_bad}};
        r["intertwine_ok"] = bad.empty() && bracket_bad == 0;
        pass = pass && r["intertwine_ok"].get<bool>();
    }
    if (all || cfg.catalan) {
        ConjugationReport c = verify_conjugation(cfg.order);
        r["catalan"] = {{"conjugation_residual_zero", c.residual.is_zero()},
                        {"catalan_residual_zero", c.catalan_residual.is_zero()},
                        {"quadratic_residual_zero", c.quadratic_residual.is_zero()},
                        {"literal_sign_residual_zero", c.literal_sign_residual.is_zero()}};
        r["conjugation_residual_zero"] = c.zero();
        pass = pass && c.zero();
    }
    if (all || !cfg.delta.empty()) {
        std::string text = cfg.delta.empty() ? "log(1-x*y)" : cfg.delta;
        if (text.size() < 5 || text.substr(0, 4) != "log(" || text.back() != ')')
            throw std::invalid_argument("--delta expects log(<polynomial in x, y>)");
        CommPoly P = parse_comm_poly(std::string_view(text).substr(4, text.size() - 5));
        DeltaSpec spec = DeltaSpec::from_series(series_log(BiSeries::from_poly(P, cfg.order)));
        TruncSeries R = evaluate_tau(integrate_R(spec, cfg.order), 1);
        bool abelian = abelianize(R) == binomial_transform(P, cfg.order);
        Json d;
        d["delta_spec"] = text;
        d["P"] = comm_poly_string(P);
        d["abelian_ok"] = abelian;
        const CommPoly one_minus_xy{{{0, 0}, 1}, {{1, 1}, -1}};
        if (P == one_minus_xy) {
            bool match = R == catalan_R(cfg.order);
            d["R_matches_closed_form"] = match;
            d["closed_form"] = "1 - YX - C";
            pass = pass && match;
        } else {
            d["R_matches_closed_form"] = nullptr;
        }
        if (R.order() <= 6) d["R"] = R.to_string();
        r["delta"] = d;
        r["abelian_ok"] = abelian;
        pass = pass && abelian;
    }
    r["pass"] = pass;
    return r;
}

Json zero_report(const ZeroConfig& cfg)
{
    ExprPool pool;
    ExprId e = parse_scalar_expr(pool, cfg.expr);
    std::vector<bool> group(static_cast<std::size_t>(pool.names().size()), cfg.group.empty());
    for (const auto& name : cfg.group) {
        int i = pool.names().find(name);
        if (i < 0) throw std::invalid_argument("unknown variable " + name);
        group[static_cast<std::size_t>(i)] = true;
    }
    ZeroVerdict v = prove_zero(pool, e, cfg.schedule, group);
    Json r;
    r["expr"] = print_expr(pool, e);
    r["expr_hash"] = pool.structural_hash(e);
    Json dims = Json::array();
    for (auto d : cfg.schedule.dims) dims.push_back(d);
    r["schedule"] = {{"dims", dims}, {"fields", fields_json(cfg.schedule.fields)}, {"trials", cfg.schedule.trials},
                     {"seed", cfg.schedule.seed}};
    r["verdict"] = v.kind_name();
    r["evaluations"] = v.evaluations;
    r["singular"] = v.singular;
    r["singular_rate"] = v.singular_rate();
    if (v.kind == ZeroVerdict::Kind::nonzero)
        r["witness"] = {{"d", v.witness_d}, {"field", v.witness_field.to_string()}, {"seed", v.witness_seed}};
    r["pass"] = v.kind == ZeroVerdict::Kind::zero_evidence;
    return r;
}

// ---------------------------------------------------------------------------

Json lax_report(const DynConfig& cfg)
{
    auto fields = cfg.fields.empty() ? default_fields() : cfg.fields;
    Json runs = Json::array();
    bool pass = true;
    std::size_t evals = 0, singular = 0;
    for (const auto& f : fields) {
        LaxReport rep = lax_residual(cfg.d, f, cfg.t_values, cfg.trials, cfg.seed);
        Json j{{"field", f.to_string()},   {"evaluations", rep.evaluations}, {"singular", rep.singular},
               {"nonzero", rep.nonzero}, {"spectrum_mismatch", rep.spectrum_mismatch},
               {"verdict", rep.zero() ? "zero-evidence" : "nonzero"}};
        if (!rep.zero()) j["witness"] = {{"seed", rep.witness_seed}, {"t", rational_json(rep.witness_t)}};
        runs.push_back(j);
        pass = pass && rep.zero();
        evals += rep.evaluations;
        singular += rep.singular;
    }
    Json r;
    r["map"] = "S-1";
    r["params"] = {{"d", cfg.d}, {"t", rationals_json(cfg.t_values)}, {"trials", cfg.trials}};
    r["schedule"] = {{"fields", fields_json(fields)}, {"seed", cfg.seed}};
    r["residuals"] = runs;
    r["verdict"] = pass ? "zero-evidence" : "nonzero";
    r["degeneracy_rate"] = evals + singular ? static_cast<double>(singular) / static_cast<double>(evals + singular) : 0.0;
    r["pass"] = pass;
    return r;
}

Json conj3_report(const DynConfig& cfg)
{
    auto fields = cfg.fields;
    if (fields.empty()) fields = cfg.d == 1 ? std::vector<FieldSpec>{FieldSpec::rationals()} : default_fields(false);
    Json runs = Json::array(), findings = Json::array();
    bool sanity = true, residuals = true;
    for (const auto& f : fields) {
        ConjectureReport rep = conjecture1_period_check(cfg.d, f, cfg.trials, cfg.seed);
        Json trials = Json::array();
        for (std::size_t i = 0; i < rep.trials.size(); ++i) {
            const auto& t = rep.trials[i];
            trials.push_back({{"index", i},
                              {"seed", t.seed},
                              {"resamples", t.resamples},
                              {"degenerate", t.degenerate},
                              {"residual_zero", t.residual_zero},
                              {"naive_zero", t.naive_zero},
                              {"naive_nonzero_entries", t.naive_nonzero_entries},
                              {"involutions_ok", t.involutions_ok},
                              {"F_identity", t.F_identity},
                              {"F2_identity", t.F2_identity}});
            if (!t.degenerate && !t.residual_zero)
                findings.push_back({{"field", f.to_string()}, {"d", cfg.d}, {"trial", i}, {"seed", t.seed},
                                    {"what", "normalized F^3 M differs from normalized M beyond simultaneous conjugation"}});
        }
        bool ok = rep.involutions_ok() && rep.nontrivial_rate() >= 0.9 && rep.degeneracy_rate() < 0.5 && rep.nondegenerate() > 0;
        runs.push_back({{"field", f.to_string()},
                        {"trials", trials},
                        {"nondegenerate", rep.nondegenerate()},
                        {"degenerate", rep.degenerate()},
                        {"degeneracy_rate", rep.degeneracy_rate()},
                        {"residual_zero", rep.residual_zero()},
                        {"naive_zero", rep.naive_zero()},
                        {"involutions_ok", rep.involutions_ok()},
                        {"nontrivial_rate", rep.nontrivial_rate()},
                        {"sanity_ok", ok}});
        sanity = sanity && ok;
        residuals = residuals && rep.residual_zero() == rep.nondegenerate();
    }
    Json r;
    r["params"] = {{"d", cfg.d}, {"trials", cfg.trials}};
    r["schedule"] = {{"fields", fields_json(fields)}, {"seed", cfg.seed}};
    r["residuals"] = runs;
    r["residual_definition"] = cfg.d == 1 ? "exact equality" : "equality up to simultaneous conjugation of all blocks";
    r["findings"] = findings;
    r["verdict"] = residuals ? "zero-evidence" : "nonzero";
    r["sanity_pass"] = sanity;
    r["pass"] = sanity && residuals;
    return r;
}

Json candidate_json(const LaurentCandidate& c)
{
    std::set<Rational> coefs;
    for (const auto& t : c.poly.terms()) coefs.insert(t.second);
    Json coefficient_set = Json::array();
    for (const auto& q : coefs) coefficient_set.push_back(rational_json(q));
    Json samples = Json::array();
    for (const auto& s : c.samples) samples.push_back({{"d", s.d}, {"p", s.p}, {"seed", s.seed}, {"zero", s.zero}});
    Json j{{"status", c.status_name()},
           {"L", c.L},
           {"basis", c.basis_source},
           {"unknowns", c.unknowns},
           {"solve_d", c.solve_d},
           {"min_full_rank_d", c.min_full_rank_d},
           {"solved", c.solved},
           {"verified", c.verified},
           {"rational_check", c.rational_ok},
           {"support_size", c.poly.size()},
           {"degree", c.poly.degree()},
           {"coefficient_set", coefficient_set},
           {"samples", samples}};
    if (!c.note.empty()) j["note"] = c.note;
    j["support"] = support_json(c.poly, c.alphabet);
    return j;
}

Json recover_report(const DynConfig& cfg)
{
    MapSpec spec = MapSpec::parse(cfg.map);
    ExprPool pool(spec.alphabet());
    auto states = iterate_map(pool, spec, cfg.steps);
    RecoverOptions opts;
    opts.seed = cfg.seed;
    Json iterates = Json::array();
    bool pass = true, unit = true, integral = true;
    for (std::size_t s = 1; s < states.size(); ++s)
        for (std::size_t k = 0; k < states[s].size(); ++k) {
            ExprId e = states[s][k];
            LaurentCandidate c = recover_iterate(pool, e, pool.names(), opts);
            bool in01 = c.ok() && coefficient_set_check(c, {0, 1}).ok;
            bool ints = c.ok() && integer_coefficient_check(c).ok;
            Json j = candidate_json(c);
            j["step"] = s;
            j["component"] = k;
            j["target_hash"] = pool.structural_hash(e);
            j["dag_size"] = pool.dag_size(e);
            j["coefficients_in_01"] = in01;
            j["integer_coefficients"] = ints;
            iterates.push_back(j);
            pass = pass && c.ok();
            unit = unit && in01;
            integral = integral && ints;
        }
    Json r;
    r["map"] = spec.name();
    r["params"] = {{"steps", cfg.steps}};
    r["schedule"] = {{"primes", default_primes()}, {"seed", cfg.seed}};
    r["iterates"] = iterates;
    r["all_recovered"] = pass;
    r["coefficients_in_01"] = unit;
    r["integer_coefficients"] = integral;
    r["pass"] = pass && integral && (spec.kind == MapSpec::Kind::U || unit);
    return r;
}

Json growth_report(const DynConfig& cfg)
{
    MapSpec spec = MapSpec::parse(cfg.map);
    OrbitReport rep = growth_probe(spec, cfg.steps, {}, cfg.seed);
    Json growth = Json::array();
    bool ok = true;
    for (const auto& it : rep.iterates) {
        Json rec = Json::array();
        for (bool b : it.recovered) rec.push_back(b);
        growth.push_back({{"step", it.step}, {"dag_sizes", it.dag_sizes}, {"support", it.support}, {"degree", it.degree},
                          {"expanded", rec}, {"recursion_ok", it.recursion_ok}});
        ok = ok && it.recursion_ok;
    }
    Json r;
    r["map"] = spec.name();
    r["params"] = {{"steps", cfg.steps}};
    r["schedule"] = {{"seed", cfg.seed}};
    r["growth"] = growth;
    r["pass"] = ok;
    return r;
}

Json iterate_report(const DynConfig& cfg)
{
    MapSpec spec = MapSpec::parse(cfg.map);
    ExprPool pool(spec.alphabet());
    auto states = iterate_map(pool, spec, cfg.steps);
    Json out = Json::array();
    for (std::size_t s = 0; s < states.size(); ++s) {
        Json comps = Json::array();
        for (ExprId e : states[s]) {
            Json c{{"dag_size", pool.dag_size(e)}, {"hash", pool.structural_hash(e)}};
            if (pool.dag_size(e) <= 60) c["expr"] = print_expr(pool, e);
            comps.push_back(c);
        }
        out.push_back({{"step", s}, {"components", comps}});
    }
    Json r;
    r["map"] = spec.name();
    r["params"] = {{"steps", cfg.steps}};
    r["iterates"] = out;
    r["pass"] = true;
    return r;
}

}  // namespace ncid
