#ifndef FROBSET_REPORT_HPP
#define FROBSET_REPORT_HPP

// Running a scenario and rendering the result as a JSON report.  The
// canonical section holds the echoed scenario, the results and the status
// and is reproducible byte for byte; timing lives beside it.

#include "drinfeld.hpp"
#include "gmdemo.hpp"
#include "orbitgamma.hpp"
#include "scenario.hpp"

#include <json.hpp>

#include <chrono>

namespace frobset {

using Json = nlohmann::json;

/// Command-line settings that replace scenario solver keys.
struct Overrides {
    std::optional<std::int64_t> nmax;
    std::optional<std::vector<std::int64_t>> sieve;
    std::optional<std::int64_t> box;
};

inline void apply_overrides(Scenario& sc, const Overrides& o)
{
    const bool has_solver = detail::schemas().at(sc.kind).count("solver") > 0;
    auto need = [&](const char* flag) {
        if (!has_solver)
            throw InputError(std::string(flag) + " does not apply to scenarios of kind " + sc.kind);
    };
    if (o.nmax) {
        need("--nmax");
        sc.set("solver", "nmax", Value::of(*o.nmax));
    }
    if (o.sieve) {
        need("--sieve");
        sc.set("solver", "sieve", Value::int_list(*o.sieve));
    }
    if (o.box) {
        need("--box");
        sc.set("solver", "box", Value::of(*o.box));
    }
    validate_scenario(sc);
}

namespace report {

inline Json integer(const BigInt& x)
{
    if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(x);
    return x.str();
}

inline Json vector(const IntVector& v)
{
    Json a = Json::array();
    for (const auto& x : v)
        a.push_back(integer(x));
    return a;
}

inline Json tuple(const ExpTuple& t) { return Json(t); }

inline Json columns(const IntMatrix& m)
{
    Json a = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
        a.push_back(vector(m.column(j)));
    return a;
}

inline Json coset(const BoundedLatticeCoset& c)
{
    return Json{{"offset", vector(c.offset)}, {"lattice", columns(c.lattice)}, {"lower", vector(c.lower)}};
}

inline Json exponent_set(const ExponentSet& e)
{
    Json t = Json::array(), c = Json::array();
    for (const auto& x : e.tuples())
        t.push_back(tuple(x));
    for (const auto& x : e.cosets())
        c.push_back(coset(x));
    return Json{{"dim", e.dim()}, {"tuples", t}, {"cosets", c}};
}

inline Json fset(const GrouplessFSet& s)
{
    Json terms = Json::array();
    for (const auto& t : s.terms)
        terms.push_back(Json{{"point", t.a.str()}, {"delta", t.delta}});
    return Json{{"base", s.base.str()}, {"terms", terms}, {"text", s.str()}};
}

inline Json status(const CompletenessStatus& s)
{
    Json excluded = Json::array(), open = Json::array();
    for (const auto& e : s.excluded) {
        Json cls = Json::array();
        for (const auto& c : e.classes)
            cls.push_back(c.str());
        excluded.push_back(Json{{"classes", cls}, {"modulus", e.modulus}});
    }
    for (const auto& o : s.open) {
        Json cls = Json::array();
        for (const auto& c : o)
            cls.push_back(c.str());
        open.push_back(cls);
    }
    return Json{{"tag", s.tag()},         {"complete", s.complete}, {"n_max", s.n_max},
                {"excluded", excluded},   {"excluded_total", s.excluded_total},
                {"open", open},           {"open_total", s.open_total},
                {"notes", s.notes}};
}

/// Status of an exhaustive search inside a finite box.
inline Json box_status(const std::string& what, std::int64_t bound)
{
    return Json{{"tag", "bounded"},
                {"complete", false},
                {"bound", bound},
                {"notes", Json::array({"exhaustive for " + what + " up to " + std::to_string(bound)})}};
}

inline Json axiom(const AxiomCheck& a) { return Json{{"ok", a.ok}, {"detail", a.detail}}; }

inline Json validation(const ValidationReport& r)
{
    Json factors = Json::array();
    for (const auto& f : r.charpoly_factors)
        factors.push_back(poly_to_string(f));
    Json chain = Json::array();
    for (const auto& x : r.chain.shortest)
        chain.push_back(x ? integer(*x) : Json(nullptr));
    return Json{{"integrality", axiom(r.integrality)},
                {"zero_divisor", axiom(r.zero_divisor)},
                {"separatedness", axiom(r.separatedness)},
                {"charpoly_factors", factors},
                {"image_chain", Json{{"box", r.chain.box}, {"shortest", chain}, {"certified", r.chain.certified}}},
                {"all_ok", r.all_ok()}};
}

inline Json gm_point(const GmPoint& x)
{
    Json a = Json::array();
    for (const auto& c : x)
        a.push_back(c.str());
    return a;
}

} // namespace report

namespace build {

inline IntMatrix matrix(const Value& v, std::size_t rows, std::size_t cols, const std::string& what)
{
    if (v.items().size() != rows)
        throw InputError(what + " must have " + std::to_string(rows) + " rows");
    std::vector<IntVector> r;
    for (const auto& row : v.items()) {
        if (row.items().size() != cols)
            throw InputError(what + " must have " + std::to_string(cols) + " columns");
        r.push_back(as_big_list(row));
    }
    return IntMatrix::from_rows(r, cols);
}

inline FgModule module(const Section& s)
{
    const std::int64_t m = as_int64(s.at("free_rank"), "free_rank");
    if (m < 0)
        throw InputError("free_rank must be >= 0");
    const auto mu = static_cast<std::size_t>(m);
    std::vector<std::int64_t> d;
    if (const Value* t = s.find("torsion"))
        d = as_int64_list(*t, "torsion order");
    const std::size_t st = d.size();
    if (mu > 0 && !s.find("a_ff"))
        throw InputError("missing required key 'a_ff' in section [module] (free_rank > 0)");
    if (st > 0 && !s.find("a_tt"))
        throw InputError("missing required key 'a_tt' in section [module] (torsion given)");
    IntMatrix ff = s.find("a_ff") ? matrix(s.at("a_ff"), mu, mu, "a_ff") : IntMatrix(0, 0);
    IntMatrix tf = s.find("a_tf") ? matrix(s.at("a_tf"), st, mu, "a_tf") : IntMatrix(st, mu);
    IntMatrix tt = s.find("a_tt") ? matrix(s.at("a_tt"), st, st, "a_tt") : IntMatrix(st, st);
    std::optional<IntPoly> f;
    if (const Value* v = s.find("minpoly"))
        f = as_big_list(*v);
    return FgModule::make(mu, d, ff, tf, tt, f);
}

inline ModElement element(const FgModule& mod, const Value& v)
{
    IntVector free = as_big_list(Value::list(v.groups[0]));
    std::vector<std::int64_t> tors;
    if (v.groups.size() > 1)
        tors = as_int64_list(Value::list(v.groups[1]), "torsion coordinate");
    if (free.size() != mod.free_rank() || tors.size() != mod.torsion_rank())
        throw InputError("element " + v.str() + " does not fit a module with free rank " +
                         std::to_string(mod.free_rank()) + " and torsion rank " + std::to_string(mod.torsion_rank()));
    return mod.element(free, tors);
}

inline std::vector<ModElement> elements(const FgModule& mod, const Value& v)
{
    std::vector<ModElement> out;
    for (const auto& x : v.items())
        out.push_back(element(mod, x));
    return out;
}

inline std::vector<FSetTerm> terms(const FgModule& mod, const Section& s)
{
    auto pts = elements(mod, s.at("points"));
    std::vector<std::int64_t> deltas(pts.size(), 1);
    if (const Value* d = s.find("deltas")) {
        deltas = as_int64_list(*d, "delta");
        if (deltas.size() != pts.size())
            throw InputError("deltas must have one entry per point in section [" + s.name + "]");
    }
    std::vector<FSetTerm> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        out.push_back(FSetTerm{pts[i], deltas[i]});
    return out;
}

inline SolverParams solver(const Scenario& sc)
{
    SolverParams p;
    if (const Section* s = sc.section("solver")) {
        if (const Value* v = s->find("nmax"))
            p.n_max = as_int64(*v, "nmax");
        if (const Value* v = s->find("sieve"))
            p.sieve_moduli = as_int64_list(*v, "sieve modulus");
        if (const Value* v = s->find("max_tie_shift"))
            p.max_tie_shift = as_int64(*v, "max_tie_shift");
        if (const Value* v = s->find("max_search"))
            p.max_search = as_int64(*v, "max_search");
        if (const Value* v = s->find("max_table"))
            p.max_table = as_int64(*v, "max_table");
    }
    if (p.n_max < 0)
        throw InputError("nmax must be >= 0");
    for (auto m : p.sieve_moduli)
        if (m < 2)
            throw InputError("sieve moduli must be >= 2");
    return p;
}

inline std::optional<std::int64_t> box(const Scenario& sc)
{
    if (const Section* s = sc.section("solver"))
        if (const Value* v = s->find("box")) {
            std::int64_t b = as_int64(*v, "box");
            if (b < 0)
                throw InputError("box must be >= 0");
            return b;
        }
    return std::nullopt;
}

inline const FiniteField& field(const Section* s, std::int64_t default_order)
{
    std::int64_t order = s ? as_int64(s->at("order"), "field order") : default_order;
    auto pp = prime_power(order);
    if (!pp)
        throw InputError("field order " + std::to_string(order) + " is not a prime power");
    if (s && s->find("modulus")) {
        const FiniteField& f = FiniteField::with_modulus(pp->first, as_int64_list(s->at("modulus"), "modulus"));
        if (f.order() != order)
            throw InputError("field modulus has the wrong degree for order " + std::to_string(order));
        return f;
    }
    return FiniteField::of_order(order);
}

inline FqPoly poly(const FiniteField& f, const Value& v)
{
    std::vector<FqElem> c;
    for (auto code : as_int64_list(v, "field element code")) {
        if (code < 0 || code >= f.order())
            throw InputError("field element code " + std::to_string(code) + " outside [0, " +
                             std::to_string(f.order()) + ")");
        c.push_back(FqElem::from_code(f, code));
    }
    return FqPoly(f, c);
}

inline FqRat rat(const FiniteField& f, const Value& v)
{
    if (v.kind != Value::Kind::Fraction)
        return FqRat(poly(f, v));
    FqPoly den = poly(f, v.parts[1]);
    if (den.is_zero())
        throw InputError("zero denominator in " + v.str());
    return FqRat(poly(f, v.parts[0]), den);
}

} // namespace build

namespace detail {

inline Json run_orbit(const Scenario& sc)
{
    FgModule mod = build::module(sc.required("module"));
    const Section& o = sc.required("orbit");
    OrbitSum orbit{build::element(mod, o.at("base")), build::terms(mod, o)};
    auto gens = build::elements(mod, sc.required("subgroup").at("generators"));
    OrbitIntersection res = intersect_orbit_subgroup(mod, orbit, gens, build::solver(sc));
    Json fsets = Json::array(), residual = Json::array();
    for (const auto& f : res.fsets)
        fsets.push_back(report::fset(f));
    for (const auto& c : res.residual)
        residual.push_back(report::coset(c));
    Json results{{"fsets", fsets}, {"residual", residual}, {"exponents", report::exponent_set(res.exponents)}};
    if (auto b = build::box(sc)) {
        Json pts = Json::array();
        for (const auto& n : es_points_in_box(res.exponents, *b))
            pts.push_back(Json{{"n", report::tuple(n)}, {"point", orbit_point(mod, orbit, n).str()}});
        results["points_in_box"] = Json{{"box", *b}, {"points", pts}};
    }
    return Json{{"results", results}, {"status", report::status(res.status)}};
}

inline Json run_fset(const Scenario& sc)
{
    FgModule mod = build::module(sc.required("module"));
    const Section& s = sc.required("fset");
    GrouplessFSet part(build::element(mod, s.at("base")), build::terms(mod, s));
    const std::int64_t bound = build::box(sc).value_or(6);
    Json pts = Json::array();
    for (const auto& p : points_up_to(mod, part, bound))
        pts.push_back(p.str());
    Json results{{"validation", report::validation(validate(mod))},
                 {"fset", report::fset(part)},
                 {"points", Json{{"bound", bound}, {"count", pts.size()}, {"list", pts}}}};
    if (const Section* g = sc.section("subgroup")) {
        FSet full{part, build::elements(mod, g->at("generators")), false};
        check_f_invariant(mod, full);
        results["subgroup_f_invariant"] = full.f_invariant;
    }
    return Json{{"results", results}, {"status", report::box_status("orbit exponents", bound)}};
}

inline Json run_recsolve(const Scenario& sc)
{
    const Section& r = sc.required("recurrence");
    IntPoly f = as_big_list(r.at("f"));
    trim(f);
    if (!is_monic(f) || degree(f) < 1)
        throw InputError("recurrence polynomial f must be monic of degree >= 1");
    const auto g = static_cast<std::size_t>(degree(f));
    Json results = Json::object();
    if (const Value* m = r.find("modulus")) {
        PeriodProfile p = detect_period(f, as_int64(*m, "modulus"));
        results["period"] = Json{{"modulus", p.modulus}, {"preperiod", p.preperiod}, {"period", p.period}};
    }
    auto cons_sections = sc.all("congruence");
    auto eq_sections = sc.all("equation");
    CompletenessStatus status;
    if (!cons_sections.empty() || !eq_sections.empty()) {
        if (!r.find("k"))
            throw InputError("missing required key 'k' in section [recurrence] (congruences or equations given)");
        const std::int64_t k = as_int64(r.at("k"), "k");
        if (k < 1)
            throw InputError("k must be >= 1");
        const auto ku = static_cast<std::size_t>(k);
        std::vector<Congruence> cons;
        for (const auto* s : cons_sections)
            cons.push_back(
                Congruence{build::matrix(s->at("coeffs"), g, ku, "coeffs"), s->at("target").integer, s->at("modulus").integer});
        std::vector<Equation> eqs;
        for (const auto* s : eq_sections)
            eqs.push_back(Equation{build::matrix(s->at("coeffs"), g, ku, "coeffs"), s->at("target").integer});
        const SolverParams params = build::solver(sc);
        ExponentSet sol = cons.empty() ? ExponentSet::all(ku) : solve_congruences(f, cons, ku, params.max_table);
        if (!eqs.empty()) {
            EquationResult er = solve_equations(f, eqs, ku, params, cons);
            status.absorb(er.status);
            status.n_max = params.n_max;
            sol = es_intersect(sol, er.solutions);
        }
        results["solutions"] = report::exponent_set(sol);
        if (auto b = build::box(sc)) {
            Json pts = Json::array();
            for (const auto& n : es_points_in_box(sol, *b))
                pts.push_back(report::tuple(n));
            results["points_in_box"] = Json{{"box", *b}, {"points", pts}};
        }
    }
    return Json{{"results", results}, {"status", report::status(status)}};
}

inline Json run_survey(const Scenario& sc)
{
    const Section& d = sc.required("drinfeld");
    const std::int64_t q = as_int64(d.at("q"), "q");
    const FiniteField& f = build::field(sc.section("field"), q);
    const FqPoly phi = build::poly(f, d.at("phi_t"));
    std::vector<FqElem> c = phi.coeffs();
    const std::int64_t bound = as_int64(d.at("deg_bound"), "deg_bound");
    if (bound < 1)
        throw InputError("deg_bound must be >= 1");
    DrinfeldModule mod(TwistedPoly(f, q, c));
    Json hits = Json::array();
    for (const auto& h : two_term_survey(mod, static_cast<std::size_t>(bound)))
        hits.push_back(Json{{"a", h.a.str("t")}, {"phi_a", h.phi_a.str()}});
    Json results{{"field", f.describe()}, {"phi_t", mod.phi_t().str()}, {"two_term", hits}};
    return Json{{"results", results}, {"status", report::box_status("deg a", bound)}};
}

inline Json run_sharp(const Scenario& sc)
{
    const Section& s = sc.required("sharp");
    const std::int64_t bound = as_int64(s.at("deg_bound"), "deg_bound");
    if (bound < 1)
        throw InputError("deg_bound must be >= 1");
    SharpReport rep = sharp_scenario(as_int64(s.at("q"), "q"), static_cast<std::size_t>(bound));
    Json pts = Json::array();
    for (const auto& p : rep.on_curve)
        pts.push_back(Json{{"x", additive_str(p.x)}, {"y", additive_str(p.y)}});
    Json results{{"lambda", rep.lambda.str()},
                 {"phi_t", rep.phi_t.str()},
                 {"phi_t2", rep.phi_t2.str()},
                 {"operator_dim", rep.operator_dim},
                 {"enumerated", rep.enumerated},
                 {"on_curve", pts},
                 {"on_curve_count", rep.on_curve.size()},
                 {"expected_on_curve", rep.expected_on_curve},
                 {"on_curve_matches", rep.on_curve_matches},
                 {"phi_t2_invariant", rep.phi_t2_invariant},
                 {"phi_t_invariant", rep.phi_t_invariant},
                 {"ok", rep.ok()}};
    return Json{{"results", results}, {"status", report::box_status("operator degree", bound)}};
}

inline Json run_gm(const Scenario& sc)
{
    const FiniteField& f = build::field(&sc.required("field"), 0);
    std::vector<GmPoint> gens;
    for (const auto& g : sc.required("group").at("generators").items()) {
        GmPoint p;
        for (const auto& x : g.items())
            p.push_back(build::rat(f, x));
        gens.push_back(p);
    }
    TorusSubgroup group(f, gens);
    const Section& r = sc.required("relation");
    std::vector<FqRat> coeffs;
    for (const auto& x : r.at("coefficients").items())
        coeffs.push_back(build::rat(f, x));
    Relation rel{{}, build::rat(f, r.at("rhs"))};
    if (const Value* m = r.find("monomials")) {
        if (m->items().size() != coeffs.size())
            throw InputError("relation: one monomial per coefficient is required");
        for (std::size_t l = 0; l < coeffs.size(); ++l) {
            std::vector<std::size_t> powers;
            for (auto e : as_int64_list(m->items()[l], "monomial exponent")) {
                if (e < 0)
                    throw InputError("monomial exponents must be >= 0");
                powers.push_back(static_cast<std::size_t>(e));
            }
            rel.terms.push_back(RelationTerm{coeffs[l], powers});
        }
    } else {
        if (coeffs.size() != group.s())
            throw InputError("relation: a linear form needs one coefficient per coordinate");
        rel = Relation::linear(coeffs, rel.rhs);
    }
    const std::int64_t box = build::box(sc).value_or(16);
    std::int64_t height = 4;
    if (const Section* c = sc.section("cluster"))
        if (const Value* h = c->find("height"))
            height = as_int64(*h, "height");
    HypersurfaceResult res = intersect_hypersurface(group, rel, box);
    Clustering cl = cluster_fsets(res.solutions, group.q(), box, height);
    IndependenceCertificate cert = group.certify_independence();

    Json sols = Json::array();
    for (const auto& e : res.solutions)
        sols.push_back(report::tuple(e));
    Json orbits = Json::array(), cosets = Json::array(), unexplained = Json::array();
    for (const auto& o : cl.orbits) {
        Json pts = Json::array();
        for (const auto& p : o.points)
            pts.push_back(report::tuple(p));
        Json item{{"fset", report::fset(o.fset)}, {"points", pts}};
        if (o.fset.k() == 1) {
            ExpTuple e0;
            for (const auto& x : o.fset.terms[0].a.free)
                e0.push_back(static_cast<std::int64_t>(x));
            GmPoint g0 = gamma_element(group, e0);
            std::string text = "S((";
            for (std::size_t j = 0; j < g0.size(); ++j)
                text += (j ? ", " : "") + g0[j].str();
            item["gamma"] = Json{{"base", report::gm_point(g0)}, {"text", text + "); 1)"}};
        } else {
            item["gamma"] = Json{{"base", report::gm_point(gamma_element(group, o.points[0]))}, {"text", "singleton"}};
        }
        orbits.push_back(item);
    }
    for (const auto& c : cl.cosets) {
        Json pts = Json::array();
        for (const auto& p : c.points)
            pts.push_back(report::tuple(p));
        cosets.push_back(Json{{"base", report::tuple(c.base)}, {"lattice", report::columns(c.lattice)}, {"points", pts}});
    }
    for (const auto& p : cl.unexplained)
        unexplained.push_back(report::tuple(p));
    Json independence{{"independent", cert.independent}};
    if (cert.relation)
        independence["relation"] = report::vector(*cert.relation);
    Json results{{"solutions", sols},
                 {"clusters", Json{{"orbits", orbits}, {"cosets", cosets}, {"unexplained", unexplained}}},
                 {"closure",
                  Json{{"applicable", res.closure.applicable},
                       {"checked", res.closure.checked},
                       {"holds", res.closure.holds}}},
                 {"independence", independence}};
    return Json{{"results", results}, {"status", report::box_status("exponent box", box)}};
}

} // namespace detail

struct Report {
    Json canonical;
    double seconds = 0;

    Json full() const { return Json{{"report", canonical}, {"timing", Json{{"seconds", seconds}}}}; }
    std::string canonical_text() const { return canonical.dump(2) + "\n"; }
};

/// Dispatches to the owning module; refusals and input errors propagate.
inline Report run_scenario(const Scenario& sc)
{
    validate_scenario(sc);
    const auto start = std::chrono::steady_clock::now();
    Json body;
    if (sc.kind == "orbit-intersect")
        body = detail::run_orbit(sc);
    else if (sc.kind == "fset")
        body = detail::run_fset(sc);
    else if (sc.kind == "recsolve")
        body = detail::run_recsolve(sc);
    else if (sc.kind == "drinfeld-survey")
        body = detail::run_survey(sc);
    else if (sc.kind == "drinfeld-sharp")
        body = detail::run_sharp(sc);
    else
        body = detail::run_gm(sc);
    Report rep;
    rep.canonical = Json{{"kind", sc.kind},
                         {"scenario", serialize_scenario(sc)},
                         {"results", body["results"]},
                         {"status", body["status"]}};
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace frobset

#endif // FROBSET_REPORT_HPP
