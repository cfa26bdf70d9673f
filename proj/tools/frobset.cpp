// frobset: run scenario files and the built-in examples, print JSON reports.

#include <frobset/randcheck.hpp>
#include <frobset/report.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace frobset;

namespace {

enum Exit { kOk = 0, kFailed = 1, kBadInput = 2, kRefused = 3 };

struct Common {
    std::string out;
    std::optional<std::int64_t> nmax, box;
    std::string sieve;
};

Scenario load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_scenario(ss.str());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void emit(const Json& j, const std::string& out)
{
    const std::string text = j.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f)
        throw InputError("cannot write " + out);
    f << text;
}

Overrides overrides(const Common& c)
{
    Overrides o;
    o.nmax = c.nmax;
    o.box = c.box;
    if (!c.sieve.empty()) {
        std::vector<std::int64_t> m;
        std::stringstream ss(c.sieve);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                m.push_back(std::stoll(item, &used));
                if (used != item.size())
                    throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw InputError("--sieve expects comma-separated integers, got '" + c.sieve + "'");
            }
        }
        o.sieve = m;
    }
    return o;
}

int run(Scenario sc, const Common& c, const std::string& expect_kind = "")
{
    if (!expect_kind.empty() && sc.kind != expect_kind)
        throw InputError("expected a scenario of kind " + expect_kind + ", got " + sc.kind);
    apply_overrides(sc, overrides(c));
    try {
        Report rep = run_scenario(sc);
        emit(rep.full(), c.out);
        return kOk;
    } catch (const Refusal& r) {
        Json j{{"report",
                Json{{"kind", sc.kind},
                     {"scenario", serialize_scenario(sc)},
                     {"refusal", r.what()},
                     {"status", Json{{"tag", "refused"}, {"complete", false}}}}}};
        emit(j, c.out);
        std::cerr << "refused: " << r.what() << "\n";
        return kRefused;
    }
}

void add_common(CLI::App* app, Common& c, bool solver)
{
    app->add_option("--out", c.out, "Write the report to this path instead of standard output");
    if (solver) {
        app->add_option("--nmax", c.nmax, "Exponent bound N_max for bounded searches");
        app->add_option("--sieve", c.sieve, "Sieve moduli, comma separated");
        app->add_option("--box", c.box, "Box bound (exponents, points or degrees, per scenario kind)");
    }
}

int random_check(std::uint64_t seed, int count, std::int64_t bound, const Common& c)
{
    std::mt19937_64 rng(seed);
    SolverParams params;
    if (c.nmax)
        params.n_max = *c.nmax;
    Json cases = Json::array();
    int failures = 0, refusals = 0;
    for (int i = 0; i < count; ++i) {
        randcheck::OrbitInstance inst = randcheck::random_orbit_instance(rng, i % 2 == 1);
        Json item{{"index", i}, {"module_rank", Json::array({inst.mod.free_rank(), inst.mod.torsion_rank()})},
                  {"k", inst.orbit.k()}};
        try {
            auto r = randcheck::check_instance(inst, bound, params);
            item["agree"] = r.agree;
            item["pipeline_points"] = r.pipeline_points;
            item["brute_points"] = r.brute_points;
            item["complete"] = r.complete;
            failures += !r.agree;
        } catch (const Refusal& e) {
            item["refusal"] = e.what();
            ++refusals;
        }
        cases.push_back(item);
    }
    Json j{{"report",
            Json{{"kind", "random-check"},
                 {"seed", seed},
                 {"count", count},
                 {"box", bound},
                 {"cases", cases},
                 {"disagreements", failures},
                 {"refusals", refusals}}}};
    emit(j, c.out);
    return failures ? kFailed : kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact computations with F-sets, Frobenius modules and Drinfeld module examples"};
    app.require_subcommand(1);

    Common common;
    std::string path;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
    run_cmd->add_option("scenario", path, "Scenario file")->required();
    add_common(run_cmd, common, true);

    auto* drinfeld = app.add_subcommand("drinfeld", "Drinfeld module examples");
    drinfeld->require_subcommand(1);
    std::int64_t q = 0, deg = 0, order = 0;
    std::string phi;
    auto* survey = drinfeld->add_subcommand("survey", "Two-term values phi_a over deg a <= bound");
    survey->add_option("scenario", path, "Scenario file of kind drinfeld-survey");
    survey->add_option("--q", q, "Size of the constant field F_q");
    survey->add_option("--phi", phi, "Coefficients of phi_t, comma separated field codes, low degree first");
    survey->add_option("--deg", deg, "Degree bound for a");
    survey->add_option("--field-order", order, "Order of the coefficient field (default q)");
    add_common(survey, common, false);
    auto* sharp = drinfeld->add_subcommand("sharp", "phi_t = F + F^3 over F_{q^2} against y = lambda x");
    sharp->add_option("scenario", path, "Scenario file of kind drinfeld-sharp");
    sharp->add_option("--q", q, "Size of the constant field F_q");
    sharp->add_option("--deg", deg, "Operator degree bound");
    add_common(sharp, common, false);

    auto* gm = app.add_subcommand("gm", "Subgroups of the multiplicative torus over F_q(t)");
    gm->require_subcommand(1);
    auto* gm_intersect = gm->add_subcommand("intersect", "Subgroup points on a hypersurface inside an exponent box");
    gm_intersect->add_option("scenario", path, "Scenario file of kind gm-intersect")->required();
    add_common(gm_intersect, common, true);

    std::uint64_t seed = 1;
    int count = 50;
    std::int64_t bound = 64;
    auto* rc = app.add_subcommand("random-check", "Pipeline against brute force on random orbit instances");
    rc->add_option("--seed", seed, "Random seed");
    rc->add_option("--count", count, "Number of instances");
    rc->add_option("--bound", bound, "Exponent box [0, bound]^k");
    rc->add_option("--out", common.out, "Write the report to this path instead of standard output");
    rc->add_option("--nmax", common.nmax, "Exponent bound N_max for bounded searches");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd)
            return run(load(path), common);
        if (*gm_intersect)
            return run(load(path), common, "gm-intersect");
        if (*survey) {
            if (!path.empty())
                return run(load(path), common, "drinfeld-survey");
            if (q == 0 || phi.empty() || deg == 0)
                throw InputError("drinfeld survey needs a scenario file or --q, --phi and --deg");
            Scenario sc{"drinfeld-survey", {Section{"", {Entry{"kind", Value::of_word("drinfeld-survey"), 0}}, 0}}};
            if (order)
                sc.set("field", "order", Value::of(order));
            std::vector<std::int64_t> c;
            std::stringstream ss(phi);
            std::string item;
            while (std::getline(ss, item, ','))
                c.push_back(std::stoll(item));
            sc.set("drinfeld", "q", Value::of(q));
            sc.set("drinfeld", "phi_t", Value::int_list(c));
            sc.set("drinfeld", "deg_bound", Value::of(deg));
            return run(sc, common);
        }
        if (*sharp) {
            if (!path.empty())
                return run(load(path), common, "drinfeld-sharp");
            if (q == 0 || deg == 0)
                throw InputError("drinfeld sharp needs a scenario file or --q and --deg");
            Scenario sc{"drinfeld-sharp", {Section{"", {Entry{"kind", Value::of_word("drinfeld-sharp"), 0}}, 0}}};
            sc.set("sharp", "q", Value::of(q));
            sc.set("sharp", "deg_bound", Value::of(deg));
            return run(sc, common);
        }
        if (*rc)
            return random_check(seed, count, bound, common);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kOk;
}
