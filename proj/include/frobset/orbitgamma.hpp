#ifndef FROBSET_ORBITGAMMA_HPP
#define FROBSET_ORBITGAMMA_HPP

// Intersection of an orbit sum Q + S(P_1, ..., P_k; d_1, ..., d_k) with a
// finitely generated subgroup, reduced to recurrences in the exponents.

#include "fset.hpp"
#include "recsolve.hpp"

#include <deque>
#include <map>

namespace frobset {

struct OrbitSum {
    ModElement q;
    std::vector<FSetTerm> terms;  ///< P_i with its delta_i

    std::size_t k() const { return terms.size(); }
    std::vector<ModElement> points() const
    {
        std::vector<ModElement> out;
        for (const auto& t : terms)
            out.push_back(t.a);
        return out;
    }
    GrouplessFSet as_fset() const { return GrouplessFSet(q, terms); }
};

/// (torsion part, free part) of p.
inline std::pair<ModElement, ModElement> split_point(const FgModule& mod, const ModElement& p)
{
    ModElement t = mod.zero(), f = mod.zero();
    t.torsion = p.torsion;
    f.free = p.free;
    return {t, f};
}

struct TorsionCoset {
    std::vector<std::int64_t> h;
    IntVector u;  ///< free vector with (u; h) in the subgroup
};

struct SubgroupData {
    std::vector<ModElement> generators;
    IntMatrix gamma1;                  ///< canonical basis of the subgroup meet the free part
    std::vector<TorsionCoset> cosets;  ///< sorted by h
    SmithForm snf;                     ///< of gamma1

    const TorsionCoset* coset_of(const std::vector<std::int64_t>& h) const
    {
        auto it = std::lower_bound(cosets.begin(), cosets.end(), h,
                                   [](const TorsionCoset& c, const std::vector<std::int64_t>& x) { return c.h < x; });
        return it != cosets.end() && it->h == h ? &*it : nullptr;
    }

    /// Membership through the coset table and the residue system of gamma1.
    bool contains(const ModElement& p) const
    {
        const TorsionCoset* c = coset_of(p.torsion);
        if (!c)
            return false;
        IntVector y = snf.W * vec_sub(p.free, c->u);
        const std::size_t r = gamma1.cols();
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (i < r ? mod_floor(y[i], snf.S(i, i)) != 0 : y[i] != 0)
                return false;
        }
        return true;
    }
};

inline SubgroupData subgroup_analyze(const FgModule& mod, const std::vector<ModElement>& gens)
{
    if (gens.empty())
        throw InputError("subgroup_analyze: at least one generator is required");
    const std::size_t m = mod.free_rank(), s = mod.torsion_rank(), n = gens.size();
    for (const auto& x : gens)
        if (x.free.size() != m || x.torsion.size() != s)
            throw InputError("subgroup generator " + x.str() + " does not belong to the module");
    SubgroupData out;
    out.generators = gens;

    IntMatrix free_part(m, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i)
            free_part(i, j) = gens[j].free[i];
    if (s == 0) {
        out.gamma1 = canonical_basis(free_part);
    } else {
        // combinations with vanishing torsion: kernel of [T | diag(d)]
        IntMatrix rel(s, n + s);
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                rel(i, j) = gens[j].torsion[i];
            rel(i, n + i) = mod.torsion_orders()[i];
        }
        IntMatrix ker = integer_kernel(rel);
        IntMatrix coeffs(n, ker.cols());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < ker.cols(); ++j)
                coeffs(i, j) = ker(i, j);
        out.gamma1 = m ? canonical_basis(free_part * coeffs) : IntMatrix(0, 0);
    }
    out.snf = smith(out.gamma1);

    std::map<std::vector<std::int64_t>, IntVector> table;
    std::deque<std::vector<std::int64_t>> queue;
    table.emplace(std::vector<std::int64_t>(s, 0), IntVector(m));
    queue.emplace_back(s, 0);
    while (!queue.empty()) {
        auto h = queue.front();
        queue.pop_front();
        const IntVector u = table.at(h);
        for (const auto& x : gens) {
            std::vector<std::int64_t> next(s);
            for (std::size_t i = 0; i < s; ++i)
                next[i] = (h[i] + x.torsion[i]) % mod.torsion_orders()[i];
            if (table.emplace(next, vec_add(u, x.free)).second)
                queue.push_back(next);
        }
    }
    for (auto& [h, u] : table)
        out.cosets.push_back(TorsionCoset{h, u});
    return out;
}

struct MembershipSystem {
    std::vector<Congruence> congruences;
    std::vector<Equation> equations;
    bool infeasible = false;  ///< a constant constraint already fails
};

/// Conditions on (n_1, ..., n_k) for Q + sum F^(n_i) P_i to lie in h + U_h + gamma1.
inline MembershipSystem membership_system(const FgModule& mod, const OrbitSum& orbit, const SubgroupData& sub,
                                          const TorsionCoset& coset)
{
    const std::size_t m = mod.free_rank(), s = mod.torsion_rank(), g = mod.g(), k = orbit.k();
    // R[i][j] = F^j P_i
    std::vector<std::vector<ModElement>> r(k);
    for (std::size_t i = 0; i < k; ++i) {
        ModElement x = orbit.terms[i].a;
        for (std::size_t j = 0; j < g; ++j) {
            r[i].push_back(x);
            x = mod.apply(x);
        }
    }
    MembershipSystem sys;
    auto add_congruence = [&](IntMatrix c, BigInt target, BigInt modulus) {
        if (modulus == 1)
            return;
        if (c.is_zero()) {
            if (mod_floor(target, modulus) != 0)
                sys.infeasible = true;
            return;
        }
        sys.congruences.push_back(Congruence{std::move(c), mod_floor(target, modulus), std::move(modulus)});
    };

    for (std::size_t c = 0; c < s; ++c) {
        IntMatrix coeffs(g, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < g; ++j)
                coeffs(j, i) = r[i][j].torsion[c];
        add_congruence(coeffs, BigInt(coset.h[c]) - orbit.q.torsion[c], mod.torsion_orders()[c]);
    }

    if (m == 0)
        return sys;
    const IntMatrix& w = sub.snf.W;
    const std::size_t rank = sub.gamma1.cols();
    const IntVector base = w * vec_sub(orbit.q.free, coset.u);
    for (std::size_t row = 0; row < m; ++row) {
        IntMatrix coeffs(g, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < g; ++j)
                coeffs(j, i) = dot(w.row(row), r[i][j].free);
        if (row < rank) {
            add_congruence(coeffs, -base[row], sub.snf.S(row, row));
        } else if (coeffs.is_zero()) {
            if (base[row] != 0)
                sys.infeasible = true;
        } else {
            sys.equations.push_back(Equation{std::move(coeffs), -base[row]});
        }
    }
    return sys;
}

namespace detail {

// every n in [0, n_max]^k satisfying the whole system, checked on exact values
inline EquationResult bounded_search(const IntPoly& f, const MembershipSystem& sys, std::size_t k,
                                     const SolverParams& params, const std::string& reason)
{
    BigInt volume = 1;
    for (std::size_t i = 0; i < k; ++i)
        volume *= params.n_max + 1;
    if (volume > params.max_search)
        throw Refusal(reason + "; the bounded search over [0, " + std::to_string(params.n_max) + "]^" +
                      std::to_string(k) + " is over the search limit as well");
    const std::size_t g = static_cast<std::size_t>(degree(f));
    ZTable z = z_block(f, static_cast<std::size_t>(params.n_max));
    EquationResult res{ExponentSet(k), {}};
    res.status.complete = false;
    res.status.n_max = params.n_max;
    res.status.notes.push_back(reason + "; exponents searched up to " + std::to_string(params.n_max));
    ExpTuple n(k, 0);
    auto value = [&](const IntMatrix& c) {
        BigInt v = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < g; ++j)
                v += c(j, i) * z(j, static_cast<std::size_t>(n[i]));
        return v;
    };
    for (;;) {
        bool ok = true;
        for (const auto& c : sys.congruences)
            ok = ok && mod_floor(value(c.coeffs) - c.target, c.modulus) == 0;
        for (const auto& e : sys.equations)
            ok = ok && value(e.coeffs) == e.target;
        if (ok)
            res.solutions.add(n);
        std::size_t i = 0;
        while (i < k && ++n[i] > params.n_max)
            n[i++] = 0;
        if (i == k)
            break;
    }
    return res;
}

} // namespace detail

struct OrbitIntersection {
    ExponentSet exponents;  ///< n with Q + sum F^(n_i) P_i in the subgroup, n_i divisible by delta_i
    std::vector<GrouplessFSet> fsets;
    std::vector<BoundedLatticeCoset> residual;
    CompletenessStatus status;
};

inline OrbitIntersection intersect_orbit_subgroup(const FgModule& mod, const OrbitSum& orbit,
                                                  const std::vector<ModElement>& gens, const SolverParams& params = {})
{
    ValidationReport rep = validate(mod, 1, 1);
    if (!rep.zero_divisor.ok)
        throw Refusal("F is a zero divisor on the module: " + rep.zero_divisor.detail);
    if (!rep.integrality.ok)
        throw Refusal("the given polynomial does not annihilate F: " + rep.integrality.detail);
    for (const auto& t : orbit.terms)
        if (t.delta < 1)
            throw InputError("orbit sum: every delta must be >= 1");

    const std::size_t k = orbit.k();
    SubgroupData sub = subgroup_analyze(mod, gens);
    OrbitIntersection out{ExponentSet(k), {}, {}, {}};
    out.status.n_max = params.n_max;
    if (k == 0) {
        if (sub.contains(orbit.q)) {
            out.exponents = ExponentSet::all(0);
            out.fsets.push_back(GrouplessFSet(orbit.q));
        }
        return out;
    }

    const IntPoly& f = mod.minpoly();
    for (const auto& coset : sub.cosets) {
        MembershipSystem sys = membership_system(mod, orbit, sub, coset);
        if (sys.infeasible)
            continue;
        ExponentSet e(k);
        try {
            e = solve_congruences(f, sys.congruences, k, params.max_table);
        } catch (const Refusal& r) {
            EquationResult res = detail::bounded_search(f, sys, k, params, r.what());
            out.status.absorb(res.status);
            out.exponents.merge(res.solutions);
            continue;
        }
        if (e.empty_representation())
            continue;
        if (!sys.equations.empty()) {
            EquationResult res = solve_equations(f, sys.equations, k, params, sys.congruences);
            out.status.absorb(res.status);
            e = es_intersect(e, res.solutions);
        }
        out.exponents.merge(e);
    }

    bool stepped = false;
    IntMatrix step(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        step(i, i) = orbit.terms[i].delta;
        stepped = stepped || orbit.terms[i].delta > 1;
    }
    if (stepped) {
        ExponentSet grid(k);
        grid.add(BoundedLatticeCoset(IntVector(k), step, IntVector(k)));
        out.exponents = es_intersect(out.exponents, grid);
    }
    CollapseResult c = collapse_to_groupless(mod, orbit.q, orbit.points(), out.exponents);
    out.fsets = std::move(c.fsets);
    out.residual = std::move(c.residual);
    return out;
}

/// Q + sum F^(n_i) P_i.
inline ModElement orbit_point(const FgModule& mod, const OrbitSum& orbit, const ExpTuple& n)
{
    ModElement p = orbit.q;
    for (std::size_t i = 0; i < orbit.k(); ++i)
        p = mod.add(p, frob_power(mod, orbit.terms[i].a, static_cast<std::uint64_t>(n[i])));
    return p;
}

} // namespace frobset

#endif // FROBSET_ORBITGAMMA_HPP
