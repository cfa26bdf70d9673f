#ifndef FROBSET_RANDCHECK_HPP
#define FROBSET_RANDCHECK_HPP

// Random modules and orbit-meet-subgroup instances, with a brute-force
// enumeration to hold the pipeline against.

#include "orbitgamma.hpp"

#include <random>

namespace frobset::randcheck {

inline long uniform(std::mt19937_64& rng, long lo, long hi)
{
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long lo, long hi)
{
    IntMatrix a(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            a(i, j) = uniform(rng, lo, hi);
    return a;
}

/// Torsion block satisfying d_j * a_ij = 0 mod d_i.
inline IntMatrix random_torsion_block(std::mt19937_64& rng, const std::vector<std::int64_t>& d)
{
    IntMatrix a(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) {
            std::int64_t step = d[i] / std::gcd(d[i], d[j]);
            a(i, j) = step * uniform(rng, 0, d[i] / step - 1);
        }
    return a;
}

struct ModuleShape {
    std::size_t max_free = 4;
    std::size_t max_torsion = 2;
    std::int64_t max_order = 12;
    long max_degree = 4;
    long entry = 3;
    bool require_nonsingular = false;  ///< det A_ff != 0 and A_tt injective
};

/// Random module whose proposed minimal polynomial has degree <= max_degree.
inline FgModule random_module(std::mt19937_64& rng, const ModuleShape& shape = {})
{
    for (;;) {
        auto m = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(shape.max_free)));
        auto s = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(shape.max_torsion)));
        if (m + s == 0)
            continue;
        std::vector<std::int64_t> d;
        for (std::size_t i = 0; i < s; ++i)
            d.push_back(uniform(rng, 2, shape.max_order));
        IntMatrix ff = random_matrix(rng, m, m, -shape.entry, shape.entry);
        IntMatrix tf = random_matrix(rng, s, m, 0, shape.max_order);
        IntMatrix tt = random_torsion_block(rng, d);
        FgModule mod = FgModule::make(m, d, ff, tf, tt);
        if (degree(mod.minpoly()) > shape.max_degree)
            continue;
        if (shape.require_nonsingular && !validate(mod, 0).zero_divisor.ok)
            continue;
        return mod;
    }
}

inline ModElement random_element(std::mt19937_64& rng, const FgModule& mod, long lo, long hi)
{
    IntVector free;
    for (std::size_t i = 0; i < mod.free_rank(); ++i)
        free.emplace_back(uniform(rng, lo, hi));
    std::vector<std::int64_t> tors;
    for (auto d : mod.torsion_orders())
        tors.push_back(uniform(rng, 0, d - 1));
    return mod.element(free, tors);
}

struct OrbitInstance {
    FgModule mod;
    OrbitSum orbit;
    std::vector<ModElement> gens;
};

/// m <= 3, s <= 1, k <= 2, g <= 3, generator entries in [-4, 4]; F not a zero divisor.
/// A planted instance also puts two orbit points into the subgroup.
inline OrbitInstance random_orbit_instance(std::mt19937_64& rng, bool planted = false)
{
    ModuleShape shape;
    shape.max_free = 3;
    shape.max_torsion = 1;
    shape.max_order = 6;
    shape.max_degree = 3;
    shape.entry = 2;
    shape.require_nonsingular = true;
    FgModule mod = random_module(rng, shape);
    OrbitSum orbit{random_element(rng, mod, -3, 3), {}};
    for (long i = uniform(rng, 1, 2); i > 0; --i)
        orbit.terms.push_back(FSetTerm{random_element(rng, mod, -3, 3), 1});
    std::vector<ModElement> gens;
    for (long i = uniform(rng, 1, 3); i > 0; --i)
        gens.push_back(random_element(rng, mod, -4, 4));
    if (planted)
        for (int r = 0; r < 2; ++r) {
            ExpTuple n;
            for (std::size_t i = 0; i < orbit.k(); ++i)
                n.push_back(uniform(rng, 0, 4));
            gens.push_back(orbit_point(mod, orbit, n));
        }
    return OrbitInstance{mod, orbit, gens};
}

/// {Q + sum F^(n_i) P_i : n_i <= bound} meet the subgroup, membership through the lifted lattice.
inline std::set<ModElement> brute_orbit_meet(const OrbitInstance& inst, std::int64_t bound)
{
    const FgModule& mod = inst.mod;
    const std::size_t k = inst.orbit.k();
    std::vector<std::vector<ModElement>> powers(k);
    for (std::size_t i = 0; i < k; ++i) {
        ModElement x = inst.orbit.terms[i].a;
        for (std::int64_t n = 0; n <= bound; ++n) {
            powers[i].push_back(x);
            x = mod.apply(x);
        }
    }
    HermiteForm hf = hnf(lifted_subgroup_basis(mod, inst.gens));
    std::set<ModElement> out;
    std::vector<std::int64_t> n(k, 0);
    for (;;) {
        bool on_grid = true;
        ModElement p = inst.orbit.q;
        for (std::size_t i = 0; i < k; ++i) {
            on_grid = on_grid && n[i] % inst.orbit.terms[i].delta == 0;
            p = mod.add(p, powers[i][static_cast<std::size_t>(n[i])]);
        }
        if (on_grid && lattice_member(hf, lift(p)))
            out.insert(p);
        std::size_t i = 0;
        while (i < k && ++n[i] > bound)
            n[i++] = 0;
        if (i == k)
            break;
    }
    return out;
}

/// Points of the pipeline's exponent set inside [0, bound]^k.
inline std::set<ModElement> pipeline_points(const OrbitInstance& inst, const OrbitIntersection& res,
                                            std::int64_t bound)
{
    std::set<ModElement> out;
    for (const auto& n : es_points_in_box(res.exponents, bound))
        out.insert(orbit_point(inst.mod, inst.orbit, n));
    return out;
}

struct InstanceCheck {
    bool agree = false;
    std::size_t pipeline_points = 0;
    std::size_t brute_points = 0;
    bool complete = false;
};

/// Pipeline against brute force on [0, bound]^k.
inline InstanceCheck check_instance(const OrbitInstance& inst, std::int64_t bound, const SolverParams& params = {})
{
    OrbitIntersection res = intersect_orbit_subgroup(inst.mod, inst.orbit, inst.gens, params);
    auto mine = pipeline_points(inst, res, bound);
    auto brute = brute_orbit_meet(inst, bound);
    return InstanceCheck{mine == brute, mine.size(), brute.size(), res.status.complete};
}

} // namespace frobset::randcheck

#endif // FROBSET_RANDCHECK_HPP
