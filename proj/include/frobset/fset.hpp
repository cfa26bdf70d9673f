#ifndef FROBSET_FSET_HPP
#define FROBSET_FSET_HPP

// Groupless F-sets b + S(a_1, ..., a_k; d_1, ..., d_k), F-sets with a
// subgroup part, and the passage from exponent cosets back to F-sets.

#include "exponent_set.hpp"
#include "module.hpp"

#include <set>

namespace frobset {

struct FSetTerm {
    ModElement a;
    std::int64_t delta = 1;
    friend bool operator==(const FSetTerm& x, const FSetTerm& y) { return x.a == y.a && x.delta == y.delta; }
    friend bool operator<(const FSetTerm& x, const FSetTerm& y)
    {
        return x.delta != y.delta ? x.delta < y.delta : x.a < y.a;
    }
};

/// b + {sum_i F^(delta_i n_i) a_i : n_i >= 0}; no terms means the singleton {b}.
struct GrouplessFSet {
    ModElement base;
    std::vector<FSetTerm> terms;

    GrouplessFSet() = default;
    GrouplessFSet(ModElement b, std::vector<FSetTerm> t = {}) : base(std::move(b)), terms(std::move(t))
    {
        for (const auto& term : terms)
            if (term.delta < 1)
                throw InputError("groupless F-set: every delta must be >= 1");
    }

    std::size_t k() const { return terms.size(); }
    friend bool operator==(const GrouplessFSet& x, const GrouplessFSet& y)
    {
        return x.base == y.base && x.terms == y.terms;
    }
    friend bool operator<(const GrouplessFSet& x, const GrouplessFSet& y)
    {
        return x.base == y.base ? x.terms < y.terms : x.base < y.base;
    }

    std::string str() const
    {
        std::string s = base.str();
        if (terms.empty())
            return s;
        s += " + S(";
        for (std::size_t i = 0; i < terms.size(); ++i)
            s += (i ? ", " : "") + terms[i].a.str();
        s += "; ";
        for (std::size_t i = 0; i < terms.size(); ++i)
            s += (i ? ", " : "") + std::to_string(terms[i].delta);
        return s + ")";
    }
};

/// A groupless part plus a subgroup given by generators.
struct FSet {
    GrouplessFSet part;
    std::vector<ModElement> subgroup;
    bool f_invariant = false;  ///< set only after check_f_invariant succeeded
};

/// Lattice in Z^(m+s) whose image in M is the subgroup generated by gens:
/// lifted generators followed by the torsion relations d_i e_(m+i).
inline IntMatrix lifted_subgroup_basis(const FgModule& mod, const std::vector<ModElement>& gens)
{
    const std::size_t m = mod.free_rank(), s = mod.torsion_rank();
    IntMatrix b(m + s, gens.size() + s);
    for (std::size_t j = 0; j < gens.size(); ++j) {
        for (std::size_t i = 0; i < m; ++i)
            b(i, j) = gens[j].free[i];
        for (std::size_t i = 0; i < s; ++i)
            b(m + i, j) = gens[j].torsion[i];
    }
    for (std::size_t i = 0; i < s; ++i)
        b(m + i, gens.size() + i) = mod.torsion_orders()[i];
    return b;
}

inline IntVector lift(const ModElement& p)
{
    IntVector v = p.free;
    for (auto t : p.torsion)
        v.emplace_back(t);
    return v;
}

/// Membership of p in the subgroup generated by gens.
inline bool subgroup_member(const FgModule& mod, const std::vector<ModElement>& gens, const ModElement& p)
{
    return static_cast<bool>(lattice_member(lifted_subgroup_basis(mod, gens), lift(p)));
}

/// Checks F(h) in <gens> for every generator h and records the outcome.
inline bool check_f_invariant(const FgModule& mod, FSet& s)
{
    HermiteForm hf = hnf(lifted_subgroup_basis(mod, s.subgroup));
    s.f_invariant = true;
    for (const auto& h : s.subgroup)
        if (!lattice_member(hf, lift(mod.apply(h))))
            s.f_invariant = false;
    return s.f_invariant;
}

/// {b + sum F^(delta_i n_i) a_i : 0 <= n_i <= bound}.
inline std::set<ModElement> points_up_to(const FgModule& mod, const GrouplessFSet& s, std::int64_t bound)
{
    if (bound < 0)
        throw InputError("points_up_to: bound must be nonnegative");
    // orbit[i][n] = F^(delta_i n) a_i
    std::vector<std::vector<ModElement>> orbit(s.k());
    for (std::size_t i = 0; i < s.k(); ++i) {
        ModElement cur = s.terms[i].a;
        for (std::int64_t n = 0; n <= bound; ++n) {
            orbit[i].push_back(cur);
            if (n < bound)
                cur = frob_power(mod, cur, static_cast<std::uint64_t>(s.terms[i].delta));
        }
    }
    std::set<ModElement> out;
    std::vector<std::int64_t> idx(s.k(), 0);
    for (;;) {
        ModElement p = s.base;
        for (std::size_t i = 0; i < s.k(); ++i)
            p = mod.add(p, orbit[i][static_cast<std::size_t>(idx[i])]);
        out.insert(p);
        std::size_t i = 0;
        while (i < s.k() && ++idx[i] > bound)
            idx[i++] = 0;
        if (i == s.k())
            break;
    }
    return out;
}

/// Points of the groupless part plus subgroup elements with coefficients in [-box, box].
inline std::set<ModElement> points_up_to(const FgModule& mod, const FSet& s, std::int64_t bound, std::int64_t box)
{
    std::set<ModElement> base = points_up_to(mod, s.part, bound);
    std::set<ModElement> sub{mod.zero()};
    for (const auto& h : s.subgroup) {
        std::set<ModElement> next;
        for (const auto& x : sub)
            for (std::int64_t c = -box; c <= box; ++c)
                next.insert(mod.add(x, mod.scale(h, c)));
        sub = std::move(next);
    }
    std::set<ModElement> out;
    for (const auto& p : base)
        for (const auto& h : sub)
            out.insert(mod.add(p, h));
    return out;
}

/// An F^b-set re-expressed over F: every delta is multiplied by b.
inline GrouplessFSet scale_delta(const GrouplessFSet& s, std::int64_t b)
{
    if (b < 1)
        throw InputError("scale_delta: b must be positive");
    GrouplessFSet out = s;
    for (auto& t : out.terms)
        t.delta *= b;
    return out;
}

struct CollapseResult {
    std::vector<GrouplessFSet> fsets;
    std::vector<BoundedLatticeCoset> residual;  ///< cosets outside the convertible fragment
};

/// Lattice columns with constant positive value on pairwise disjoint supports.
inline bool convertible(const BoundedLatticeCoset& c)
{
    std::vector<bool> used(c.dim(), false);
    for (std::size_t j = 0; j < c.rank(); ++j) {
        BigInt value = 0;
        for (std::size_t i = 0; i < c.dim(); ++i) {
            const BigInt& x = c.lattice(i, j);
            if (x == 0)
                continue;
            if (x < 0 || (value != 0 && x != value) || used[i])
                return false;
            value = x;
            used[i] = true;
        }
    }
    return true;
}

/// Exponent sets of the orbit Q + S(P_1, ..., P_k; 1, ..., 1) translated back
/// into groupless F-sets.  Cosets outside the convertible fragment are kept
/// in the residual list; empty cosets are dropped.
inline CollapseResult collapse_to_groupless(const FgModule& mod, const ModElement& q, const std::vector<ModElement>& p,
                                            const ExponentSet& e)
{
    if (e.dim() != p.size())
        throw InputError("collapse_to_groupless: exponent dimension differs from the number of orbit terms");
    const std::size_t k = p.size();
    auto power = [&](std::size_t i, const BigInt& n) { return frob_power(mod, p[i], static_cast<std::uint64_t>(n)); };

    CollapseResult out;
    std::set<GrouplessFSet> seen;
    auto emit = [&](GrouplessFSet s) {
        if (seen.insert(s).second)
            out.fsets.push_back(std::move(s));
    };
    for (const auto& t : e.tuples()) {
        ModElement b = q;
        for (std::size_t i = 0; i < k; ++i)
            b = mod.add(b, power(i, t[i]));
        emit(GrouplessFSet(b));
    }
    for (const auto& c : e.cosets()) {
        if (!convertible(c)) {
            out.residual.push_back(c);
            continue;
        }
        IntVector start = c.offset;
        std::vector<bool> covered(k, false);
        std::vector<BigInt> step(c.rank());
        for (std::size_t j = 0; j < c.rank(); ++j) {
            BigInt tau;
            bool first = true;
            for (std::size_t i = 0; i < k; ++i) {
                if (c.lattice(i, j) == 0)
                    continue;
                step[j] = c.lattice(i, j);
                covered[i] = true;
                BigInt need = ceil_div(std::max(c.lower[i], BigInt(0)) - c.offset[i], step[j]);
                if (first || need > tau)
                    tau = need;
                first = false;
            }
            for (std::size_t i = 0; i < k; ++i)
                start[i] += tau * c.lattice(i, j);
        }
        bool empty = false;
        for (std::size_t i = 0; i < k; ++i)
            if (!covered[i] && (start[i] < c.lower[i] || start[i] < 0))
                empty = true;
        if (empty)
            continue;
        ModElement b = q;
        for (std::size_t i = 0; i < k; ++i)
            if (!covered[i])
                b = mod.add(b, power(i, start[i]));
        std::vector<FSetTerm> terms;
        for (std::size_t j = 0; j < c.rank(); ++j) {
            ModElement a = mod.zero();
            for (std::size_t i = 0; i < k; ++i)
                if (c.lattice(i, j) != 0)
                    a = mod.add(a, power(i, start[i]));
            terms.push_back(FSetTerm{a, static_cast<std::int64_t>(step[j])});
        }
        emit(GrouplessFSet(b, terms));
    }
    return out;
}

} // namespace frobset

#endif // FROBSET_FSET_HPP
