#ifndef FROBSET_GMDEMO_HPP
#define FROBSET_GMDEMO_HPP

// Finitely generated subgroups of (F_q(t)^*)^s, their points on a
// hypersurface inside an exponent box, and the F-set structure of the
// solutions under the Frobenius e -> q e on exponents.

#include "fq_poly.hpp"
#include "fset.hpp"
#include "lattice.hpp"

#include <map>
#include <numeric>
#include <set>

namespace frobset {

using GmPoint = std::vector<FqRat>;

struct IndependenceCertificate {
    bool independent = false;
    std::vector<FqPoly> coprime_base;   ///< pairwise coprime monic polynomials
    IntMatrix valuations;               ///< row (base element, coordinate), column generator
    std::optional<IntVector> relation;  ///< e != 0 with gamma(e) constant, when dependent
};

namespace detail {

inline FqPoly strip(const FqPoly& a) { return a.is_zero() ? a : a.monic(); }

// refine to pairwise coprime factors with the same multiplicative span
inline std::vector<FqPoly> coprime_base(std::vector<FqPoly> polys)
{
    std::vector<FqPoly> base;
    auto push = [](std::vector<FqPoly>& v, const FqPoly& p) {
        if (p.degree() >= 1)
            v.push_back(strip(p));
    };
    std::vector<FqPoly> work;
    for (const auto& p : polys)
        push(work, p);
    while (!work.empty()) {
        FqPoly p = work.back();
        work.pop_back();
        bool merged = false;
        for (std::size_t i = 0; i < base.size(); ++i) {
            FqPoly g = FqPoly::gcd(p, base[i]);
            if (g.degree() < 1)
                continue;
            FqPoly b = base[i];
            base.erase(base.begin() + static_cast<std::ptrdiff_t>(i));
            push(work, g);
            push(work, FqPoly::divmod(p, g).first);
            push(work, FqPoly::divmod(b, g).first);
            merged = true;
            break;
        }
        if (!merged && std::find(base.begin(), base.end(), p) == base.end())
            base.push_back(p);
    }
    std::sort(base.begin(), base.end());
    return base;
}

inline long poly_valuation(FqPoly f, const FqPoly& b)
{
    long v = 0;
    for (;;) {
        auto [quot, rem] = FqPoly::divmod(f, b);
        if (!rem.is_zero())
            return v;
        f = quot;
        ++v;
    }
}

// a^(-1) mod m, when gcd(a, m) = 1
inline std::optional<FqPoly> inverse_mod(const FqPoly& a, const FqPoly& m)
{
    const FiniteField& f = m.field();
    FqPoly r0 = m, r1 = FqPoly::divmod(a, m).second;
    FqPoly s0(f), s1 = FqPoly::constant(FqElem(f, 1));
    while (!r1.is_zero()) {
        auto [quot, rem] = FqPoly::divmod(r0, r1);
        r0 = r1;
        r1 = rem;
        FqPoly s2 = s0 - quot * s1;
        s0 = s1;
        s1 = s2;
    }
    if (r0.degree() != 0)
        return std::nullopt;
    return FqPoly::divmod(s0.scaled(r0.leading().inverse()), m).second;
}

} // namespace detail

/// Gamma = <g_1, ..., g_r> in (F_q(t)^*)^s; e -> prod g_i^(e_i).
class TorusSubgroup {
public:
    TorusSubgroup(const FiniteField& f, std::vector<GmPoint> generators) : field_(&f), gens_(std::move(generators))
    {
        if (gens_.empty())
            throw InputError("torus subgroup: at least one generator is required");
        s_ = gens_[0].size();
        if (s_ == 0)
            throw InputError("torus subgroup: ambient dimension must be >= 1");
        for (const auto& g : gens_) {
            if (g.size() != s_)
                throw InputError("torus subgroup: generators of different lengths");
            for (const auto& x : g) {
                if (&x.field() != field_)
                    throw InputError("torus subgroup: coordinate over a different field");
                if (x.is_zero())
                    throw InputError("torus subgroup: coordinates must be nonzero");
            }
        }
    }

    const FiniteField& field() const { return *field_; }
    std::int64_t q() const { return field_->order(); }
    std::size_t s() const { return s_; }
    std::size_t r() const { return gens_.size(); }
    const std::vector<GmPoint>& generators() const { return gens_; }

    /// Decides multiplicative independence through valuations at a coprime
    /// base of all numerators and denominators.
    IndependenceCertificate certify_independence() const
    {
        IndependenceCertificate cert;
        std::vector<FqPoly> polys;
        for (const auto& g : gens_)
            for (const auto& x : g) {
                polys.push_back(x.num());
                polys.push_back(x.den());
            }
        cert.coprime_base = detail::coprime_base(polys);
        const std::size_t nb = cert.coprime_base.size();
        cert.valuations = IntMatrix(nb * s_, r());
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t j = 0; j < s_; ++j)
                for (std::size_t i = 0; i < r(); ++i) {
                    const FqRat& x = gens_[i][j];
                    cert.valuations(b * s_ + j, i) = detail::poly_valuation(x.num(), cert.coprime_base[b]) -
                                                     detail::poly_valuation(x.den(), cert.coprime_base[b]);
                }
        IntMatrix ker = integer_kernel(cert.valuations);
        cert.independent = ker.cols() == 0;
        if (!cert.independent)
            cert.relation = ker.column(0);
        return cert;
    }

private:
    const FiniteField* field_;
    std::size_t s_ = 0;
    std::vector<GmPoint> gens_;
};

inline GmPoint gamma_element(const TorusSubgroup& g, const ExpTuple& e)
{
    if (e.size() != g.r())
        throw InputError("gamma_element: expected " + std::to_string(g.r()) + " exponents, got " +
                         std::to_string(e.size()));
    GmPoint out(g.s(), FqRat::one(g.field()));
    for (std::size_t i = 0; i < g.r(); ++i) {
        if (e[i] == 0)
            continue;
        for (std::size_t j = 0; j < g.s(); ++j)
            out[j] = out[j] * g.generators()[i][j].pow(e[i]);
    }
    return out;
}

/// coeff * prod_j x_j^(powers_j)
struct RelationTerm {
    FqRat coeff;
    std::vector<std::size_t> powers;
};

/// sum of terms = rhs.
struct Relation {
    std::vector<RelationTerm> terms;
    FqRat rhs;

    /// sum_l a_l x_l = b.
    static Relation linear(const std::vector<FqRat>& a, const FqRat& b)
    {
        Relation rel{{}, b};
        for (std::size_t l = 0; l < a.size(); ++l) {
            std::vector<std::size_t> powers(a.size(), 0);
            powers[l] = 1;
            rel.terms.push_back(RelationTerm{a[l], powers});
        }
        return rel;
    }

    FqRat evaluate(const GmPoint& x) const
    {
        FqRat v = FqRat::zero(rhs.field());
        for (const auto& term : terms) {
            FqRat m = term.coeff;
            for (std::size_t j = 0; j < x.size(); ++j)
                if (term.powers[j])
                    m = m * x[j].pow(static_cast<long long>(term.powers[j]));
            v = v + m;
        }
        return v - rhs;
    }
    bool holds(const GmPoint& x) const { return evaluate(x).is_zero(); }

    /// All coefficients satisfy c^q = c, so x -> x^q maps solutions to solutions.
    bool frobenius_fixed(std::int64_t q) const
    {
        auto fixed = [&](const FqRat& c) { return frobpow_rat(c, q, 1) == c; };
        if (!fixed(rhs))
            return false;
        for (const auto& term : terms)
            if (!fixed(term.coeff))
                return false;
        return true;
    }

    void check(const TorusSubgroup& g) const
    {
        if (&rhs.field() != &g.field())
            throw InputError("relation over a different field");
        for (const auto& term : terms) {
            if (term.powers.size() != g.s())
                throw InputError("relation term with " + std::to_string(term.powers.size()) +
                                 " exponents in dimension " + std::to_string(g.s()));
            if (&term.coeff.field() != &g.field())
                throw InputError("relation over a different field");
        }
    }
};

struct ClosureCheck {
    bool applicable = false;  ///< the relation is fixed by Frobenius
    std::size_t checked = 0;  ///< solutions e with q e still in the box
    bool holds = true;
};

struct HypersurfaceResult {
    std::vector<ExpTuple> solutions;  ///< sorted
    ClosureCheck closure;
};

namespace detail {

// ring F_q[t]/(m) with every relevant polynomial a unit; a cheap image of the relation
struct ResidueFilter {
    FqPoly m;
    FqPoly reduce(const FqPoly& a) const { return FqPoly::divmod(a, m).second; }
    FqPoly mul(const FqPoly& a, const FqPoly& b) const { return reduce(a * b); }
    FqPoly image(const FqRat& x) const { return mul(x.num(), *inverse_mod(x.den(), m)); }
};

inline ResidueFilter choose_filter(const std::vector<FqPoly>& avoid, const FiniteField& f, long degree)
{
    for (std::int64_t code = 1;; ++code) {
        std::vector<FqElem> c;
        for (std::int64_t x = code; x > 0; x /= f.order())
            c.push_back(FqElem::from_code(f, x % f.order()));
        c.resize(static_cast<std::size_t>(degree), FqElem(f));
        c.push_back(FqElem(f, 1));
        FqPoly m(f, c);
        bool ok = true;
        for (const auto& a : avoid)
            ok = ok && (a.degree() < 1 || FqPoly::gcd(a, m).degree() < 1);
        if (ok)
            return ResidueFilter{m};
    }
}

} // namespace detail

/// Every e in [-B, B]^r with gamma(e) on the hypersurface.  Candidates are
/// screened in a residue ring of F_q[t] and confirmed exactly.
inline HypersurfaceResult intersect_hypersurface(const TorusSubgroup& g, const Relation& rel, std::int64_t box)
{
    if (box < 0)
        throw InputError("intersect_hypersurface: box must be >= 0");
    rel.check(g);
    const std::size_t r = g.r(), s = g.s();
    std::vector<FqPoly> avoid;
    for (const auto& gen : g.generators())
        for (const auto& x : gen) {
            avoid.push_back(x.num());
            avoid.push_back(x.den());
        }
    for (const auto& term : rel.terms)
        avoid.push_back(term.coeff.den());
    avoid.push_back(rel.rhs.den());
    const auto filt = detail::choose_filter(avoid, g.field(), 16);

    // pw[i][j][e + box] = image of g_ij^e
    std::vector<std::vector<std::vector<FqPoly>>> pw(r, std::vector<std::vector<FqPoly>>(s));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            FqPoly x = filt.image(g.generators()[i][j]);
            FqPoly xinv = *detail::inverse_mod(x, filt.m);
            std::vector<FqPoly>& v = pw[i][j];
            v.assign(static_cast<std::size_t>(2 * box + 1), FqPoly(g.field()));
            v[static_cast<std::size_t>(box)] = FqPoly::constant(FqElem(g.field(), 1));
            for (std::int64_t e = 1; e <= box; ++e) {
                v[static_cast<std::size_t>(box + e)] = filt.mul(v[static_cast<std::size_t>(box + e - 1)], x);
                v[static_cast<std::size_t>(box - e)] = filt.mul(v[static_cast<std::size_t>(box - e + 1)], xinv);
            }
        }
    std::vector<FqPoly> coeff;
    for (const auto& term : rel.terms)
        coeff.push_back(filt.image(term.coeff));
    const FqPoly rhs = filt.image(rel.rhs);

    HypersurfaceResult out;
    ExpTuple e(r, -box);
    std::vector<FqPoly> x(s);
    for (;;) {
        for (std::size_t j = 0; j < s; ++j) {
            x[j] = pw[0][j][static_cast<std::size_t>(e[0] + box)];
            for (std::size_t i = 1; i < r; ++i)
                x[j] = filt.mul(x[j], pw[i][j][static_cast<std::size_t>(e[i] + box)]);
        }
        FqPoly v = FqPoly(g.field());
        for (std::size_t l = 0; l < rel.terms.size(); ++l) {
            FqPoly m = coeff[l];
            for (std::size_t j = 0; j < s; ++j)
                for (std::size_t k = 0; k < rel.terms[l].powers[j]; ++k)
                    m = filt.mul(m, x[j]);
            v = v + m;
        }
        if (v == rhs && rel.holds(gamma_element(g, e)))
            out.solutions.push_back(e);
        std::size_t i = r;
        while (i > 0 && ++e[i - 1] > box)
            e[--i] = -box;
        if (i == 0)
            break;
    }

    out.closure.applicable = rel.frobenius_fixed(g.q());
    if (out.closure.applicable) {
        std::set<ExpTuple> sol(out.solutions.begin(), out.solutions.end());
        for (const auto& p : out.solutions) {
            ExpTuple qp;
            bool inside = true;
            for (auto c : p) {
                qp.push_back(c * g.q());
                inside = inside && std::abs(qp.back()) <= box;
            }
            if (!inside)
                continue;
            ++out.closure.checked;
            out.closure.holds = out.closure.holds && sol.count(qp);
        }
    }
    return out;
}

/// Exponent module Z^r with F = multiplication by q.
inline FgModule exponent_module(std::size_t r, std::int64_t q)
{
    IntMatrix a(r, r);
    for (std::size_t i = 0; i < r; ++i)
        a(i, i) = q;
    return FgModule::make(r, {}, a, IntMatrix(0, r), IntMatrix(0, 0), IntPoly{-q, 1});
}

struct OrbitCluster {
    GrouplessFSet fset;            ///< over the exponent module
    std::vector<ExpTuple> points;  ///< the members inside the box
};

struct CosetCluster {
    ExpTuple base;                 ///< least member
    IntMatrix lattice;             ///< canonical basis, as columns
    std::vector<ExpTuple> points;  ///< (base + lattice) inside the box
};

struct Clustering {
    std::vector<OrbitCluster> orbits;
    std::vector<CosetCluster> cosets;
    std::vector<ExpTuple> unexplained;
};

namespace detail {

inline IntVector to_big(const ExpTuple& e) { return IntVector(e.begin(), e.end()); }

inline bool in_box(const ExpTuple& e, std::int64_t box)
{
    for (auto c : e)
        if (std::abs(c) > box)
            return false;
    return true;
}

inline ExpTuple shifted(const ExpTuple& e, const ExpTuple& h, std::int64_t k)
{
    ExpTuple out(e);
    for (std::size_t i = 0; i < e.size(); ++i)
        out[i] += k * h[i];
    return out;
}

// primitive directions of height <= h_max, first nonzero entry positive
inline std::vector<ExpTuple> directions(std::size_t r, std::int64_t h_max)
{
    std::vector<ExpTuple> out;
    ExpTuple h(r, -h_max);
    for (;;) {
        std::int64_t g = 0;
        std::size_t lead = r;
        for (std::size_t i = 0; i < r; ++i) {
            g = std::gcd(g, h[i]);
            if (lead == r && h[i] != 0)
                lead = i;
        }
        if (g == 1 && h[lead] > 0)
            out.push_back(h);
        std::size_t i = r;
        while (i > 0 && ++h[i - 1] > h_max)
            h[--i] = -h_max;
        if (i == 0)
            break;
    }
    return out;
}

// points of the line e + Z h inside the box
inline std::vector<ExpTuple> line_in_box(const ExpTuple& e, const ExpTuple& h, std::int64_t box)
{
    std::vector<ExpTuple> out{e};
    for (std::int64_t k = 1; in_box(shifted(e, h, k), box); ++k)
        out.push_back(shifted(e, h, k));
    for (std::int64_t k = -1; in_box(shifted(e, h, k), box); --k)
        out.push_back(shifted(e, h, k));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<ExpTuple> coset_in_box(const ExpTuple& base, const IntMatrix& lattice, std::int64_t box)
{
    const std::size_t r = base.size();
    HermiteForm hf = hnf(lattice);
    std::vector<ExpTuple> out;
    ExpTuple p(r, -box);
    for (;;) {
        if (solve_echelon(hf, vec_sub(to_big(p), to_big(base))))
            out.push_back(p);
        std::size_t i = r;
        while (i > 0 && ++p[i - 1] > box)
            p[--i] = -box;
        if (i == 0)
            break;
    }
    return out;
}

inline bool norm_less(const ExpTuple& a, const ExpTuple& b)
{
    std::int64_t na = 0, nb = 0;
    for (auto c : a)
        na += std::abs(c);
    for (auto c : b)
        nb += std::abs(c);
    return na != nb ? na < nb : a < b;
}

} // namespace detail

/// Splits a solution set from the box [-B, B]^r into lattice cosets (full
/// within the box, along directions of height <= h_max, at least three
/// points per line), Frobenius orbits {q^n e_0 : n >= 0} with at least two
/// points in the box, the singleton {0}, and unexplained points.
inline Clustering cluster_fsets(const std::vector<ExpTuple>& solutions, std::int64_t q, std::int64_t box,
                                std::int64_t h_max = 4)
{
    Clustering out;
    if (solutions.empty())
        return out;
    const std::size_t r = solutions[0].size();
    for (const auto& e : solutions)
        if (e.size() != r || !detail::in_box(e, box))
            throw InputError("cluster_fsets: solutions must lie in [-" + std::to_string(box) + ", " +
                             std::to_string(box) + "]^" + std::to_string(r));
    std::set<ExpTuple> left(solutions.begin(), solutions.end());
    const std::set<ExpTuple> all = left;
    const auto dirs = detail::directions(r, h_max);
    const FgModule emod = exponent_module(r, q);

    // subgroup parts
    for (const auto& s : all) {
        if (!left.count(s))
            continue;
        std::vector<ExpTuple> good;
        for (const auto& h : dirs) {
            auto line = detail::line_in_box(s, h, box);
            if (line.size() < 3)
                continue;
            bool full = true;
            for (const auto& p : line)
                full = full && left.count(p);
            if (full)
                good.push_back(h);
        }
        if (good.empty())
            continue;
        auto attempt = [&](const std::vector<ExpTuple>& hs) -> bool {
            IntMatrix gens(r, hs.size());
            for (std::size_t c = 0; c < hs.size(); ++c)
                for (std::size_t i = 0; i < r; ++i)
                    gens(i, c) = hs[c][i];
            IntMatrix basis = canonical_basis(gens);
            auto pts = detail::coset_in_box(s, basis, box);
            for (const auto& p : pts)
                if (!left.count(p))
                    return false;
            for (const auto& p : pts)
                left.erase(p);
            ExpTuple base = *std::min_element(pts.begin(), pts.end(), detail::norm_less);
            out.cosets.push_back(CosetCluster{base, basis, std::move(pts)});
            return true;
        };
        if (!attempt(good))
            for (const auto& h : good)
                if (attempt({h}))
                    break;
    }

    // Frobenius orbits and the fixed point 0
    std::vector<ExpTuple> rest(left.begin(), left.end());
    std::sort(rest.begin(), rest.end(), detail::norm_less);
    for (const auto& e0 : rest) {
        if (!left.count(e0))
            continue;
        if (std::all_of(e0.begin(), e0.end(), [](std::int64_t c) { return c == 0; })) {
            left.erase(e0);
            out.orbits.push_back(OrbitCluster{GrouplessFSet(emod.zero()), {e0}});
            continue;
        }
        std::vector<ExpTuple> chain;
        bool ok = true;
        for (ExpTuple p = e0; detail::in_box(p, box); p = detail::shifted(ExpTuple(r, 0), p, q)) {
            ok = ok && left.count(p);
            chain.push_back(p);
        }
        if (!ok || chain.size() < 2)
            continue;
        for (const auto& p : chain)
            left.erase(p);
        out.orbits.push_back(
            OrbitCluster{GrouplessFSet(emod.zero(), {FSetTerm{emod.element(detail::to_big(e0)), 1}}), chain});
    }
    out.unexplained.assign(left.begin(), left.end());
    std::sort(out.orbits.begin(), out.orbits.end(),
              [](const OrbitCluster& a, const OrbitCluster& b) { return a.fset < b.fset; });
    return out;
}

} // namespace frobset

#endif // FROBSET_GMDEMO_HPP
