#ifndef FROBSET_MODULE_HPP
#define FROBSET_MODULE_HPP

// Finitely generated Z[F]-modules M = Z^m + (+)_i Z/d_i with F acting by the
// block matrix [[A_ff, 0], [A_tf, A_tt]], together with a monic integer
// polynomial f with f(F) = 0.

#include "polyz.hpp"

#include <optional>
#include <sstream>
#include <string>

namespace frobset {

/// Point of a module: integer free coordinates plus torsion coordinates
/// kept reduced into [0, d_i).
struct ModElement {
    IntVector free;
    std::vector<std::int64_t> torsion;

    friend bool operator==(const ModElement& a, const ModElement& b)
    {
        return a.free == b.free && a.torsion == b.torsion;
    }
    friend bool operator<(const ModElement& a, const ModElement& b)
    {
        if (a.free != b.free)
            return a.free < b.free;
        return a.torsion < b.torsion;
    }

    std::string str() const
    {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < free.size(); ++i)
            os << (i ? ", " : "") << free[i];
        if (!torsion.empty()) {
            os << (free.empty() ? "; " : " ; ");
            for (std::size_t i = 0; i < torsion.size(); ++i)
                os << (i ? ", " : "") << torsion[i];
        }
        return os.str() + "]";
    }
};

/// Table z[j][n] of the fundamental sequences of a monic recurrence.
struct ZTable {
    std::size_t g = 0;
    std::vector<IntVector> z;
    const BigInt& operator()(std::size_t j, std::size_t n) const { return z[j][n]; }
    std::size_t size() const { return z.empty() ? 0 : z[0].size(); }
};

/// z_{j,n} for 0 <= j < g, 0 <= n <= n_max, where f = X^g - sum alpha_i X^i:
/// z_{j,n} = [n == j] for n < g and z_{j,n} = sum_l alpha_l z_{j,n-g+l} after.
inline ZTable z_block(const IntPoly& f, std::size_t n_max)
{
    if (!is_monic(f) || degree(f) < 1)
        throw InputError("z_block: recurrence polynomial must be monic of degree >= 1");
    const auto g = static_cast<std::size_t>(degree(f));
    IntVector alpha(g);
    for (std::size_t i = 0; i < g; ++i)
        alpha[i] = -f[i];
    ZTable t;
    t.g = g;
    t.z.assign(g, IntVector(n_max + 1));
    for (std::size_t j = 0; j < g; ++j)
        for (std::size_t n = 0; n <= n_max; ++n) {
            if (n < g) {
                t.z[j][n] = (n == j) ? 1 : 0;
                continue;
            }
            BigInt s = 0;
            for (std::size_t l = 0; l < g; ++l)
                s += alpha[l] * t.z[j][n - g + l];
            t.z[j][n] = s;
        }
    return t;
}

class FgModule {
public:
    /// Checks shapes and the homomorphism conditions of the torsion blocks;
    /// reduces torsion rows modulo their orders.  When `minpoly` is absent
    /// a candidate is proposed (see propose_minpoly).
    static FgModule make(std::size_t free_rank, std::vector<std::int64_t> torsion_orders, IntMatrix a_ff,
                         IntMatrix a_tf, IntMatrix a_tt, std::optional<IntPoly> minpoly = std::nullopt)
    {
        const std::size_t m = free_rank, s = torsion_orders.size();
        std::vector<std::string> problems;
        if (a_ff.rows() != m || a_ff.cols() != m)
            problems.push_back("A_ff must be " + std::to_string(m) + "x" + std::to_string(m));
        if (s > 0 && (a_tf.rows() != s || a_tf.cols() != m))
            problems.push_back("A_tf must be " + std::to_string(s) + "x" + std::to_string(m));
        if (s > 0 && (a_tt.rows() != s || a_tt.cols() != s))
            problems.push_back("A_tt must be " + std::to_string(s) + "x" + std::to_string(s));
        if (s == 0 && (!a_tf.is_zero() || a_tf.rows() != 0 || !a_tt.is_zero() || a_tt.rows() != 0))
            problems.push_back("torsion blocks given for a module without torsion");
        for (std::size_t i = 0; i < s; ++i)
            if (torsion_orders[i] < 2)
                problems.push_back("torsion order d_" + std::to_string(i) + " = " + std::to_string(torsion_orders[i]) +
                                   " must be >= 2");
        if (!problems.empty())
            throw InputError(join(problems));
        if (s == 0) {
            a_tf = IntMatrix(0, m);
            a_tt = IntMatrix(0, 0);
        }
        for (std::size_t i = 0; i < s; ++i) {
            const BigInt di = torsion_orders[i];
            for (std::size_t j = 0; j < m; ++j)
                a_tf(i, j) = mod_floor(a_tf(i, j), di);
            for (std::size_t j = 0; j < s; ++j) {
                a_tt(i, j) = mod_floor(a_tt(i, j), di);
                if ((BigInt(torsion_orders[j]) * a_tt(i, j)) % di != 0)
                    problems.push_back("homomorphism condition violated: d_" + std::to_string(j) + " * A_tt(" +
                                       std::to_string(i) + "," + std::to_string(j) + ") = " +
                                       (BigInt(torsion_orders[j]) * a_tt(i, j)).str() + " is not 0 mod d_" +
                                       std::to_string(i) + " = " + di.str());
            }
        }
        if (!problems.empty())
            throw InputError(join(problems));
        FgModule mod;
        mod.m_ = m;
        mod.d_ = std::move(torsion_orders);
        mod.a_ff_ = std::move(a_ff);
        mod.a_tf_ = std::move(a_tf);
        mod.a_tt_ = std::move(a_tt);
        if (minpoly) {
            trim(*minpoly);
            if (!is_monic(*minpoly) || degree(*minpoly) < 1)
                throw InputError("minimal polynomial must be monic of degree >= 1");
            mod.f_ = *minpoly;
        } else {
            mod.f_ = propose_minpoly_for(mod);
        }
        return mod;
    }

    /// Z with F = multiplication by q and f = X - q.
    static FgModule multiplicative(std::int64_t q)
    {
        return make(1, {}, IntMatrix{{q}}, IntMatrix(0, 1), IntMatrix(0, 0), IntPoly{-q, 1});
    }

    std::size_t free_rank() const { return m_; }
    std::size_t torsion_rank() const { return d_.size(); }
    const std::vector<std::int64_t>& torsion_orders() const { return d_; }
    const IntMatrix& a_ff() const { return a_ff_; }
    const IntMatrix& a_tf() const { return a_tf_; }
    const IntMatrix& a_tt() const { return a_tt_; }
    const IntPoly& minpoly() const { return f_; }
    std::size_t g() const { return static_cast<std::size_t>(degree(f_)); }

    /// Torsion group order (product of the d_i).
    std::int64_t torsion_size() const
    {
        std::int64_t n = 1;
        for (auto d : d_)
            n *= d;
        return n;
    }

    ModElement element(IntVector free, std::vector<std::int64_t> torsion = {}) const
    {
        if (free.size() != m_ || torsion.size() != d_.size())
            throw InputError("element shape does not match module (free rank " + std::to_string(m_) +
                             ", torsion rank " + std::to_string(d_.size()) + ")");
        for (std::size_t i = 0; i < torsion.size(); ++i)
            torsion[i] = mod_floor(torsion[i], d_[i]);
        return ModElement{std::move(free), std::move(torsion)};
    }

    ModElement zero() const { return ModElement{IntVector(m_), std::vector<std::int64_t>(d_.size(), 0)}; }

    /// Standard generators: free basis vectors first, then torsion generators.
    std::vector<ModElement> generators() const
    {
        std::vector<ModElement> out;
        for (std::size_t i = 0; i < m_; ++i) {
            ModElement e = zero();
            e.free[i] = 1;
            out.push_back(e);
        }
        for (std::size_t i = 0; i < d_.size(); ++i) {
            ModElement e = zero();
            e.torsion[i] = 1;
            out.push_back(e);
        }
        return out;
    }

    ModElement add(const ModElement& a, const ModElement& b) const
    {
        ModElement r = a;
        for (std::size_t i = 0; i < m_; ++i)
            r.free[i] += b.free[i];
        for (std::size_t i = 0; i < d_.size(); ++i)
            r.torsion[i] = (r.torsion[i] + b.torsion[i]) % d_[i];
        return r;
    }

    ModElement sub(const ModElement& a, const ModElement& b) const { return add(a, scale(b, -1)); }

    ModElement scale(const ModElement& a, const BigInt& c) const
    {
        ModElement r = a;
        for (auto& x : r.free)
            x *= c;
        for (std::size_t i = 0; i < d_.size(); ++i)
            r.torsion[i] = static_cast<std::int64_t>(mod_floor(BigInt(r.torsion[i]) * c, BigInt(d_[i])));
        return r;
    }

    /// One application of F.
    ModElement apply(const ModElement& p) const
    {
        ModElement r;
        r.free = a_ff_ * p.free;
        r.torsion.assign(d_.size(), 0);
        for (std::size_t i = 0; i < d_.size(); ++i) {
            BigInt acc = 0;
            for (std::size_t j = 0; j < m_; ++j)
                acc += a_tf_(i, j) * p.free[j];
            for (std::size_t j = 0; j < d_.size(); ++j)
                acc += a_tt_(i, j) * p.torsion[j];
            r.torsion[i] = static_cast<std::int64_t>(mod_floor(acc, BigInt(d_[i])));
        }
        return r;
    }

    /// The block matrix acting on Z^(m+s) that lifts F.
    IntMatrix lifted_matrix() const
    {
        const std::size_t n = m_ + d_.size();
        IntMatrix a(n, n);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < m_; ++j)
                a(i, j) = a_ff_(i, j);
        for (std::size_t i = 0; i < d_.size(); ++i) {
            for (std::size_t j = 0; j < m_; ++j)
                a(m_ + i, j) = a_tf_(i, j);
            for (std::size_t j = 0; j < d_.size(); ++j)
                a(m_ + i, m_ + j) = a_tt_(i, j);
        }
        return a;
    }

    /// Product of two lifted matrices with torsion rows reduced mod d_i; valid
    /// because lifts of endomorphisms preserve the relation lattice.
    IntMatrix lifted_product(const IntMatrix& x, const IntMatrix& y) const
    {
        IntMatrix p = x * y;
        for (std::size_t i = 0; i < d_.size(); ++i)
            for (std::size_t j = 0; j < p.cols(); ++j)
                p(m_ + i, j) = mod_floor(p(m_ + i, j), BigInt(d_[i]));
        return p;
    }

    ModElement apply_lifted(const IntMatrix& a, const ModElement& p) const
    {
        IntVector v(p.free);
        for (auto t : p.torsion)
            v.emplace_back(t);
        IntVector w = a * v;
        ModElement r = zero();
        for (std::size_t i = 0; i < m_; ++i)
            r.free[i] = w[i];
        for (std::size_t i = 0; i < d_.size(); ++i)
            r.torsion[i] = static_cast<std::int64_t>(mod_floor(w[m_ + i], BigInt(d_[i])));
        return r;
    }

    /// Applies the polynomial `poly` in F to p.
    ModElement apply_poly(const IntPoly& poly, const ModElement& p) const
    {
        ModElement acc = zero(), power = p;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            if (poly[i] != 0)
                acc = add(acc, scale(power, poly[i]));
            if (i + 1 < poly.size())
                power = apply(power);
        }
        return acc;
    }

    bool annihilated_by(const IntPoly& poly) const
    {
        for (const auto& e : generators())
            if (!(apply_poly(poly, e) == zero()))
                return false;
        return true;
    }

    /// Every element of the torsion subgroup, in odometer order.
    std::vector<std::vector<std::int64_t>> torsion_elements() const
    {
        if (torsion_size() > 1'000'000)
            throw InputError("torsion subgroup too large to enumerate");
        std::vector<std::vector<std::int64_t>> out;
        std::vector<std::int64_t> cur(d_.size(), 0);
        for (;;) {
            out.push_back(cur);
            std::size_t i = 0;
            while (i < d_.size() && ++cur[i] == d_[i])
                cur[i++] = 0;
            if (i == d_.size())
                break;
        }
        return out;
    }

    /// Characteristic polynomial of A_ff when it annihilates the module,
    /// otherwise charpoly(A_ff) * charpoly(A_tt), which always does
    /// (Cayley-Hamilton on the block-triangular lift).
    static IntPoly propose_minpoly_for(const FgModule& mod)
    {
        IntPoly cf = charpoly(mod.a_ff_);
        if (degree(cf) >= 1 && mod.annihilated_by(cf))
            return cf;
        IntPoly full = poly_mul(cf, charpoly(mod.a_tt_));
        if (degree(full) < 1)
            full = IntPoly{0, 1};
        return full;
    }

private:
    static std::string join(const std::vector<std::string>& parts)
    {
        std::string s;
        for (const auto& p : parts)
            s += (s.empty() ? "" : "; ") + p;
        return s;
    }

    std::size_t m_ = 0;
    std::vector<std::int64_t> d_;
    IntMatrix a_ff_, a_tf_, a_tt_;
    IntPoly f_;
};

/// F^n P by square-and-multiply on the lifted block matrix.
inline ModElement frob_power(const FgModule& mod, const ModElement& p, std::uint64_t n)
{
    if (n <= 4) {
        ModElement r = p;
        for (std::uint64_t i = 0; i < n; ++i)
            r = mod.apply(r);
        return r;
    }
    const IntMatrix a = mod.lifted_matrix();
    IntMatrix result = IntMatrix::identity(a.rows()), base = a;
    while (n > 0) {
        if (n & 1)
            result = mod.lifted_product(result, base);
        n >>= 1;
        if (n)
            base = mod.lifted_product(base, base);
    }
    return mod.apply_lifted(result, p);
}

/// sum_{j<g} z_{j,n} F^j P using a precomputed table (size > n).
inline ModElement frob_power_via_z(const FgModule& mod, const ModElement& p, std::size_t n, const ZTable& z)
{
    if (z.g != mod.g() || z.size() <= n)
        throw InputError("frob_power_via_z: z table does not cover n");
    ModElement acc = mod.zero(), power = p;
    for (std::size_t j = 0; j < z.g; ++j) {
        acc = mod.add(acc, mod.scale(power, z(j, n)));
        power = mod.apply(power);
    }
    return acc;
}

inline ModElement frob_power_via_z(const FgModule& mod, const ModElement& p, std::size_t n)
{
    return frob_power_via_z(mod, p, n, z_block(mod.minpoly(), n));
}

/// F^b as a module of its own (same group, F replaced by F^b).
inline FgModule power_module(const FgModule& mod, std::uint64_t b)
{
    if (b == 0)
        throw InputError("power_module: b must be positive");
    const IntMatrix a = mod.lifted_matrix();
    IntMatrix r = IntMatrix::identity(a.rows());
    for (std::uint64_t i = 0; i < b; ++i)
        r = mod.lifted_product(r, a);
    const std::size_t m = mod.free_rank(), s = mod.torsion_rank();
    IntMatrix ff(m, m), tf(s, m), tt(s, s);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            ff(i, j) = r(i, j);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            tf(i, j) = r(m + i, j);
        for (std::size_t j = 0; j < s; ++j)
            tt(i, j) = r(m + i, m + j);
    }
    return FgModule::make(m, mod.torsion_orders(), ff, tf, tt);
}

// ---------------------------------------------------------------------------
// Frobenius-ring axiom proxies

struct AxiomCheck {
    bool ok = true;
    std::string detail;
};

/// Evidence from the image-lattice chain L_n = A_ff^n Z^m.
struct ImageChain {
    long box = 0;                                  ///< sup-norm bound of the search
    std::vector<std::optional<BigInt>> shortest;   ///< squared norm per step, none if > box
    bool certified = false;  ///< no nonzero vector of sup-norm <= box survives the chain
};

struct ValidationReport {
    AxiomCheck integrality;      ///< (ii): f monic, f(F) = 0 on generators
    AxiomCheck zero_divisor;     ///< (iii): det A_ff != 0, A_tt injective on torsion
    AxiomCheck separatedness;    ///< (iv): proxy on A_ff, see validate()
    std::vector<IntPoly> charpoly_factors;
    std::vector<IntPoly> unit_factors;
    ImageChain chain;
    bool all_ok() const { return integrality.ok && zero_divisor.ok && separatedness.ok; }
};

/// Shortest nonzero vector (squared Euclidean norm) of the lattice among
/// vectors with all |v_i| <= box.
inline std::optional<BigInt> shortest_in_box(const IntMatrix& basis, long box)
{
    const std::size_t m = basis.rows();
    if (m == 0)
        return std::nullopt;
    HermiteForm hf = hnf(basis);
    std::optional<BigInt> best;
    IntVector v(m, BigInt(-box));
    for (;;) {
        bool nonzero = false;
        for (const auto& x : v)
            if (x != 0)
                nonzero = true;
        if (nonzero && solve_echelon(hf, v)) {
            BigInt n2 = dot(v, v);
            if (!best || n2 < *best)
                best = n2;
        }
        std::size_t i = 0;
        while (i < m && ++v[i] > box)
            v[i++] = -box;
        if (i == m)
            break;
    }
    return best;
}

/// Per-axiom validation.  Axiom (iv) is a statement about the ring Z[F];
/// the module-level proxy inspects A_ff only: (a) an irreducible factor of
/// charpoly(A_ff) with constant term +-1 fails the check; (b) the chain of
/// image lattices A_ff^n Z^m is searched for short vectors as supporting
/// evidence.  Torsion is ignored by (iv): an injective A_tt is bijective on
/// the finite torsion group.
inline ValidationReport validate(const FgModule& mod, std::size_t chain_steps = 10, long chain_box = 3)
{
    ValidationReport rep;

    // (ii)
    if (!is_monic(mod.minpoly())) {
        rep.integrality = {false, "f is not monic"};
    } else {
        auto gens = mod.generators();
        std::string bad;
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (!(mod.apply_poly(mod.minpoly(), gens[i]) == mod.zero()))
                bad += (bad.empty() ? "" : ", ") + std::string(i < mod.free_rank() ? "e" : "t") +
                       std::to_string(i < mod.free_rank() ? i : i - mod.free_rank());
        rep.integrality = bad.empty() ? AxiomCheck{true, "f(F) = 0 on all generators"}
                                      : AxiomCheck{false, "f(F) != 0 on generators " + bad};
    }

    // (iii)
    {
        BigInt det = determinant(mod.a_ff());
        std::string detail;
        bool ok = true;
        if (mod.free_rank() > 0 && det == 0) {
            ok = false;
            detail = "det(A_ff) = 0";
        }
        if (mod.torsion_rank() > 0) {
            for (const auto& t : mod.torsion_elements()) {
                bool nonzero = false;
                for (auto x : t)
                    nonzero = nonzero || x != 0;
                if (!nonzero)
                    continue;
                ModElement e = mod.zero();
                e.torsion = t;
                if (mod.apply(e) == mod.zero()) {
                    ok = false;
                    detail += std::string(detail.empty() ? "" : "; ") + "A_tt kills the torsion element " + e.str();
                    break;
                }
            }
        }
        if (ok)
            detail = "det(A_ff) = " + det.str() + (mod.torsion_rank() ? ", A_tt injective on torsion" : "");
        rep.zero_divisor = {ok, detail};
    }

    // (iv)
    {
        if (mod.free_rank() == 0) {
            rep.separatedness = {true, "no free part"};
        } else {
            rep.charpoly_factors = factor_monic(charpoly(mod.a_ff()));
            for (const auto& fac : rep.charpoly_factors)
                if (abs(fac[0]) == 1)
                    rep.unit_factors.push_back(fac);
            rep.chain.box = chain_box;
            IntMatrix power = IntMatrix::identity(mod.free_rank());
            for (std::size_t n = 1; n <= chain_steps; ++n) {
                power = power * mod.a_ff();
                rep.chain.shortest.push_back(shortest_in_box(power, chain_box));
            }
            rep.chain.certified = !rep.chain.shortest.empty() && !rep.chain.shortest.back().has_value();
            if (rep.unit_factors.empty()) {
                rep.separatedness = {true, "no factor of charpoly(A_ff) has constant term +-1"};
            } else {
                std::string fs;
                for (const auto& fac : rep.unit_factors)
                    fs += (fs.empty() ? "" : ", ") + poly_to_string(fac);
                rep.separatedness = {false, "charpoly(A_ff) has unit-constant factor(s) " + fs +
                                                ": a nonzero sublattice is infinitely F-divisible"};
            }
        }
    }
    return rep;
}

} // namespace frobset

#endif // FROBSET_MODULE_HPP
