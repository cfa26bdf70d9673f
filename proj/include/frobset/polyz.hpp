#ifndef FROBSET_POLYZ_HPP
#define FROBSET_POLYZ_HPP

// Univariate integer polynomials, coefficients stored low degree first.

#include "lattice.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace frobset {

using IntPoly = std::vector<BigInt>;

inline void trim(IntPoly& p)
{
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

/// Degree of p; the zero polynomial has degree -1.
inline long degree(const IntPoly& p)
{
    long d = static_cast<long>(p.size()) - 1;
    while (d >= 0 && p[static_cast<std::size_t>(d)] == 0)
        --d;
    return d;
}

inline bool is_monic(const IntPoly& p)
{
    long d = degree(p);
    return d >= 0 && p[static_cast<std::size_t>(d)] == 1;
}

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b)
{
    if (a.empty() || b.empty())
        return {};
    IntPoly c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] += a[i] * b[j];
    trim(c);
    return c;
}

inline IntPoly poly_sub(const IntPoly& a, const IntPoly& b)
{
    IntPoly c(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        c[i] -= b[i];
    trim(c);
    return c;
}

inline BigInt poly_eval(const IntPoly& p, const BigInt& x)
{
    BigInt acc = 0;
    for (std::size_t i = p.size(); i-- > 0;)
        acc = acc * x + p[i];
    return acc;
}

/// Exact division by a monic divisor; returns nothing if the remainder is nonzero.
inline std::optional<IntPoly> poly_divide_exact(IntPoly a, const IntPoly& monic)
{
    long db = degree(monic);
    if (db < 0 || monic[static_cast<std::size_t>(db)] != 1)
        throw InputError("poly_divide_exact: divisor must be monic");
    trim(a);
    long da = degree(a);
    if (da < db)
        return a.empty() ? std::optional<IntPoly>(IntPoly{}) : std::nullopt;
    IntPoly q(static_cast<std::size_t>(da - db + 1));
    for (long i = da; i >= db; --i) {
        BigInt c = a[static_cast<std::size_t>(i)];
        q[static_cast<std::size_t>(i - db)] = c;
        if (c == 0)
            continue;
        for (long j = 0; j <= db; ++j)
            a[static_cast<std::size_t>(i - db + j)] -= c * monic[static_cast<std::size_t>(j)];
    }
    trim(a);
    if (!a.empty())
        return std::nullopt;
    trim(q);
    return q;
}

/// Characteristic polynomial det(X*I - A) (Faddeev-LeVerrier, exact divisions).
inline IntPoly charpoly(const IntMatrix& a)
{
    const std::size_t n = a.rows();
    if (a.cols() != n)
        throw InputError("charpoly of a non-square matrix");
    IntPoly c(n + 1);
    c[n] = 1;
    IntMatrix m(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A*M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A M_k)/k
        IntMatrix am = a * m;
        for (std::size_t i = 0; i < n; ++i)
            am(i, i) += c[n - k + 1];
        m = am;
        IntMatrix prod = a * m;
        BigInt tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            tr += prod(i, i);
        c[n - k] = -tr / static_cast<long>(k);
    }
    return c;
}

namespace detail {

inline std::vector<BigInt> signed_divisors(const BigInt& value)
{
    BigInt v = abs(value);
    std::vector<BigInt> pos;
    for (BigInt d = 1; d * d <= v; ++d)
        if (v % d == 0) {
            pos.push_back(d);
            if (d * d != v)
                pos.push_back(v / d);
        }
    std::sort(pos.begin(), pos.end());
    std::vector<BigInt> out;
    for (const auto& d : pos) {
        out.push_back(d);
        out.push_back(-d);
    }
    return out;
}

// Monic polynomial of degree d through (x_i, y_i), i < d, if integral.
inline std::optional<IntPoly> monic_interpolate_rational(const std::vector<BigInt>& xs, const std::vector<BigInt>& ys)
{
    const std::size_t d = xs.size();
    BigInt common = 1;
    std::vector<IntPoly> terms;
    std::vector<BigInt> dens;
    for (std::size_t i = 0; i < d; ++i) {
        BigInt xd = 1;
        for (std::size_t e = 0; e < d; ++e)
            xd *= xs[i];
        BigInt target = ys[i] - xd;
        IntPoly basis{1};
        BigInt denom = 1;
        for (std::size_t j = 0; j < d; ++j) {
            if (j == i)
                continue;
            basis = poly_mul(basis, IntPoly{-xs[j], 1});
            denom *= xs[i] - xs[j];
        }
        basis.resize(d);
        for (auto& c : basis)
            c *= target;
        terms.push_back(basis);
        dens.push_back(denom);
        common = lcm(common, denom);
    }
    IntPoly result(d + 1);
    result[d] = 1;
    for (std::size_t c = 0; c < d; ++c) {
        BigInt num = 0;
        for (std::size_t i = 0; i < d; ++i)
            num += terms[i][c] * (common / dens[i]);
        if (num % common != 0)
            return std::nullopt;
        result[c] = num / common;
    }
    return result;
}

// Searches a monic factor of exact degree d of the monic polynomial p.
inline std::optional<IntPoly> find_monic_factor(const IntPoly& p, std::size_t d)
{
    // choose the d evaluation points with the fewest divisors among small integers
    std::vector<std::pair<std::size_t, BigInt>> candidates;
    for (long x = -12; x <= 12; ++x) {
        BigInt v = poly_eval(p, x);
        if (v == 0)
            continue;  // integer roots are handled by the caller
        candidates.emplace_back(signed_divisors(v).size(), BigInt(x));
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    if (candidates.size() < d)
        return std::nullopt;
    std::vector<BigInt> xs;
    std::vector<std::vector<BigInt>> divs;
    for (std::size_t i = 0; i < d; ++i) {
        xs.push_back(candidates[i].second);
        divs.push_back(signed_divisors(poly_eval(p, candidates[i].second)));
    }
    std::vector<std::size_t> idx(d, 0);
    for (;;) {
        std::vector<BigInt> ys(d);
        for (std::size_t i = 0; i < d; ++i)
            ys[i] = divs[i][idx[i]];
        if (auto h = monic_interpolate_rational(xs, ys)) {
            if (poly_divide_exact(p, *h))
                return h;
        }
        std::size_t i = 0;
        while (i < d && ++idx[i] == divs[i].size())
            idx[i++] = 0;
        if (i == d)
            return std::nullopt;
    }
}

} // namespace detail

/// Factorization of a monic integer polynomial into monic irreducible
/// factors over Z (Kronecker's method; meant for the small degrees that
/// occur as characteristic polynomials here).  Factors are sorted by
/// degree, then coefficients.
inline std::vector<IntPoly> factor_monic(IntPoly p)
{
    trim(p);
    if (!is_monic(p))
        throw InputError("factor_monic: polynomial must be monic");
    std::vector<IntPoly> out;
    while (degree(p) >= 1) {
        // integer roots first
        bool found = false;
        BigInt c0 = p[0];
        if (c0 == 0) {
            out.push_back(IntPoly{0, 1});
            p = *poly_divide_exact(p, IntPoly{0, 1});
            continue;
        }
        for (const auto& r : detail::signed_divisors(c0)) {
            if (poly_eval(p, r) == 0) {
                out.push_back(IntPoly{-r, 1});
                p = *poly_divide_exact(p, IntPoly{-r, 1});
                found = true;
                break;
            }
        }
        if (found)
            continue;
        long n = degree(p);
        for (std::size_t d = 2; static_cast<long>(2 * d) <= n && !found; ++d) {
            if (auto h = detail::find_monic_factor(p, d)) {
                out.push_back(*h);
                p = *poly_divide_exact(p, *h);
                found = true;
            }
        }
        if (!found) {
            out.push_back(p);
            break;
        }
    }
    std::sort(out.begin(), out.end(), [](const IntPoly& a, const IntPoly& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    });
    return out;
}

inline std::string poly_to_string(const IntPoly& p, const std::string& var = "X")
{
    std::string s;
    for (long i = degree(p); i >= 0; --i) {
        const BigInt& c = p[static_cast<std::size_t>(i)];
        if (c == 0)
            continue;
        BigInt ac = abs(c);
        if (s.empty())
            s += c < 0 ? "-" : "";
        else
            s += c < 0 ? " - " : " + ";
        if (ac != 1 || i == 0)
            s += ac.str();
        if (i >= 1)
            s += var;
        if (i >= 2)
            s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

} // namespace frobset

#endif // FROBSET_POLYZ_HPP
