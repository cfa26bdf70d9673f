#ifndef FROBSET_LATTICE_HPP
#define FROBSET_LATTICE_HPP

// Integer lattices: column-style Hermite normal form, membership, kernels
// and the Smith form.  A lattice is always the column span of a matrix.

#include "matrix.hpp"

#include <optional>

namespace frobset {

struct HermiteForm {
    IntMatrix H;                      ///< basis * U, lower-triangular echelon
    IntMatrix U;                      ///< unimodular
    std::vector<std::size_t> pivots;  ///< pivot row of column k, k < rank
    std::size_t rank() const { return pivots.size(); }
    /// The nonzero columns of H: the canonical basis of the lattice.
    IntMatrix basis() const { return H.left_columns(rank()); }
};

namespace detail {

// col_a <- x*col_a + y*col_b ; col_b <- u*col_a + v*col_b (old values)
inline void combine_columns(IntMatrix& m, std::size_t a, std::size_t b, const BigInt& x, const BigInt& y,
                            const BigInt& u, const BigInt& v)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        BigInt ca = m(i, a), cb = m(i, b);
        m(i, a) = x * ca + y * cb;
        m(i, b) = u * ca + v * cb;
    }
}

inline void add_column_multiple(IntMatrix& m, std::size_t dst, std::size_t src, const BigInt& q)
{
    if (q == 0)
        return;
    for (std::size_t i = 0; i < m.rows(); ++i)
        m(i, dst) += q * m(i, src);
}

inline void add_row_multiple(IntMatrix& m, std::size_t dst, std::size_t src, const BigInt& q)
{
    if (q == 0)
        return;
    for (std::size_t j = 0; j < m.cols(); ++j)
        m(dst, j) += q * m(src, j);
}

inline void negate_column(IntMatrix& m, std::size_t j)
{
    for (std::size_t i = 0; i < m.rows(); ++i)
        m(i, j) = -m(i, j);
}

inline void negate_row(IntMatrix& m, std::size_t i)
{
    for (std::size_t j = 0; j < m.cols(); ++j)
        m(i, j) = -m(i, j);
}

} // namespace detail

/// Column-style Hermite normal form.  Pivot rows strictly increase with the
/// column index, pivots are positive, and entries left of a pivot in its row
/// lie in [0, pivot).  Zero columns are moved to the right.
inline HermiteForm hnf(const IntMatrix& basis)
{
    const std::size_t m = basis.rows(), n = basis.cols();
    HermiteForm out{basis, IntMatrix::identity(n), {}};
    IntMatrix& H = out.H;
    IntMatrix& U = out.U;
    std::size_t k = 0;
    for (std::size_t i = 0; i < m && k < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
            if (H(i, j) == 0)
                continue;
            if (H(i, k) == 0) {
                H.swap_columns(k, j);
                U.swap_columns(k, j);
                continue;
            }
            auto [g, x, y] = ext_gcd(H(i, k), H(i, j));
            BigInt a = H(i, k) / g, b = H(i, j) / g;
            detail::combine_columns(H, k, j, x, y, -b, a);
            detail::combine_columns(U, k, j, x, y, -b, a);
        }
        if (H(i, k) == 0)
            continue;
        if (H(i, k) < 0) {
            detail::negate_column(H, k);
            detail::negate_column(U, k);
        }
        for (std::size_t j = 0; j < k; ++j) {
            BigInt q = floor_div(H(i, j), H(i, k));
            detail::add_column_multiple(H, j, k, -q);
            detail::add_column_multiple(U, j, k, -q);
        }
        out.pivots.push_back(i);
        ++k;
    }
    return out;
}

/// Coordinates w with H.basis() * w = v, or nothing.
inline std::optional<IntVector> solve_echelon(const HermiteForm& hf, const IntVector& v)
{
    const std::size_t r = hf.rank();
    IntVector w(r);
    for (std::size_t k = 0; k < r; ++k) {
        std::size_t p = hf.pivots[k];
        BigInt val = v[p];
        for (std::size_t j = 0; j < k; ++j)
            val -= hf.H(p, j) * w[j];
        if (val % hf.H(p, k) != 0)
            return std::nullopt;
        w[k] = val / hf.H(p, k);
    }
    for (std::size_t i = 0; i < hf.H.rows(); ++i) {
        BigInt s = 0;
        for (std::size_t j = 0; j < r; ++j)
            s += hf.H(i, j) * w[j];
        if (s != v[i])
            return std::nullopt;
    }
    return w;
}

/// Membership of v in the column lattice of a precomputed Hermite form;
/// returns coordinates x against the original basis (basis * x = v).
inline std::optional<IntVector> lattice_member(const HermiteForm& hf, const IntVector& v)
{
    if (v.size() != hf.H.rows())
        throw InputError("lattice_member: vector length does not match lattice dimension");
    auto w = solve_echelon(hf, v);
    if (!w)
        return std::nullopt;
    IntVector x(hf.U.rows());
    for (std::size_t i = 0; i < hf.U.rows(); ++i)
        for (std::size_t k = 0; k < w->size(); ++k)
            x[i] += hf.U(i, k) * (*w)[k];
    return x;
}

inline std::optional<IntVector> lattice_member(const IntMatrix& basis, const IntVector& v)
{
    if (v.size() != basis.rows())
        throw InputError("lattice_member: vector length does not match lattice dimension");
    return lattice_member(hnf(basis), v);
}

/// Basis (as columns) of the integer kernel {x : a * x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& a)
{
    HermiteForm hf = hnf(a);
    return hf.U.columns_range(hf.rank(), a.cols());
}

/// Canonical basis of the lattice spanned by the columns of a.
inline IntMatrix canonical_basis(const IntMatrix& a)
{
    return hnf(a).basis();
}

inline std::size_t lattice_rank(const IntMatrix& a)
{
    return hnf(a).rank();
}

struct SmithForm {
    IntMatrix S;  ///< W * A * V, diagonal with d_1 | d_2 | ... (nonnegative)
    IntMatrix W;  ///< unimodular, rows x rows
    IntMatrix V;  ///< unimodular, cols x cols
    std::vector<BigInt> invariants() const
    {
        std::vector<BigInt> d;
        for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i)
            if (S(i, i) != 0)
                d.push_back(S(i, i));
        return d;
    }
};

inline SmithForm smith(const IntMatrix& a)
{
    const std::size_t m = a.rows(), n = a.cols();
    SmithForm out{a, IntMatrix::identity(m), IntMatrix::identity(n)};
    IntMatrix& S = out.S;
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block becomes the pivot
            std::size_t bi = m, bj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (S(i, j) != 0 && (bi == m || abs(S(i, j)) < abs(S(bi, bj)))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == m)
                return out;
            S.swap_rows(t, bi);
            out.W.swap_rows(t, bi);
            S.swap_columns(t, bj);
            out.V.swap_columns(t, bj);

            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                BigInt q = floor_div(S(i, t), S(t, t));
                detail::add_row_multiple(S, i, t, -q);
                detail::add_row_multiple(out.W, i, t, -q);
                if (S(i, t) != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                BigInt q = floor_div(S(t, j), S(t, t));
                detail::add_column_multiple(S, j, t, -q);
                detail::add_column_multiple(out.V, j, t, -q);
                if (S(t, j) != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (S(i, j) % S(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m)
                break;
            detail::add_row_multiple(S, t, bad, 1);
            detail::add_row_multiple(out.W, t, bad, 1);
        }
        if (S(t, t) < 0) {
            detail::negate_row(S, t);
            detail::negate_row(out.W, t);
        }
    }
    return out;
}

inline BigInt determinant(const IntMatrix& a)
{
    if (a.rows() != a.cols())
        throw InputError("determinant of a non-square matrix");
    // Bareiss fraction-free elimination
    const std::size_t n = a.rows();
    if (n == 0)
        return 1;
    IntMatrix m = a;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

} // namespace frobset

#endif // FROBSET_LATTICE_HPP
