#ifndef FROBSET_EXPONENT_SET_HPP
#define FROBSET_EXPONENT_SET_HPP

// Finite unions of explicit tuples and bounded lattice cosets in N^k.

#include "lattice.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

namespace frobset {

using ExpTuple = std::vector<std::int64_t>;

/// {x in Z^k : x - offset in span(lattice), x_i >= lower_i for all i}.
struct BoundedLatticeCoset {
    IntVector offset;
    IntMatrix lattice;  ///< canonical HNF basis, k rows
    IntVector lower;

    BoundedLatticeCoset() = default;
    BoundedLatticeCoset(IntVector c, const IntMatrix& basis, IntVector m)
        : offset(std::move(c)), lattice(canonical_basis(basis)), lower(std::move(m))
    {
        if (offset.size() != lattice.rows() || lower.size() != lattice.rows())
            throw InputError("BoundedLatticeCoset: offset, lattice and lower bounds disagree in dimension");
        reduce_offset();
    }

    std::size_t dim() const { return offset.size(); }
    std::size_t rank() const { return lattice.cols(); }

    bool contains(const IntVector& x) const
    {
        if (x.size() != dim())
            throw InputError("coset membership: dimension mismatch");
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < lower[i])
                return false;
        return static_cast<bool>(solve_echelon(echelon_, vec_sub(x, offset)));
    }

    friend bool operator==(const BoundedLatticeCoset& a, const BoundedLatticeCoset& b)
    {
        return a.offset == b.offset && a.lattice == b.lattice && a.lower == b.lower;
    }
    friend bool operator<(const BoundedLatticeCoset& a, const BoundedLatticeCoset& b)
    {
        if (a.offset != b.offset)
            return a.offset < b.offset;
        if (a.lower != b.lower)
            return a.lower < b.lower;
        if (a.lattice.cols() != b.lattice.cols())
            return a.lattice.cols() < b.lattice.cols();
        for (std::size_t j = 0; j < a.lattice.cols(); ++j)
            if (a.lattice.column(j) != b.lattice.column(j))
                return a.lattice.column(j) < b.lattice.column(j);
        return false;
    }

    std::string str() const
    {
        std::ostringstream os;
        os << "{c=(";
        for (std::size_t i = 0; i < dim(); ++i)
            os << (i ? "," : "") << offset[i];
        os << ") + span{";
        for (std::size_t j = 0; j < rank(); ++j) {
            os << (j ? ", " : "") << "(";
            for (std::size_t i = 0; i < dim(); ++i)
                os << (i ? "," : "") << lattice(i, j);
            os << ")";
        }
        os << "}, x>=(";
        for (std::size_t i = 0; i < dim(); ++i)
            os << (i ? "," : "") << lower[i];
        os << ")}";
        return os.str();
    }

private:
    // canonical representative: pivot coordinates of the offset in [0, pivot)
    void reduce_offset()
    {
        echelon_ = HermiteForm{lattice, IntMatrix(), {}};
        for (std::size_t k = 0; k < lattice.cols(); ++k) {
            std::size_t p = 0;
            while (lattice(p, k) == 0)
                ++p;
            echelon_.pivots.push_back(p);
            BigInt q = floor_div(offset[p], lattice(p, k));
            for (std::size_t i = 0; i < dim(); ++i)
                offset[i] -= q * lattice(i, k);
        }
    }

    HermiteForm echelon_;
};

class ExponentSet {
public:
    explicit ExponentSet(std::size_t k = 0) : k_(k) {}

    /// N^k itself.
    static ExponentSet all(std::size_t k)
    {
        ExponentSet e(k);
        e.add(BoundedLatticeCoset(IntVector(k), IntMatrix::identity(k), IntVector(k)));
        return e;
    }

    std::size_t dim() const { return k_; }
    const std::vector<ExpTuple>& tuples() const { return explicit_; }
    const std::vector<BoundedLatticeCoset>& cosets() const { return cosets_; }
    bool empty_representation() const { return explicit_.empty() && cosets_.empty(); }

    void add(ExpTuple t)
    {
        if (t.size() != k_)
            throw InputError("exponent tuple has wrong dimension");
        for (auto x : t)
            if (x < 0)
                throw InputError("exponent tuples must be nonnegative");
        auto it = std::lower_bound(explicit_.begin(), explicit_.end(), t);
        if (it == explicit_.end() || *it != t)
            explicit_.insert(it, std::move(t));
    }

    void add(BoundedLatticeCoset c)
    {
        if (c.dim() != k_)
            throw InputError("coset has wrong dimension");
        auto it = std::lower_bound(cosets_.begin(), cosets_.end(), c);
        if (it == cosets_.end() || !(*it == c))
            cosets_.insert(it, std::move(c));
    }

    void merge(const ExponentSet& other)
    {
        if (other.k_ != k_)
            throw InputError("exponent sets of different dimension");
        for (const auto& t : other.explicit_)
            add(t);
        for (const auto& c : other.cosets_)
            add(c);
    }

private:
    std::size_t k_;
    std::vector<ExpTuple> explicit_;
    std::vector<BoundedLatticeCoset> cosets_;
};

inline IntVector to_int_vector(const ExpTuple& t)
{
    return IntVector(t.begin(), t.end());
}

inline bool es_member(const ExponentSet& e, const ExpTuple& n)
{
    if (n.size() != e.dim())
        throw InputError("es_member: dimension mismatch");
    if (std::binary_search(e.tuples().begin(), e.tuples().end(), n))
        return true;
    IntVector v = to_int_vector(n);
    for (const auto& c : e.cosets())
        if (c.contains(v))
            return true;
    return false;
}

/// Intersection of two cosets; nothing when the affine lattices are disjoint.
inline std::optional<BoundedLatticeCoset> coset_intersect(const BoundedLatticeCoset& a, const BoundedLatticeCoset& b)
{
    if (a.dim() != b.dim())
        throw InputError("coset_intersect: dimension mismatch");
    const std::size_t k = a.dim();
    IntMatrix both = hcat(a.lattice, b.lattice);
    auto coords = lattice_member(both, vec_sub(b.offset, a.offset));
    if (!coords)
        return std::nullopt;
    // a.offset + L1 x = b.offset - L2 y
    IntVector x(coords->begin(), coords->begin() + static_cast<std::ptrdiff_t>(a.rank()));
    IntVector point = vec_add(a.offset, a.lattice * x);
    IntMatrix ker = integer_kernel(both);
    IntMatrix top(a.rank(), ker.cols());
    for (std::size_t i = 0; i < a.rank(); ++i)
        for (std::size_t j = 0; j < ker.cols(); ++j)
            top(i, j) = ker(i, j);
    IntMatrix meet = a.rank() ? a.lattice * top : IntMatrix(k, 0);
    IntVector lower(k);
    for (std::size_t i = 0; i < k; ++i)
        lower[i] = std::max(a.lower[i], b.lower[i]);
    return BoundedLatticeCoset(point, meet, lower);
}

inline ExponentSet es_intersect(const ExponentSet& e1, const ExponentSet& e2)
{
    if (e1.dim() != e2.dim())
        throw InputError("es_intersect: dimension mismatch");
    ExponentSet out(e1.dim());
    for (const auto& t : e1.tuples())
        if (es_member(e2, t))
            out.add(t);
    for (const auto& t : e2.tuples())
        if (es_member(e1, t))
            out.add(t);
    for (const auto& a : e1.cosets())
        for (const auto& b : e2.cosets())
            if (auto c = coset_intersect(a, b))
                out.add(*c);
    return out;
}

/// All members of e inside [0, bound]^k, sorted.
inline std::vector<ExpTuple> es_points_in_box(const ExponentSet& e, std::int64_t bound)
{
    std::vector<ExpTuple> out;
    const std::size_t k = e.dim();
    ExpTuple n(k, 0);
    for (;;) {
        if (es_member(e, n))
            out.push_back(n);
        std::size_t i = 0;
        while (i < k && ++n[i] > bound)
            n[i++] = 0;
        if (i == k)
            break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace frobset

#endif // FROBSET_EXPONENT_SET_HPP
