#ifndef FROBSET_MATRIX_HPP
#define FROBSET_MATRIX_HPP

#include "bigint.hpp"

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

namespace frobset {

using IntVector = std::vector<BigInt>;

/// Dense integer matrix, row-major storage, exact entries.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw InputError("ragged matrix literal");
            for (long long v : r)
                data_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    /// Builds a matrix whose columns are the given vectors (all of length rows).
    static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& cols)
    {
        IntMatrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows)
                throw InputError("column length mismatch");
            for (std::size_t i = 0; i < rows; ++i)
                m(i, j) = cols[j][i];
        }
        return m;
    }

    static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols)
    {
        IntMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw InputError("row length mismatch");
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntVector column(std::size_t j) const
    {
        IntVector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            v[i] = (*this)(i, j);
        return v;
    }

    IntVector row(std::size_t i) const
    {
        return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    IntMatrix transpose() const
    {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    /// Keeps the first n columns.
    IntMatrix left_columns(std::size_t n) const
    {
        IntMatrix m(rows_, n);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) = (*this)(i, j);
        return m;
    }

    IntMatrix columns_range(std::size_t first, std::size_t last) const
    {
        IntMatrix m(rows_, last - first);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = first; j < last; ++j)
                m(i, j - first) = (*this)(i, j);
        return m;
    }

    void swap_columns(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t i = 0; i < rows_; ++i)
            std::swap((*this)(i, a), (*this)(i, b));
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const BigInt& v) { return v == 0; });
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
    {
        if (a.cols_ != b.rows_)
            throw InputError("matrix product dimension mismatch");
        IntMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t l = 0; l < a.cols_; ++l) {
                const BigInt& x = a(i, l);
                if (x == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += x * b(l, j);
            }
        return c;
    }

    friend IntVector operator*(const IntMatrix& a, const IntVector& v)
    {
        if (a.cols_ != v.size())
            throw InputError("matrix-vector dimension mismatch");
        IntVector out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j)
                out[i] += a(i, j) * v[j];
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m)
    {
        os << '[';
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < m.cols_; ++j)
                os << (j ? ", " : "") << m(i, j);
            os << ']';
        }
        return os << ']';
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> data_;
};

/// Horizontal concatenation [a | b].
inline IntMatrix hcat(const IntMatrix& a, const IntMatrix& b)
{
    if (a.rows() != b.rows())
        throw InputError("hcat row mismatch");
    IntMatrix m(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j)
            m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j)
            m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

inline IntVector vec_add(const IntVector& a, const IntVector& b)
{
    IntVector out(a);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += b[i];
    return out;
}

inline IntVector vec_sub(const IntVector& a, const IntVector& b)
{
    IntVector out(a);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] -= b[i];
    return out;
}

inline BigInt dot(const IntVector& a, const IntVector& b)
{
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

template <class Int>
IntVector to_int_vector(const std::vector<Int>& v)
{
    return IntVector(v.begin(), v.end());
}

} // namespace frobset

#endif // FROBSET_MATRIX_HPP
