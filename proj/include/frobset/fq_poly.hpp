#ifndef FROBSET_FQ_POLY_HPP
#define FROBSET_FQ_POLY_HPP

// Univariate polynomials in t and rational functions over a finite field.

#include "finite_field.hpp"

#include <string>
#include <vector>

namespace frobset {

class FqPoly {
public:
    FqPoly() = default;
    explicit FqPoly(const FiniteField& f) : field_(&f) {}
    FqPoly(const FiniteField& f, std::vector<FqElem> coeffs) : field_(&f), c_(std::move(coeffs)) { trim(); }

    static FqPoly constant(const FqElem& c) { return FqPoly(c.field(), {c}); }
    static FqPoly monomial(const FqElem& c, std::size_t deg)
    {
        std::vector<FqElem> v(deg + 1, FqElem(c.field()));
        v[deg] = c;
        return FqPoly(c.field(), std::move(v));
    }
    /// From prime-field integer coefficients, low degree first.
    static FqPoly from_ints(const FiniteField& f, const std::vector<std::int64_t>& ints)
    {
        std::vector<FqElem> v;
        for (auto x : ints)
            v.emplace_back(f, x);
        return FqPoly(f, std::move(v));
    }

    const FiniteField& field() const { return *field_; }
    const std::vector<FqElem>& coeffs() const { return c_; }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    FqElem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : FqElem(*field_); }
    FqElem leading() const { return c_.empty() ? FqElem(*field_) : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

    friend bool operator==(const FqPoly& a, const FqPoly& b) { return a.c_ == b.c_; }
    friend bool operator<(const FqPoly& a, const FqPoly& b)
    {
        if (a.c_.size() != b.c_.size())
            return a.c_.size() < b.c_.size();
        for (std::size_t i = a.c_.size(); i-- > 0;)
            if (!(a.c_[i] == b.c_[i]))
                return a.c_[i] < b.c_[i];
        return false;
    }

    friend FqPoly operator+(const FqPoly& a, const FqPoly& b)
    {
        check_same(a, b);
        std::vector<FqElem> v(std::max(a.c_.size(), b.c_.size()), FqElem(*a.field_));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            v[i] = a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i)
            v[i] = v[i] + b.c_[i];
        return FqPoly(*a.field_, std::move(v));
    }
    friend FqPoly operator-(const FqPoly& a, const FqPoly& b)
    {
        check_same(a, b);
        std::vector<FqElem> v(std::max(a.c_.size(), b.c_.size()), FqElem(*a.field_));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            v[i] = a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i)
            v[i] = v[i] - b.c_[i];
        return FqPoly(*a.field_, std::move(v));
    }
    friend FqPoly operator*(const FqPoly& a, const FqPoly& b)
    {
        check_same(a, b);
        if (a.is_zero() || b.is_zero())
            return FqPoly(*a.field_);
        std::vector<FqElem> v(a.c_.size() + b.c_.size() - 1, FqElem(*a.field_));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero())
                continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                if (!b.c_[j].is_zero())
                    v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
        }
        return FqPoly(*a.field_, std::move(v));
    }
    FqPoly scaled(const FqElem& s) const
    {
        std::vector<FqElem> v(c_);
        for (auto& x : v)
            x = x * s;
        return FqPoly(*field_, std::move(v));
    }

    /// Quotient and remainder by a nonzero divisor.
    static std::pair<FqPoly, FqPoly> divmod(const FqPoly& a, const FqPoly& b)
    {
        check_same(a, b);
        if (b.is_zero())
            throw std::domain_error("polynomial division by zero");
        std::vector<FqElem> r = a.c_;
        const std::size_t db = b.c_.size() - 1;
        FqElem inv = b.c_.back().inverse();
        std::vector<FqElem> q(r.size() > db ? r.size() - db : 0, FqElem(*a.field_));
        for (std::size_t i = r.size(); i-- > db;) {
            FqElem t = r[i] * inv;
            if (t.is_zero())
                continue;
            q[i - db] = t;
            for (std::size_t j = 0; j <= db; ++j)
                r[i - db + j] = r[i - db + j] - t * b.c_[j];
        }
        return {FqPoly(*a.field_, std::move(q)), FqPoly(*a.field_, std::move(r))};
    }

    FqPoly monic() const
    {
        if (is_zero())
            return *this;
        return scaled(leading().inverse());
    }

    static FqPoly gcd(FqPoly a, FqPoly b)
    {
        while (!b.is_zero()) {
            FqPoly r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    FqPoly pow(std::uint64_t e) const
    {
        FqPoly r = constant(FqElem(*field_, 1)), base = *this;
        while (e > 0) {
            if (e & 1)
                r = r * base;
            e >>= 1;
            if (e)
                base = base * base;
        }
        return r;
    }

    FqElem eval(const FqElem& x) const
    {
        FqElem acc(*field_);
        for (std::size_t i = c_.size(); i-- > 0;)
            acc = acc * x + c_[i];
        return acc;
    }

    /// Coefficients raised to p^k and exponents multiplied by `stretch`:
    /// the image of the polynomial under x -> x^stretch when stretch = p^k.
    FqPoly frobenius_stretch(long k, std::uint64_t stretch) const
    {
        if (is_zero())
            return *this;
        std::vector<FqElem> v(static_cast<std::size_t>(degree()) * stretch + 1, FqElem(*field_));
        for (std::size_t i = 0; i < c_.size(); ++i)
            v[i * stretch] = c_[i].frobenius(k);
        return FqPoly(*field_, std::move(v));
    }

    std::string str(const std::string& var = "t") const
    {
        if (c_.empty())
            return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i].is_zero())
                continue;
            if (!s.empty())
                s += " + ";
            bool unit = c_[i].is_one();
            if (!unit || i == 0)
                s += c_[i].str();
            if (i > 0) {
                if (!unit)
                    s += "*";
                s += var;
                if (i > 1)
                    s += "^" + std::to_string(i);
            }
        }
        return s;
    }

private:
    static void check_same(const FqPoly& a, const FqPoly& b)
    {
        if (a.field_ != b.field_)
            throw InputError("polynomials over different fields");
    }
    void trim()
    {
        while (!c_.empty() && c_.back().is_zero())
            c_.pop_back();
    }

    const FiniteField* field_ = nullptr;
    std::vector<FqElem> c_;
};

/// Rational function num/den, always reduced with a monic denominator.
class FqRat {
public:
    FqRat() = default;
    explicit FqRat(const FqPoly& num) : num_(num), den_(FqPoly::constant(FqElem(num.field(), 1))) {}
    FqRat(const FqPoly& num, const FqPoly& den) : num_(num), den_(den) { normalize(); }

    static FqRat zero(const FiniteField& f) { return FqRat(FqPoly(f)); }
    static FqRat one(const FiniteField& f) { return FqRat(FqPoly::constant(FqElem(f, 1))); }
    static FqRat t(const FiniteField& f) { return FqRat(FqPoly::monomial(FqElem(f, 1), 1)); }
    static FqRat constant(const FqElem& c) { return FqRat(FqPoly::constant(c)); }

    const FiniteField& field() const { return num_.field(); }
    const FqPoly& num() const { return num_; }
    const FqPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return den_.degree() == 0 && num_.degree() <= 0; }

    friend bool operator==(const FqRat& a, const FqRat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator<(const FqRat& a, const FqRat& b)
    {
        if (!(a.num_ == b.num_))
            return a.num_ < b.num_;
        return a.den_ < b.den_;
    }

    friend FqRat operator+(const FqRat& a, const FqRat& b)
    {
        if (a.den_ == b.den_)
            return FqRat(a.num_ + b.num_, a.den_);
        return FqRat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend FqRat operator-(const FqRat& a, const FqRat& b)
    {
        if (a.den_ == b.den_)
            return FqRat(a.num_ - b.num_, a.den_);
        return FqRat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend FqRat operator*(const FqRat& a, const FqRat& b) { return FqRat(a.num_ * b.num_, a.den_ * b.den_); }
    friend FqRat operator/(const FqRat& a, const FqRat& b)
    {
        if (b.is_zero())
            throw std::domain_error("rational function division by zero");
        return FqRat(a.num_ * b.den_, a.den_ * b.num_);
    }
    FqRat scaled(const FqElem& c) const { return FqRat(num_.scaled(c), den_); }

    FqRat inverse() const
    {
        if (is_zero())
            throw std::domain_error("inverse of the zero rational function");
        return FqRat(den_, num_);
    }

    FqRat pow(long long e) const
    {
        if (e < 0)
            return inverse().pow(-e);
        auto ue = static_cast<std::uint64_t>(e);
        // num and den stay coprime under powers
        FqRat r;
        r.num_ = num_.pow(ue);
        r.den_ = den_.pow(ue);
        return r;
    }

    /// Degree of num minus degree of den (the negative valuation at infinity).
    long degree() const { return num_.degree() - den_.degree(); }

    std::string str() const
    {
        if (den_.degree() == 0)
            return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

private:
    void normalize()
    {
        if (den_.is_zero())
            throw std::domain_error("rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = FqPoly::constant(FqElem(num_.field(), 1));
            return;
        }
        FqPoly g = FqPoly::gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = FqPoly::divmod(num_, g).first;
            den_ = FqPoly::divmod(den_, g).first;
        }
        FqElem lc = den_.leading();
        if (!lc.is_one()) {
            FqElem inv = lc.inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    FqPoly num_;
    FqPoly den_;
};

/// x^(q^e) for a rational function x over F_{p^a}, with q a power of p:
/// coefficients go through the field Frobenius and exponents are
/// multiplied by q^e.
inline FqRat frobpow_rat(const FqRat& x, std::int64_t q, long e)
{
    if (e < 0)
        throw InputError("frobpow_rat: exponent must be nonnegative");
    const int qexp = frobenius_exponent(x.field(), q);
    std::uint64_t stretch = 1;
    for (long i = 0; i < e; ++i) {
        if (stretch > (std::uint64_t(1) << 40) / static_cast<std::uint64_t>(q))
            throw InputError("frobpow_rat: q^e too large for dense representation");
        stretch *= static_cast<std::uint64_t>(q);
    }
    const long k = static_cast<long>(qexp) * e;
    return FqRat(x.num().frobenius_stretch(k, stretch), x.den().frobenius_stretch(k, stretch));
}

} // namespace frobset

#endif // FROBSET_FQ_POLY_HPP
