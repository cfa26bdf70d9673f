#ifndef FROBSET_FINITE_FIELD_HPP
#define FROBSET_FINITE_FIELD_HPP

// Finite fields F_{p^a} as F_p[x]/(m(x)) with m drawn from a fixed table of
// Conway polynomials.  Fields are interned: every (p, m) pair maps to one
// immutable FiniteField object that lives for the whole program, so
// elements can carry a plain pointer to their field.

#include "bigint.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace frobset {

inline constexpr int kMaxFieldDegree = 16;

/// If q = p^e for a prime p, returns (p, e).
inline std::optional<std::pair<std::int64_t, int>> prime_power(std::int64_t q)
{
    if (q < 2)
        return std::nullopt;
    std::int64_t p = 2;
    while (q % p != 0)
        ++p;
    int e = 0;
    while (q % p == 0) {
        q /= p;
        ++e;
    }
    if (q != 1)
        return std::nullopt;
    return std::make_pair(p, e);
}

namespace fp {

// Dense polynomials over F_p with int64 coefficients, low degree first.
using Poly = std::vector<std::int64_t>;

inline void trim(Poly& a)
{
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, std::int64_t p)
{
    if (a.empty() || b.empty())
        return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    const std::size_t dm = m.size() - 1;  // m monic
    for (std::size_t i = c.size(); i-- > dm;) {
        std::int64_t t = c[i];
        if (t == 0)
            continue;
        for (std::size_t j = 0; j <= dm; ++j)
            c[i - dm + j] = mod_floor(c[i - dm + j] - t * m[j], p);
    }
    c.resize(std::min(c.size(), dm));
    trim(c);
    return c;
}

inline Poly powmod(Poly base, BigInt e, const Poly& m, std::int64_t p)
{
    Poly r{1};
    while (e > 0) {
        if ((e & 1) != 0)
            r = mulmod(r, base, m, p);
        base = mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

inline std::int64_t inv_mod(std::int64_t a, std::int64_t p)
{
    auto [g, x, y] = ext_gcd(BigInt(mod_floor(a, p)), BigInt(p));
    (void)y;
    if (g != 1)
        throw InputError("element not invertible mod p");
    return static_cast<std::int64_t>(mod_floor(x, BigInt(p)));
}

inline Poly rem(Poly a, const Poly& b, std::int64_t p)
{
    trim(a);
    Poly bb = b;
    trim(bb);
    const std::size_t db = bb.size() - 1;
    std::int64_t inv = inv_mod(bb.back(), p);
    while (a.size() > db) {
        std::int64_t t = a.back() * inv % p;
        std::size_t shift = a.size() - 1 - db;
        for (std::size_t j = 0; j <= db; ++j)
            a[shift + j] = mod_floor(a[shift + j] - t * bb[j], p);
        trim(a);
    }
    return a;
}

inline Poly gcd(Poly a, Poly b, std::int64_t p)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline std::vector<std::int64_t> prime_factors(std::int64_t n)
{
    std::vector<std::int64_t> out;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0)
                n /= d;
        }
    if (n > 1)
        out.push_back(n);
    return out;
}

/// Rabin's irreducibility test for a monic polynomial of degree a over F_p.
inline bool is_irreducible(const Poly& m, std::int64_t p)
{
    const int a = static_cast<int>(m.size()) - 1;
    if (a < 1 || m.back() != 1)
        return false;
    if (a == 1)
        return true;
    Poly x{0, 1};
    BigInt pa = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(a));
    Poly xpa = powmod(x, pa, m, p);
    xpa.resize(std::max<std::size_t>(xpa.size(), 2), 0);
    xpa[1] = mod_floor(xpa[1] - 1, p);
    trim(xpa);
    if (!xpa.empty())
        return false;
    for (std::int64_t r : prime_factors(a)) {
        BigInt pe = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(a / r));
        Poly h = powmod(x, pe, m, p);
        h.resize(std::max<std::size_t>(h.size(), 2), 0);
        h[1] = mod_floor(h[1] - 1, p);
        trim(h);
        Poly g = gcd(m, h, p);
        if (g.size() != 1)
            return false;
    }
    return true;
}

/// True when x generates the multiplicative group of F_p[x]/(m).
inline bool is_primitive(const Poly& m, std::int64_t p)
{
    if (!is_irreducible(m, p))
        return false;
    const int a = static_cast<int>(m.size()) - 1;
    BigInt order = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(a)) - 1;
    Poly x{0, 1};
    std::int64_t n = to_int64(order);
    for (std::int64_t r : prime_factors(n)) {
        Poly h = powmod(x, order / r, m, p);
        if (h == Poly{1})
            return false;
    }
    return true;
}

} // namespace fp

/// Table of Conway polynomials (monic, low degree first) for small (p, a).
inline const std::map<std::pair<std::int64_t, int>, std::vector<std::int64_t>>& conway_table()
{
    static const std::map<std::pair<std::int64_t, int>, std::vector<std::int64_t>> table = {
        {{2, 1}, {1, 1}},
        {{2, 2}, {1, 1, 1}},
        {{2, 3}, {1, 1, 0, 1}},
        {{2, 4}, {1, 1, 0, 0, 1}},
        {{2, 5}, {1, 0, 1, 0, 0, 1}},
        {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
        {{2, 7}, {1, 1, 0, 0, 0, 0, 0, 1}},
        {{2, 8}, {1, 0, 1, 1, 1, 0, 0, 0, 1}},
        {{3, 1}, {1, 1}},
        {{3, 2}, {2, 2, 1}},
        {{3, 3}, {1, 2, 0, 1}},
        {{3, 4}, {2, 0, 0, 2, 1}},
        {{3, 5}, {1, 2, 0, 0, 0, 1}},
        {{3, 6}, {2, 2, 1, 0, 2, 0, 1}},
        {{5, 1}, {3, 1}},
        {{5, 2}, {2, 4, 1}},
        {{5, 3}, {3, 3, 0, 1}},
        {{5, 4}, {2, 4, 4, 0, 1}},
        {{7, 1}, {4, 1}},
        {{7, 2}, {3, 6, 1}},
        {{7, 3}, {4, 0, 6, 1}},
        {{11, 1}, {9, 1}},
        {{11, 2}, {2, 7, 1}},
        {{13, 1}, {11, 1}},
        {{13, 2}, {2, 12, 1}},
    };
    return table;
}

class FiniteField {
public:
    std::int64_t characteristic() const { return p_; }
    int degree() const { return a_; }
    std::int64_t order() const { return order_; }
    /// Monic modulus m(x), low degree first, length degree()+1.
    const std::vector<std::int64_t>& modulus() const { return modulus_; }

    std::string describe() const
    {
        std::string s = "F_" + std::to_string(p_);
        if (a_ > 1)
            s += "^" + std::to_string(a_);
        return s;
    }

    /// Field of order p^a with the table modulus, or the least primitive
    /// monic polynomial (ordered by its base-p encoding) when the table has
    /// no entry.
    static const FiniteField& get(std::int64_t p, int a)
    {
        if (!is_prime(p))
            throw InputError("field characteristic must be prime, got " + std::to_string(p));
        if (a < 1 || a > kMaxFieldDegree)
            throw InputError("unsupported extension degree " + std::to_string(a));
        auto it = conway_table().find({p, a});
        if (it != conway_table().end())
            return with_modulus(p, it->second);
        return with_modulus(p, least_primitive(p, a));
    }

    /// Field of order q (a prime power).
    static const FiniteField& of_order(std::int64_t q)
    {
        auto pp = prime_power(q);
        if (!pp)
            throw InputError("field order must be a prime power, got " + std::to_string(q));
        return get(pp->first, pp->second);
    }

    static const FiniteField& with_modulus(std::int64_t p, std::vector<std::int64_t> modulus)
    {
        if (!is_prime(p))
            throw InputError("field characteristic must be prime, got " + std::to_string(p));
        for (auto& c : modulus)
            c = mod_floor(c, p);
        fp::trim(modulus);
        if (modulus.size() < 2 || modulus.back() != 1)
            throw InputError("field modulus must be monic of positive degree");
        if (static_cast<int>(modulus.size()) - 1 > kMaxFieldDegree)
            throw InputError("field modulus degree too large");
        static std::mutex mutex;
        static std::map<std::pair<std::int64_t, std::vector<std::int64_t>>, std::unique_ptr<FiniteField>> registry;
        std::lock_guard<std::mutex> lock(mutex);
        auto key = std::make_pair(p, modulus);
        auto it = registry.find(key);
        if (it != registry.end())
            return *it->second;
        if (!fp::is_irreducible(modulus, p))
            throw InputError("field modulus is not irreducible over F_" + std::to_string(p));
        auto field = std::unique_ptr<FiniteField>(new FiniteField(p, modulus));
        const FiniteField& ref = *field;
        registry.emplace(key, std::move(field));
        return ref;
    }

private:
    FiniteField(std::int64_t p, std::vector<std::int64_t> modulus)
        : p_(p), a_(static_cast<int>(modulus.size()) - 1), modulus_(std::move(modulus))
    {
        order_ = 1;
        for (int i = 0; i < a_; ++i)
            order_ *= p_;
    }

    static std::vector<std::int64_t> least_primitive(std::int64_t p, int a)
    {
        std::int64_t count = 1;
        for (int i = 0; i < a; ++i)
            count *= p;
        for (std::int64_t code = 0; code < count; ++code) {
            std::vector<std::int64_t> m(static_cast<std::size_t>(a) + 1, 0);
            std::int64_t c = code;
            for (int i = 0; i < a; ++i) {
                m[static_cast<std::size_t>(i)] = c % p;
                c /= p;
            }
            m[static_cast<std::size_t>(a)] = 1;
            if (fp::is_primitive(m, p))
                return m;
        }
        throw InputError("no primitive polynomial found");
    }

    std::int64_t p_;
    int a_;
    std::int64_t order_;
    std::vector<std::int64_t> modulus_;
};

/// Element of a finite field: residue polynomial in the field generator.
class FqElem {
public:
    FqElem() = default;
    explicit FqElem(const FiniteField& f) : field_(&f) {}
    FqElem(const FiniteField& f, std::int64_t v) : field_(&f) { c_[0] = mod_floor(v, f.characteristic()); }

    /// From coefficients in the generator, low degree first (reduced).
    static FqElem from_coeffs(const FiniteField& f, const std::vector<std::int64_t>& coeffs)
    {
        FqElem e(f);
        fp::Poly poly(coeffs.begin(), coeffs.end());
        for (auto& c : poly)
            c = mod_floor(c, f.characteristic());
        fp::trim(poly);
        if (poly.size() > static_cast<std::size_t>(f.degree()))
            poly = fp::rem(poly, f.modulus(), f.characteristic());
        for (std::size_t i = 0; i < poly.size(); ++i)
            e.c_[i] = poly[i];
        return e;
    }

    /// Element with base-p digits of code as coefficients (code < order).
    static FqElem from_code(const FiniteField& f, std::int64_t code)
    {
        FqElem e(f);
        for (int i = 0; i < f.degree(); ++i) {
            e.c_[static_cast<std::size_t>(i)] = code % f.characteristic();
            code /= f.characteristic();
        }
        return e;
    }

    static FqElem generator(const FiniteField& f)
    {
        if (f.degree() == 1) {
            // x is congruent to -m_0 when the modulus is linear
            return FqElem(f, -f.modulus()[0]);
        }
        FqElem e(f);
        e.c_[1] = 1;
        return e;
    }

    const FiniteField& field() const { return *field_; }
    bool has_field() const { return field_ != nullptr; }

    std::int64_t code() const
    {
        std::int64_t v = 0;
        for (int i = field_->degree(); i-- > 0;)
            v = v * field_->characteristic() + c_[static_cast<std::size_t>(i)];
        return v;
    }

    std::vector<std::int64_t> coeffs() const
    {
        return std::vector<std::int64_t>(c_.begin(), c_.begin() + field_->degree());
    }

    bool is_zero() const
    {
        for (int i = 0; i < kMaxFieldDegree; ++i)
            if (c_[static_cast<std::size_t>(i)] != 0)
                return false;
        return true;
    }
    bool is_one() const
    {
        if (c_[0] != 1)
            return false;
        for (int i = 1; i < kMaxFieldDegree; ++i)
            if (c_[static_cast<std::size_t>(i)] != 0)
                return false;
        return true;
    }

    friend bool operator==(const FqElem& a, const FqElem& b) { return a.c_ == b.c_; }
    friend bool operator<(const FqElem& a, const FqElem& b) { return a.code() < b.code(); }

    friend FqElem operator+(FqElem a, const FqElem& b)
    {
        const std::int64_t p = a.field_->characteristic();
        for (int i = 0; i < a.field_->degree(); ++i) {
            auto& x = a.c_[static_cast<std::size_t>(i)];
            x += b.c_[static_cast<std::size_t>(i)];
            if (x >= p)
                x -= p;
        }
        return a;
    }
    friend FqElem operator-(FqElem a, const FqElem& b)
    {
        const std::int64_t p = a.field_->characteristic();
        for (int i = 0; i < a.field_->degree(); ++i) {
            auto& x = a.c_[static_cast<std::size_t>(i)];
            x -= b.c_[static_cast<std::size_t>(i)];
            if (x < 0)
                x += p;
        }
        return a;
    }
    FqElem operator-() const { return FqElem(*field_) - *this; }

    friend FqElem operator*(const FqElem& a, const FqElem& b)
    {
        const FiniteField& f = *a.field_;
        const std::int64_t p = f.characteristic();
        const int d = f.degree();
        FqElem out(f);
        if (d == 1) {
            out.c_[0] = a.c_[0] * b.c_[0] % p;
            return out;
        }
        std::array<std::int64_t, 2 * kMaxFieldDegree> t{};
        for (int i = 0; i < d; ++i) {
            std::int64_t x = a.c_[static_cast<std::size_t>(i)];
            if (x == 0)
                continue;
            for (int j = 0; j < d; ++j)
                t[static_cast<std::size_t>(i + j)] += x * b.c_[static_cast<std::size_t>(j)];
        }
        for (auto& v : t)
            v %= p;
        const auto& m = f.modulus();
        for (int i = 2 * d - 2; i >= d; --i) {
            std::int64_t c = t[static_cast<std::size_t>(i)];
            if (c == 0)
                continue;
            for (int j = 0; j <= d; ++j)
                t[static_cast<std::size_t>(i - d + j)] =
                    mod_floor(t[static_cast<std::size_t>(i - d + j)] - c * m[static_cast<std::size_t>(j)], p);
        }
        for (int i = 0; i < d; ++i)
            out.c_[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)];
        return out;
    }

    FqElem pow(BigInt e) const
    {
        if (e < 0)
            return inverse().pow(-e);
        FqElem base = *this, r(*field_, 1);
        while (e > 0) {
            if ((e & 1) != 0)
                r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    FqElem inverse() const
    {
        if (is_zero())
            throw std::domain_error("inverse of zero in " + field_->describe());
        return pow(BigInt(field_->order() - 2));
    }

    friend FqElem operator/(const FqElem& a, const FqElem& b) { return a * b.inverse(); }

    /// x^(p^k), the k-th power of the absolute Frobenius.
    FqElem frobenius(long k) const
    {
        const int d = field_->degree();
        k %= d;
        if (k < 0)
            k += d;
        if (k == 0)
            return *this;
        return pow(boost::multiprecision::pow(BigInt(field_->characteristic()), static_cast<unsigned>(k)));
    }

    /// Membership in the subfield of order p^e (requires e | degree).
    bool in_subfield(int e) const { return frobenius(e) == *this; }

    std::string str() const
    {
        if (field_->degree() == 1)
            return std::to_string(c_[0]);
        std::string s = "[";
        for (int i = 0; i < field_->degree(); ++i)
            s += (i ? ", " : "") + std::to_string(c_[static_cast<std::size_t>(i)]);
        return s + "]";
    }

private:
    const FiniteField* field_ = nullptr;
    std::array<std::int64_t, kMaxFieldDegree> c_{};
};

/// Exponent e such that the twist c -> c^q is the e-th absolute Frobenius.
inline int frobenius_exponent(const FiniteField& f, std::int64_t q)
{
    auto pp = prime_power(q);
    if (!pp || pp->first != f.characteristic())
        throw InputError("q = " + std::to_string(q) + " is not a power of the characteristic of " + f.describe());
    return pp->second;
}

} // namespace frobset

#endif // FROBSET_FINITE_FIELD_HPP
