#ifndef FROBSET_DRINFELD_HPP
#define FROBSET_DRINFELD_HPP

// Twisted polynomials over F_{q^a} with F c = c^q F, Drinfeld modules
// F_q[t] -> F_{q^a}{F} and the two examples built on phi_t = F + F^2 and
// phi_t = F + F^3.

#include "fq_poly.hpp"

#include <set>

namespace frobset {

class TwistedPoly {
public:
    TwistedPoly() = default;
    TwistedPoly(const FiniteField& f, std::int64_t q, std::vector<FqElem> c)
        : field_(&f), q_(q), qexp_(frobenius_exponent(f, q)), c_(std::move(c))
    {
        if (f.degree() % qexp_ != 0)
            throw InputError("F_" + std::to_string(q) + " is not a subfield of " + f.describe());
        for (const auto& x : c_)
            if (&x.field() != field_)
                throw InputError("twisted polynomial coefficient from a different field");
        trim();
    }

    static TwistedPoly zero(const FiniteField& f, std::int64_t q) { return TwistedPoly(f, q, {}); }
    static TwistedPoly constant(const FqElem& c, std::int64_t q) { return TwistedPoly(c.field(), q, {c}); }
    static TwistedPoly one(const FiniteField& f, std::int64_t q) { return constant(FqElem(f, 1), q); }
    /// c F^n
    static TwistedPoly monomial(const FqElem& c, std::size_t n, std::int64_t q)
    {
        std::vector<FqElem> v(n + 1, FqElem(c.field()));
        v[n] = c;
        return TwistedPoly(c.field(), q, std::move(v));
    }
    /// Coefficients given as integers (prime field elements), low degree first.
    static TwistedPoly from_ints(const FiniteField& f, std::int64_t q, const std::vector<std::int64_t>& ints)
    {
        std::vector<FqElem> v;
        for (auto x : ints)
            v.emplace_back(f, x);
        return TwistedPoly(f, q, std::move(v));
    }

    const FiniteField& field() const { return *field_; }
    std::int64_t q() const { return q_; }
    const std::vector<FqElem>& coeffs() const { return c_; }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    FqElem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : FqElem(*field_); }

    /// Indices with nonzero coefficient.
    std::vector<std::size_t> support() const
    {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero())
                s.push_back(i);
        return s;
    }

    /// F-adic valuation: index of the lowest nonzero coefficient; none for 0.
    std::optional<std::size_t> valuation() const
    {
        auto s = support();
        if (s.empty())
            return std::nullopt;
        return s.front();
    }

    /// w with this = w F^k; requires the k lowest coefficients to vanish.
    TwistedPoly right_divide_by_F(std::size_t k) const
    {
        for (std::size_t i = 0; i < std::min(k, c_.size()); ++i)
            if (!c_[i].is_zero())
                throw InputError("twisted polynomial is not divisible by F^" + std::to_string(k));
        if (k >= c_.size())
            return zero(*field_, q_);
        return TwistedPoly(*field_, q_, std::vector<FqElem>(c_.begin() + static_cast<std::ptrdiff_t>(k), c_.end()));
    }

    /// Every coefficient lies in F_q.
    bool coefficients_in_base() const
    {
        for (const auto& x : c_)
            if (!x.in_subfield(qexp_))
                return false;
        return true;
    }

    friend bool operator==(const TwistedPoly& a, const TwistedPoly& b)
    {
        return a.field_ == b.field_ && a.q_ == b.q_ && a.c_ == b.c_;
    }
    friend bool operator<(const TwistedPoly& a, const TwistedPoly& b)
    {
        if (a.c_.size() != b.c_.size())
            return a.c_.size() < b.c_.size();
        for (std::size_t i = a.c_.size(); i-- > 0;)
            if (!(a.c_[i] == b.c_[i]))
                return a.c_[i] < b.c_[i];
        return false;
    }

    friend TwistedPoly operator+(const TwistedPoly& a, const TwistedPoly& b)
    {
        check_same(a, b);
        std::vector<FqElem> v(std::max(a.c_.size(), b.c_.size()), FqElem(*a.field_));
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = a.coeff(i) + b.coeff(i);
        return TwistedPoly(*a.field_, a.q_, std::move(v));
    }
    friend TwistedPoly operator-(const TwistedPoly& a, const TwistedPoly& b) { return a + b.scaled(-FqElem(*b.field_, 1)); }

    /// Left multiplication by a constant.
    TwistedPoly scaled(const FqElem& s) const
    {
        std::vector<FqElem> v;
        for (const auto& x : c_)
            v.push_back(s * x);
        return TwistedPoly(*field_, q_, std::move(v));
    }

    /// Composition: (c F^i)(e F^j) = c e^(q^i) F^(i+j).
    friend TwistedPoly tw_mul(const TwistedPoly& u, const TwistedPoly& v)
    {
        check_same(u, v);
        if (u.is_zero() || v.is_zero())
            return zero(*u.field_, u.q_);
        std::vector<FqElem> out(u.c_.size() + v.c_.size() - 1, FqElem(*u.field_));
        for (std::size_t i = 0; i < u.c_.size(); ++i) {
            if (u.c_[i].is_zero())
                continue;
            for (std::size_t j = 0; j < v.c_.size(); ++j)
                if (!v.c_[j].is_zero())
                    out[i + j] = out[i + j] + u.c_[i] * v.c_[j].frobenius(static_cast<long>(i) * u.qexp_);
        }
        return TwistedPoly(*u.field_, u.q_, std::move(out));
    }
    friend TwistedPoly operator*(const TwistedPoly& u, const TwistedPoly& v) { return tw_mul(u, v); }

    std::string str() const
    {
        if (c_.empty())
            return "0";
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero())
                continue;
            if (!s.empty())
                s += " + ";
            const bool unit = c_[i].is_one();
            if (!unit || i == 0)
                s += c_[i].str();
            if (i > 0)
                s += (unit ? "" : "*") + std::string("F") + (i > 1 ? "^" + std::to_string(i) : "");
        }
        return s;
    }

private:
    static void check_same(const TwistedPoly& a, const TwistedPoly& b)
    {
        if (a.field_ != b.field_ || a.q_ != b.q_)
            throw InputError("twisted polynomials over different fields or twists");
    }
    void trim()
    {
        while (!c_.empty() && c_.back().is_zero())
            c_.pop_back();
    }

    const FiniteField* field_ = nullptr;
    std::int64_t q_ = 0;
    int qexp_ = 1;
    std::vector<FqElem> c_;
};

/// The elements of F_q inside the field, ordered by code.
inline std::vector<FqElem> base_field_elements(const FiniteField& f, std::int64_t q)
{
    const int e = frobenius_exponent(f, q);
    std::vector<FqElem> out;
    for (std::int64_t code = 0; code < f.order(); ++code) {
        FqElem x = FqElem::from_code(f, code);
        if (x.in_subfield(e))
            out.push_back(x);
    }
    return out;
}

/// phi: F_q[t] -> F_{q^a}{F}, fixed by the image of t.
class DrinfeldModule {
public:
    DrinfeldModule(TwistedPoly phi_t) : phi_t_(std::move(phi_t))
    {
        if (phi_t_.degree() < 1)
            throw InputError("phi_t must have positive degree in F");
    }

    std::int64_t q() const { return phi_t_.q(); }
    const FiniteField& field() const { return phi_t_.field(); }
    const TwistedPoly& phi_t() const { return phi_t_; }

    /// Elements of A = F_q[t] are FqPoly over the coefficient field with coefficients in F_q.
    void check_in_a(const FqPoly& a) const
    {
        if (&a.field() != &field())
            throw InputError("polynomial a is over a different field than the Drinfeld module");
        const int e = frobenius_exponent(field(), q());
        for (const auto& c : a.coeffs())
            if (!c.in_subfield(e))
                throw InputError("coefficients of a must lie in F_" + std::to_string(q()));
    }

private:
    TwistedPoly phi_t_;
};

/// phi_a = sum b_i phi_t^i, by Horner.
inline TwistedPoly phi_eval(const DrinfeldModule& d, const FqPoly& a)
{
    d.check_in_a(a);
    TwistedPoly acc = TwistedPoly::zero(d.field(), d.q());
    for (long i = a.degree(); i >= 0; --i)
        acc = tw_mul(acc, d.phi_t()) + TwistedPoly::constant(a.coeff(static_cast<std::size_t>(i)), d.q());
    return acc;
}

/// Componentwise x -> sum c_i x^(q^i).
inline std::vector<FqRat> act(const TwistedPoly& p, const std::vector<FqRat>& x)
{
    std::vector<FqRat> out;
    for (const auto& xi : x) {
        if (&xi.field() != &p.field())
            throw InputError("act: point and operator live over different fields");
        FqRat acc = FqRat::zero(p.field());
        for (std::size_t i = 0; i < p.coeffs().size(); ++i)
            if (!p.coeffs()[i].is_zero())
                acc = acc + frobpow_rat(xi, p.q(), static_cast<long>(i)).scaled(p.coeffs()[i]);
        out.push_back(acc);
    }
    return out;
}

inline FqRat act(const TwistedPoly& p, const FqRat& x)
{
    return act(p, std::vector<FqRat>{x})[0];
}

/// binomial(n, k) mod p as a product over base-p digits.
inline std::int64_t lucas_binom(std::uint64_t n, std::uint64_t k, std::int64_t p)
{
    if (!is_prime(p))
        throw InputError("lucas_binom: p = " + std::to_string(p) + " is not prime");
    if (k > n)
        return 0;
    const auto up = static_cast<std::uint64_t>(p);
    std::int64_t r = 1;
    while (n > 0 || k > 0) {
        const std::uint64_t ni = n % up, ki = k % up;
        if (ki > ni)
            return 0;
        // binomial(ni, ki) mod p for digits below p
        std::int64_t num = 1, den = 1;
        for (std::uint64_t j = 0; j < ki; ++j) {
            num = num * static_cast<std::int64_t>((ni - j) % up) % p;
            den = den * static_cast<std::int64_t>((j + 1) % up) % p;
        }
        r = r * num % p * fp::inv_mod(den, p) % p;
        n /= up;
        k /= up;
    }
    return r;
}

struct SurveyHit {
    FqPoly a;
    TwistedPoly phi_a;
};

/// All nonzero a in F_q[t] of degree <= deg_bound with phi_a = F^n + F^m, n != m.
inline std::vector<SurveyHit> two_term_survey(const DrinfeldModule& d, std::size_t deg_bound)
{
    if (deg_bound < 1)
        throw InputError("two_term_survey: degree bound must be >= 1");
    const auto base = base_field_elements(d.field(), d.q());
    const std::size_t q = base.size();
    std::vector<TwistedPoly> powers{TwistedPoly::one(d.field(), d.q())};
    for (std::size_t i = 1; i <= deg_bound; ++i)
        powers.push_back(tw_mul(powers.back(), d.phi_t()));
    const std::size_t width = powers.back().coeffs().size();

    std::vector<SurveyHit> hits;
    std::vector<std::size_t> digit(deg_bound + 1, 0);
    std::vector<FqElem> acc(width, FqElem(d.field()));
    for (;;) {
        std::size_t i = 0;
        while (i <= deg_bound && ++digit[i] == q)
            digit[i++] = 0;
        if (i > deg_bound)
            break;
        std::fill(acc.begin(), acc.end(), FqElem(d.field()));
        for (std::size_t j = 0; j <= deg_bound; ++j) {
            if (digit[j] == 0)
                continue;
            const FqElem& b = base[digit[j]];
            const auto& pc = powers[j].coeffs();
            for (std::size_t r = 0; r < pc.size(); ++r)
                acc[r] = acc[r] + b * pc[r];
        }
        std::size_t nonzero = 0;
        bool units = true;
        for (const auto& c : acc)
            if (!c.is_zero()) {
                ++nonzero;
                units = units && c.is_one();
            }
        if (nonzero != 2 || !units)
            continue;
        std::vector<FqElem> coeffs;
        for (auto x : digit)
            coeffs.push_back(base[x]);
        FqPoly a(d.field(), coeffs);
        hits.push_back(SurveyHit{a, TwistedPoly(d.field(), d.q(), acc)});
    }
    std::sort(hits.begin(), hits.end(), [](const SurveyHit& x, const SurveyHit& y) { return x.a < y.a; });
    return hits;
}

/// The least element (by code) of F_{q^2} outside F_q.
inline FqElem least_non_base(const FiniteField& f2, std::int64_t q)
{
    const int e = frobenius_exponent(f2, q);
    for (std::int64_t code = 0; code < f2.order(); ++code) {
        FqElem x = FqElem::from_code(f2, code);
        if (!x.in_subfield(e))
            return x;
    }
    throw InputError("the field has no element outside F_q");
}

/// w(t) = sum c_i t^(q^i) written out, for reports.
inline std::string additive_str(const TwistedPoly& w)
{
    if (w.is_zero())
        return "0";
    std::string s;
    BigInt power = 1;
    for (std::size_t i = 0; i < w.coeffs().size(); ++i, power *= w.q()) {
        const FqElem& c = w.coeffs()[i];
        if (c.is_zero())
            continue;
        if (!s.empty())
            s += " + ";
        if (!c.is_one())
            s += c.str() + "*";
        s += power == 1 ? std::string("t") : "t^" + power.str();
    }
    return s;
}

/// A point (w_1(t), w_2(t)) of G_a^2 over F_{q^a}(t) whose coordinates are
/// additive polynomials in t; w -> w(t) is injective, so points compare as
/// pairs of twisted polynomials.
struct AdditivePoint {
    TwistedPoly x, y;
    friend bool operator<(const AdditivePoint& a, const AdditivePoint& b)
    {
        return a.x == b.x ? a.y < b.y : a.x < b.x;
    }
    friend bool operator==(const AdditivePoint& a, const AdditivePoint& b) { return a.x == b.x && a.y == b.y; }
    AdditivePoint under(const TwistedPoly& u) const { return {tw_mul(u, x), tw_mul(u, y)}; }
    std::vector<FqRat> as_functions() const
    {
        FqRat t = FqRat::t(x.field());
        return {act(x, t), act(y, t)};
    }
    bool on_line(const FqElem& lambda) const { return y == x.scaled(lambda); }
};

struct SharpReport {
    std::int64_t q = 0;
    std::size_t deg_bound = 0;
    FqElem lambda;
    TwistedPoly phi_t, phi_t2;
    std::size_t operator_dim = 0;      ///< F_q-dimension of the operators of degree <= bound
    std::size_t enumerated = 0;        ///< module elements u(t, lambda t)
    std::vector<AdditivePoint> on_curve;  ///< those with y = lambda x, sorted
    std::size_t expected_on_curve = 0; ///< #{(f(t), f(lambda t)) : f in F_q[F^2], deg f <= bound}
    bool on_curve_matches = false;     ///< the two sets coincide
    bool phi_t2_invariant = false;     ///< phi_{t^2} keeps every on-curve point on the curve
    bool phi_t_invariant = true;       ///< phi_t keeps (t, lambda t) on the curve
    bool ok() const { return on_curve_matches && phi_t2_invariant && !phi_t_invariant; }
};

namespace detail {

// reduced echelon basis over the subfield of the given twisted polynomials
inline std::vector<TwistedPoly> echelon_span(std::vector<TwistedPoly> gens)
{
    std::vector<TwistedPoly> basis;
    for (auto& g : gens) {
        for (const auto& b : basis) {
            const std::size_t top = static_cast<std::size_t>(b.degree());
            FqElem c = g.coeff(top);
            if (!c.is_zero())
                g = g - b.scaled(c);
        }
        if (g.is_zero())
            continue;
        g = g.scaled(g.coeffs().back().inverse());
        const std::size_t top = static_cast<std::size_t>(g.degree());
        for (auto& b : basis) {
            FqElem c = b.coeff(top);
            if (!c.is_zero())
                b = b - g.scaled(c);
        }
        basis.push_back(g);
    }
    std::sort(basis.begin(), basis.end());
    return basis;
}

// all combinations of the basis with coefficients from the scalars
inline std::vector<TwistedPoly> combinations(const std::vector<TwistedPoly>& b, const std::vector<FqElem>& scalars,
                                             const TwistedPoly& zero)
{
    std::vector<TwistedPoly> out;
    std::vector<std::size_t> digit(b.size(), 0);
    for (;;) {
        TwistedPoly u = zero;
        for (std::size_t i = 0; i < b.size(); ++i)
            if (digit[i])
                u = u + b[i].scaled(scalars[digit[i]]);
        out.push_back(u);
        std::size_t i = 0;
        while (i < b.size() && ++digit[i] == scalars.size())
            digit[i++] = 0;
        if (i == b.size())
            break;
    }
    return out;
}

} // namespace detail

/// phi_t = F + F^3 over F_{q^2}, Gamma generated by (t, lambda t) under
/// F_q[t][F^2], X: y = lambda x.
inline SharpReport sharp_scenario(std::int64_t q, std::size_t deg_bound)
{
    if (!prime_power(q))
        throw InputError("sharp_scenario: q = " + std::to_string(q) + " is not a prime power");
    if (deg_bound < 1)
        throw InputError("sharp_scenario: degree bound must be >= 1");
    const FiniteField& f2 = FiniteField::of_order(q * q);
    SharpReport rep;
    rep.q = q;
    rep.deg_bound = deg_bound;
    rep.lambda = least_non_base(f2, q);
    DrinfeldModule d(TwistedPoly::from_ints(f2, q, {0, 1, 0, 1}));
    rep.phi_t = d.phi_t();
    rep.phi_t2 = phi_eval(d, FqPoly::monomial(FqElem(f2, 1), 2));
    const TwistedPoly zero = TwistedPoly::zero(f2, q);
    const auto scalars = base_field_elements(f2, q);

    // operators phi_{t^j} F^(2i) of degree <= bound and their F_q-span
    std::vector<TwistedPoly> gens;
    TwistedPoly phi_j = TwistedPoly::one(f2, q);
    for (std::size_t j = 0; 3 * j <= deg_bound; ++j) {
        for (std::size_t i = 0; 3 * j + 2 * i <= deg_bound; ++i)
            gens.push_back(tw_mul(phi_j, TwistedPoly::monomial(FqElem(f2, 1), 2 * i, q)));
        phi_j = tw_mul(phi_j, d.phi_t());
    }
    std::vector<TwistedPoly> basis = detail::echelon_span(gens);
    rep.operator_dim = basis.size();

    const AdditivePoint gen{TwistedPoly::one(f2, q), TwistedPoly::constant(rep.lambda, q)};
    std::set<AdditivePoint> on_curve;
    for (const auto& u : detail::combinations(basis, scalars, zero)) {
        ++rep.enumerated;
        AdditivePoint p = gen.under(u);
        if (p.on_line(rep.lambda))
            on_curve.insert(p);
    }
    rep.on_curve.assign(on_curve.begin(), on_curve.end());

    std::vector<TwistedPoly> even;
    for (std::size_t i = 0; 2 * i <= deg_bound; ++i)
        even.push_back(TwistedPoly::monomial(FqElem(f2, 1), 2 * i, q));
    std::set<AdditivePoint> expected;
    for (const auto& f : detail::combinations(even, scalars, zero))
        expected.insert(gen.under(f));
    rep.expected_on_curve = expected.size();
    rep.on_curve_matches = on_curve == expected;

    rep.phi_t2_invariant = true;
    for (const auto& p : on_curve)
        rep.phi_t2_invariant = rep.phi_t2_invariant && p.under(rep.phi_t2).on_line(rep.lambda);
    rep.phi_t_invariant = gen.under(rep.phi_t).on_line(rep.lambda);
    return rep;
}

} // namespace frobset

#endif // FROBSET_DRINFELD_HPP
