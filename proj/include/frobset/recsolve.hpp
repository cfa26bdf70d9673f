#ifndef FROBSET_RECSOLVE_HPP
#define FROBSET_RECSOLVE_HPP

// Linear forms in the fundamental sequences z_{j,n} of a monic recurrence:
// periods modulo N, exact congruence systems, and a bounded solver for
// equations with a modular sieve and an explicit completeness label.

#include "exponent_set.hpp"
#include "module.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_set>

namespace frobset {

struct PeriodProfile {
    std::int64_t modulus = 1;
    std::int64_t preperiod = 0;
    std::int64_t period = 1;
    friend bool operator==(const PeriodProfile&, const PeriodProfile&) = default;
};

/// The states X^n mod (f, N) for n < preperiod + period; coefficient j of
/// X^n mod f is z_{j,n}.
struct StateSequence {
    PeriodProfile profile;
    std::size_t g = 0;
    std::vector<std::int64_t> data;

    std::int64_t length() const { return profile.preperiod + profile.period; }
    std::int64_t z(std::size_t j, std::int64_t idx) const { return data[static_cast<std::size_t>(idx) * g + j]; }
    /// Index in [0, length) of the class of n.
    std::int64_t class_index(std::int64_t n) const
    {
        if (n < profile.preperiod)
            return n;
        return profile.preperiod + (n - profile.preperiod) % profile.period;
    }
};

namespace detail {

inline std::int64_t mulmod64(std::int64_t a, std::int64_t b, std::int64_t n)
{
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % n);
}

inline std::vector<std::int64_t> recurrence_alpha(const IntPoly& f, std::int64_t n)
{
    if (!is_monic(f) || degree(f) < 1)
        throw InputError("recurrence polynomial must be monic of degree >= 1");
    std::vector<std::int64_t> alpha;
    for (long i = 0; i < degree(f); ++i)
        alpha.push_back(static_cast<std::int64_t>(mod_floor(-f[static_cast<std::size_t>(i)], BigInt(n))));
    return alpha;
}

// state <- X * state mod (f, n)
inline void advance(std::vector<std::int64_t>& s, const std::vector<std::int64_t>& alpha, std::int64_t n)
{
    const std::size_t g = s.size();
    const std::int64_t top = s[g - 1];
    for (std::size_t j = g; j-- > 0;) {
        std::int64_t v = (j ? s[j - 1] : 0) + mulmod64(alpha[j], top, n);
        s[j] = v >= n ? v - n : v;
    }
}

// Brent's cycle detection; nothing when more than max_steps are needed.
inline std::optional<PeriodProfile> brent(const std::vector<std::int64_t>& alpha, std::int64_t n,
                                          std::int64_t max_steps)
{
    const std::size_t g = alpha.size();
    std::vector<std::int64_t> x0(g, 0);
    x0[0] = 1 % n;
    std::int64_t steps = 0, power = 1, lam = 1;
    std::vector<std::int64_t> tortoise = x0, hare = x0;
    advance(hare, alpha, n);
    while (tortoise != hare) {
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        advance(hare, alpha, n);
        ++lam;
        if (++steps > max_steps)
            return std::nullopt;
    }
    tortoise = x0;
    hare = x0;
    for (std::int64_t i = 0; i < lam; ++i)
        advance(hare, alpha, n);
    std::int64_t mu = 0;
    while (tortoise != hare) {
        advance(tortoise, alpha, n);
        advance(hare, alpha, n);
        ++mu;
        if (++steps > max_steps)
            return std::nullopt;
    }
    return PeriodProfile{n, mu, lam};
}

} // namespace detail

/// Minimal preperiod and period of the z-sequences modulo n.
inline PeriodProfile detect_period(const IntPoly& f, std::int64_t n, std::int64_t max_steps = 400'000'000)
{
    if (n < 2)
        throw InputError("detect_period: modulus must be >= 2");
    auto p = detail::brent(detail::recurrence_alpha(f, n), n, max_steps);
    if (!p)
        throw Refusal("detect_period: no cycle found within " + std::to_string(max_steps) + " steps modulo " +
                      std::to_string(n));
    return *p;
}

/// Cached state sequence of f modulo n (n = 1 allowed); nullptr when
/// preperiod + period exceeds max_length.
inline std::shared_ptr<const StateSequence> state_sequence(const IntPoly& f, std::int64_t n, std::int64_t max_length)
{
    using Key = std::pair<std::vector<std::int64_t>, std::int64_t>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const StateSequence>> cache;

    const auto g = static_cast<std::size_t>(degree(f));
    if (n == 1) {
        auto seq = std::make_shared<StateSequence>();
        seq->profile = PeriodProfile{1, 0, 1};
        seq->g = g;
        seq->data.assign(g, 0);
        return seq;
    }
    auto alpha = detail::recurrence_alpha(f, n);
    Key key{alpha, n};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second->length() <= max_length ? it->second : nullptr;
    }
    auto prof = detail::brent(alpha, n, 3 * max_length + 16);
    if (!prof || prof->preperiod + prof->period > max_length)
        return nullptr;
    auto seq = std::make_shared<StateSequence>();
    seq->profile = *prof;
    seq->g = g;
    std::vector<std::int64_t> s(g, 0);
    s[0] = 1 % n;
    for (std::int64_t i = 0; i < seq->length(); ++i) {
        seq->data.insert(seq->data.end(), s.begin(), s.end());
        detail::advance(s, alpha, n);
    }
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, seq);
    return seq;
}

/// sum_{j,i} coeffs(j,i) z_{j,n_i} = target (mod modulus)
struct Congruence {
    IntMatrix coeffs;  ///< g x k
    BigInt target;
    BigInt modulus;
};

/// sum_{j,i} coeffs(j,i) z_{j,n_i} = target over Z
struct Equation {
    IntMatrix coeffs;  ///< g x k
    BigInt target;
};

/// One coordinate class: the single value `start` when exact, otherwise
/// {start + t * period : t >= 0}.
struct ClassSpec {
    bool exact = true;
    std::int64_t start = 0;
    std::int64_t period = 0;
    std::string str() const
    {
        return exact ? std::to_string(start)
                     : std::to_string(start) + "+" + std::to_string(period) + "N";
    }
    friend bool operator<(const ClassSpec& a, const ClassSpec& b)
    {
        return std::tie(a.exact, a.start, a.period) < std::tie(b.exact, b.start, b.period);
    }
    friend bool operator==(const ClassSpec&, const ClassSpec&) = default;
};

struct ExcludedClass {
    std::vector<ClassSpec> classes;  ///< per involved variable
    std::int64_t modulus = 0;        ///< no solution on the class modulo this
};

struct CompletenessStatus {
    bool complete = true;
    std::int64_t n_max = 0;
    std::vector<ExcludedClass> excluded;  ///< first few certificates
    std::size_t excluded_total = 0;
    std::vector<std::vector<ClassSpec>> open;  ///< surviving infinite classes (first few)
    std::size_t open_total = 0;
    std::vector<std::string> notes;

    static constexpr std::size_t kKeep = 32;

    void absorb(const CompletenessStatus& o)
    {
        complete = complete && o.complete;
        n_max = std::max(n_max, o.n_max);
        for (const auto& e : o.excluded)
            if (excluded.size() < kKeep)
                excluded.push_back(e);
        excluded_total += o.excluded_total;
        for (const auto& c : o.open)
            if (open.size() < kKeep)
                open.push_back(c);
        open_total += o.open_total;
        for (const auto& n : o.notes)
            if (std::find(notes.begin(), notes.end(), n) == notes.end())
                notes.push_back(n);
    }
    std::string tag() const { return complete ? "complete" : "bounded"; }
};

struct SolverParams {
    std::int64_t n_max = 64;
    std::vector<std::int64_t> sieve_moduli;  ///< empty: prime powers <= 64
    std::size_t class_cap = 20'000;          ///< surviving class tuples kept by the sieve
    std::int64_t profile_cap = 20'000;       ///< longest state sequence the sieve will use
    std::int64_t max_tie_shift = 8;
    std::int64_t max_search = 50'000'000;    ///< tuples visited by the bounded search
    std::int64_t max_table = 50'000'000;     ///< class tuples in a congruence table
};

inline std::vector<std::int64_t> default_sieve_moduli()
{
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p <= 64; ++p) {
        if (!is_prime(p))
            continue;
        for (std::int64_t q = p; q <= 64; q *= p)
            out.push_back(q);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline void check_form_shape(const IntMatrix& c, std::size_t g, std::size_t k, const char* what)
{
    if (c.rows() != g || c.cols() != k)
        throw InputError(std::string(what) + ": coefficient block must be " + std::to_string(g) + "x" +
                         std::to_string(k));
}

inline std::vector<std::int64_t> divisors(std::int64_t n)
{
    std::vector<std::int64_t> d;
    for (std::int64_t i = 1; i * i <= n; ++i)
        if (n % i == 0) {
            d.push_back(i);
            if (i * i != n)
                d.push_back(n / i);
        }
    std::sort(d.begin(), d.end());
    return d;
}

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b)
{
    BigInt l = lcm(BigInt(a), BigInt(b));
    if (l > BigInt(std::int64_t(1) << 40))
        throw Refusal("modulus lcm too large");
    return static_cast<std::int64_t>(l);
}

} // namespace detail

/// Exact solution set in N^k of a system of congruences.
inline ExponentSet solve_congruences(const IntPoly& f, const std::vector<Congruence>& cons, std::size_t k,
                                     std::int64_t max_table = 50'000'000)
{
    const auto g = static_cast<std::size_t>(degree(f));
    if (!is_monic(f) || g < 1)
        throw InputError("solve_congruences: f must be monic of degree >= 1");
    std::int64_t big_n = 1;
    std::vector<std::int64_t> mods;
    for (const auto& c : cons) {
        detail::check_form_shape(c.coeffs, g, k, "congruence");
        if (c.modulus < 2)
            throw InputError("congruence modulus must be >= 2");
        if (!fits_int64(c.modulus))
            throw InputError("congruence modulus too large");
        mods.push_back(to_int64(c.modulus));
        big_n = detail::checked_lcm(big_n, mods.back());
    }
    if (cons.empty())
        return ExponentSet::all(k);
    if (k == 0) {
        for (const auto& c : cons)
            if (mod_floor(c.target, c.modulus) != 0)
                return ExponentSet(0);
        return ExponentSet::all(0);
    }
    auto seq = state_sequence(f, big_n, max_table);
    if (!seq)
        throw Refusal("solve_congruences: period modulo " + std::to_string(big_n) + " too long");
    const std::int64_t rho = seq->profile.preperiod, pi = seq->profile.period, len = seq->length();

    // residue of each constraint's contribution per coordinate and class
    std::vector<std::vector<std::vector<std::int64_t>>> part(cons.size());
    std::vector<std::int64_t> target(cons.size());
    for (std::size_t c = 0; c < cons.size(); ++c) {
        const std::int64_t m = mods[c];
        target[c] = static_cast<std::int64_t>(mod_floor(cons[c].target, BigInt(m)));
        part[c].assign(k, std::vector<std::int64_t>(static_cast<std::size_t>(len), 0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < g; ++j) {
                const auto d = static_cast<std::int64_t>(mod_floor(cons[c].coeffs(j, i), BigInt(m)));
                if (d == 0)
                    continue;
                for (std::int64_t x = 0; x < len; ++x) {
                    auto& v = part[c][i][static_cast<std::size_t>(x)];
                    v = (v + detail::mulmod64(d, seq->z(j, x) % m, m)) % m;
                }
            }
    }

    BigInt table_size = 1;
    for (std::size_t i = 0; i < k; ++i)
        table_size *= len;
    if (table_size > max_table)
        throw Refusal("solve_congruences: class table of size " + table_size.str() + " exceeds the limit");
    std::vector<std::int64_t> stride(k, 1);
    for (std::size_t i = 1; i < k; ++i)
        stride[i] = stride[i - 1] * len;
    const std::int64_t total = static_cast<std::int64_t>(table_size);
    std::vector<std::uint8_t> sat(static_cast<std::size_t>(total));
    {
        std::vector<std::int64_t> idx(k, 0);
        for (std::int64_t t = 0; t < total; ++t) {
            bool ok = true;
            for (std::size_t c = 0; c < cons.size() && ok; ++c) {
                std::int64_t s = 0;
                for (std::size_t i = 0; i < k; ++i)
                    s += part[c][i][static_cast<std::size_t>(idx[i])];
                ok = s % mods[c] == target[c];
            }
            sat[static_cast<std::size_t>(t)] = ok;
            std::size_t i = 0;
            while (i < k && ++idx[i] == len)
                idx[i++] = 0;
        }
    }

    // per coordinate: smallest period and preperiod leaving the table invariant
    auto same_under = [&](std::size_t i, auto&& remap) {
        for (std::int64_t t = 0; t < total; ++t) {
            std::int64_t x = (t / stride[i]) % len;
            std::int64_t y = remap(x);
            if (y == x)
                continue;
            if (sat[static_cast<std::size_t>(t)] != sat[static_cast<std::size_t>(t + (y - x) * stride[i])])
                return false;
        }
        return true;
    };
    auto cls = [&](std::int64_t v) { return v < rho ? v : rho + (v - rho) % pi; };
    std::vector<std::int64_t> rho_i(k), pi_i(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::int64_t p : detail::divisors(pi)) {
            if (same_under(i, [&](std::int64_t x) { return x < rho ? x : rho + (x - rho) % p; })) {
                pi_i[i] = p;
                break;
            }
        }
        std::int64_t r = rho;
        while (r > 0) {
            const std::int64_t v = r - 1, w = cls(v + pi_i[i]);
            if (!same_under(i, [&](std::int64_t x) { return x == v ? w : x; }))
                break;
            --r;
        }
        rho_i[i] = r;
    }

    ExponentSet out(k);
    std::vector<std::int64_t> idx(k, 0), count(k);
    for (std::size_t i = 0; i < k; ++i)
        count[i] = rho_i[i] + pi_i[i];
    for (;;) {
        std::int64_t t = 0;
        for (std::size_t i = 0; i < k; ++i)
            t += cls(idx[i]) * stride[i];
        if (sat[static_cast<std::size_t>(t)]) {
            bool all_exact = true;
            IntMatrix gens(k, 0);
            std::vector<IntVector> cols;
            IntVector start(k);
            for (std::size_t i = 0; i < k; ++i) {
                start[i] = idx[i];
                if (idx[i] >= rho_i[i]) {
                    all_exact = false;
                    IntVector col(k);
                    col[i] = pi_i[i];
                    cols.push_back(col);
                }
            }
            if (all_exact)
                out.add(ExpTuple(idx.begin(), idx.end()));
            else
                out.add(BoundedLatticeCoset(start, IntMatrix::from_columns(k, cols), start));
        }
        std::size_t i = 0;
        while (i < k && ++idx[i] == count[i])
            idx[i++] = 0;
        if (i == k)
            break;
    }
    return out;
}

struct EquationResult {
    ExponentSet solutions;
    CompletenessStatus status;
};

namespace detail {

// L_i(n) = sum_j coeffs(j, i) z_{j,n}
inline BigInt form_value(const IntMatrix& coeffs, std::size_t i, const ZTable& z, std::size_t n)
{
    BigInt s = 0;
    for (std::size_t j = 0; j < coeffs.rows(); ++j)
        if (coeffs(j, i) != 0)
            s += coeffs(j, i) * z(j, n);
    return s;
}

inline IntMatrix select_columns(const IntMatrix& a, const std::vector<std::size_t>& cols)
{
    IntMatrix out(a.rows(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < a.rows(); ++r)
            out(r, c) = a(r, cols[c]);
    return out;
}

// Eventually periodic integer sequences (roots zero or roots of unity): the
// profile over Z, found by exact iteration with a magnitude cap.
inline std::optional<PeriodProfile> integer_period(const IntPoly& f, std::int64_t max_steps = 512)
{
    const auto g = static_cast<std::size_t>(degree(f));
    std::vector<std::vector<BigInt>> states;
    std::map<std::vector<BigInt>, std::int64_t> seen;
    std::vector<BigInt> s(g, 0);
    s[0] = 1;
    const BigInt cap = BigInt(1) << 40;
    for (std::int64_t n = 0; n <= max_steps; ++n) {
        auto it = seen.find(s);
        if (it != seen.end())
            return PeriodProfile{0, it->second, n - it->second};
        seen.emplace(s, n);
        BigInt top = s[g - 1];
        for (std::size_t j = g; j-- > 0;) {
            s[j] = (j ? s[j - 1] : BigInt(0)) - f[j] * top;
            if (abs(s[j]) > cap)
                return std::nullopt;
        }
    }
    return std::nullopt;
}

struct Tie {
    std::size_t a, b;   // n_a = n_b + shift
    std::int64_t shift;
};

class EquationSolver {
public:
    EquationSolver(const IntPoly& f, const SolverParams& params) : f_(f), g_(static_cast<std::size_t>(degree(f))), p_(params)
    {
        z_ = z_block(f, static_cast<std::size_t>(std::max<std::int64_t>(p_.n_max, 0) + 2 * p_.max_tie_shift + g_ + 2));
        moduli_ = p_.sieve_moduli.empty() ? default_sieve_moduli() : p_.sieve_moduli;
        std::sort(moduli_.begin(), moduli_.end());
        moduli_.erase(std::unique(moduli_.begin(), moduli_.end()), moduli_.end());
    }

    EquationResult solve(const std::vector<Equation>& eqs, const std::vector<Congruence>& side, std::size_t k)
    {
        for (const auto& e : eqs)
            check_form_shape(e.coeffs, g_, k, "equation");
        for (const auto& c : side)
            check_form_shape(c.coeffs, g_, k, "congruence");
        EquationResult res{ExponentSet(k), {}};
        res.status.n_max = p_.n_max;
        if (eqs.empty()) {
            res.solutions = ExponentSet::all(k);
            return res;
        }
        std::vector<std::size_t> involved, free_vars;
        for (std::size_t i = 0; i < k; ++i) {
            bool zero = true;
            for (const auto& e : eqs)
                for (std::size_t j = 0; j < g_; ++j)
                    zero = zero && e.coeffs(j, i) == 0;
            (zero ? free_vars : involved).push_back(i);
        }
        std::vector<Equation> sub;
        for (const auto& e : eqs)
            sub.push_back(Equation{select_columns(e.coeffs, involved), e.target});
        std::vector<Congruence> sub_side;
        for (const auto& c : side) {
            bool supported = true;
            for (auto i : free_vars)
                for (std::size_t j = 0; j < g_; ++j)
                    supported = supported && c.coeffs(j, i) == 0;
            if (supported)
                sub_side.push_back(Congruence{select_columns(c.coeffs, involved), c.target, c.modulus});
        }
        EquationResult inner = solve_involved(sub, sub_side, involved.size());
        res.status = inner.status;
        // free variables range over N
        auto embed = [&](const IntVector& v) {
            IntVector out(k);
            for (std::size_t c = 0; c < involved.size(); ++c)
                out[involved[c]] = v[c];
            return out;
        };
        std::vector<IntVector> free_cols;
        for (auto i : free_vars) {
            IntVector col(k);
            col[i] = 1;
            free_cols.push_back(col);
        }
        for (const auto& t : inner.solutions.tuples()) {
            IntVector v = embed(to_int_vector(t));
            if (free_vars.empty())
                res.solutions.add(ExpTuple(t.begin(), t.end()));
            else
                res.solutions.add(BoundedLatticeCoset(v, IntMatrix::from_columns(k, free_cols), v));
        }
        for (const auto& c : inner.solutions.cosets()) {
            std::vector<IntVector> cols = free_cols;
            for (std::size_t j = 0; j < c.rank(); ++j)
                cols.push_back(embed(c.lattice.column(j)));
            res.solutions.add(BoundedLatticeCoset(embed(c.offset), IntMatrix::from_columns(k, cols), embed(c.lower)));
        }
        return res;
    }

private:
    // every variable has a nonzero coefficient somewhere
    EquationResult solve_involved(const std::vector<Equation>& eqs, const std::vector<Congruence>& side,
                                  std::size_t k)
    {
        EquationResult res{ExponentSet(k), {}};
        res.status.n_max = p_.n_max;
        if (k == 0) {
            bool ok = true;
            for (const auto& e : eqs)
                ok = ok && e.target == 0;
            if (ok)
                res.solutions = ExponentSet::all(0);
            return res;
        }
        if (auto ip = integer_period(f_))
            return solve_periodic(eqs, k, *ip);

        // families along tied pairs
        std::vector<Tie> ties = find_ties(eqs, k);
        ExponentSet families(k);
        if (!ties.empty())
            add_tie_families(eqs, side, k, ties, 0, std::vector<Tie>{}, families, res.status);

        sieve_and_search(eqs, side, k, res);
        ExponentSet merged(k);
        for (const auto& c : families.cosets())
            merged.add(c);
        for (const auto& t : families.tuples())
            merged.add(t);
        for (const auto& t : res.solutions.tuples())
            if (!es_member(families, t))
                merged.add(t);
        res.solutions = std::move(merged);
        return res;
    }

    // sequences periodic over Z: each equation is a congruence modulo a
    // number exceeding every possible difference
    EquationResult solve_periodic(const std::vector<Equation>& eqs, std::size_t k, const PeriodProfile& prof)
    {
        const auto len = static_cast<std::size_t>(prof.preperiod + prof.period);
        ZTable zt = z_block(f_, len);
        std::vector<Congruence> cons;
        for (const auto& e : eqs) {
            BigInt bound = abs(e.target) + 1;
            for (std::size_t i = 0; i < k; ++i) {
                BigInt mx = 0;
                for (std::size_t n = 0; n < len; ++n)
                    mx = std::max(mx, BigInt(abs(form_value(e.coeffs, i, zt, n))));
                bound += mx;
            }
            cons.push_back(Congruence{e.coeffs, e.target, 2 * bound});
        }
        EquationResult res{solve_congruences(f_, cons, k, p_.max_table), {}};
        res.status.n_max = p_.n_max;
        res.status.notes.push_back("integer sequences are eventually periodic; solved exactly as congruences");
        return res;
    }

    std::vector<Tie> find_ties(const std::vector<Equation>& eqs, std::size_t k) const
    {
        std::vector<Tie> ties;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                if (a == b)
                    continue;
                for (std::int64_t s = -p_.max_tie_shift; s <= p_.max_tie_shift; ++s) {
                    if (s < 0 || (s == 0 && a > b))
                        continue;  // each unordered tie once: shift >= 0 on the first variable
                    bool tie = true;
                    for (const auto& e : eqs)
                        for (std::size_t l = 0; l < g_ && tie; ++l)
                            tie = form_value(e.coeffs, a, z_, l + static_cast<std::size_t>(s)) ==
                                  -form_value(e.coeffs, b, z_, l);
                    if (tie)
                        ties.push_back(Tie{a, b, s});
                }
            }
        return ties;
    }

    void add_tie_families(const std::vector<Equation>& eqs, const std::vector<Congruence>& side, std::size_t k,
                          const std::vector<Tie>& ties, std::size_t from, std::vector<Tie> chosen, ExponentSet& out,
                          CompletenessStatus& status)
    {
        for (std::size_t t = from; t < ties.size(); ++t) {
            bool disjoint = true;
            for (const auto& c : chosen)
                disjoint = disjoint && c.a != ties[t].a && c.a != ties[t].b && c.b != ties[t].a && c.b != ties[t].b;
            if (!disjoint)
                continue;
            std::vector<Tie> next = chosen;
            next.push_back(ties[t]);
            emit_family(eqs, side, k, next, out, status);
            add_tie_families(eqs, side, k, ties, t + 1, next, out, status);
        }
    }

    void emit_family(const std::vector<Equation>& eqs, const std::vector<Congruence>& side, std::size_t k,
                     const std::vector<Tie>& chosen, ExponentSet& out, CompletenessStatus& status)
    {
        std::vector<bool> tied(k, false);
        for (const auto& t : chosen)
            tied[t.a] = tied[t.b] = true;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < k; ++i)
            if (!tied[i])
                rest.push_back(i);
        IntVector base(k), lower(k);
        std::vector<IntVector> cols;
        for (const auto& t : chosen) {
            base[t.a] = t.shift;
            lower[t.a] = t.shift;
            IntVector col(k);
            col[t.a] = col[t.b] = 1;
            cols.push_back(col);
        }
        std::vector<Equation> sub;
        for (const auto& e : eqs)
            sub.push_back(Equation{select_columns(e.coeffs, rest), e.target});
        std::vector<Congruence> sub_side;  // side filters only when supported on the rest
        for (const auto& c : side) {
            bool ok = true;
            for (std::size_t i = 0; i < k; ++i)
                if (tied[i])
                    for (std::size_t j = 0; j < g_; ++j)
                        ok = ok && c.coeffs(j, i) == 0;
            if (ok)
                sub_side.push_back(Congruence{select_columns(c.coeffs, rest), c.target, c.modulus});
        }
        EquationResult inner = solve(sub, sub_side, rest.size());
        status.absorb(inner.status);
        auto embed = [&](const IntVector& v, IntVector into) {
            for (std::size_t c = 0; c < rest.size(); ++c)
                into[rest[c]] = v[c];
            return into;
        };
        for (const auto& t : inner.solutions.tuples()) {
            IntVector v = to_int_vector(t);
            out.add(BoundedLatticeCoset(embed(v, base), IntMatrix::from_columns(k, cols), embed(v, lower)));
        }
        for (const auto& c : inner.solutions.cosets()) {
            std::vector<IntVector> all = cols;
            for (std::size_t j = 0; j < c.rank(); ++j)
                all.push_back(embed(c.lattice.column(j), IntVector(k)));
            out.add(BoundedLatticeCoset(embed(c.offset, base), IntMatrix::from_columns(k, all), embed(c.lower, lower)));
        }
    }

    using ClassTuple = std::vector<std::int64_t>;  // class indices under the current profile

    struct ClassHash {
        std::size_t operator()(const ClassTuple& t) const
        {
            std::size_t h = 1469598103934665603ULL;
            for (auto x : t)
                h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
            return h;
        }
    };

    static ClassSpec spec_of(std::int64_t idx, const PeriodProfile& p)
    {
        if (idx < p.preperiod)
            return ClassSpec{true, idx, 0};
        return ClassSpec{false, idx, p.period};
    }

    // refinements of class idx under `from` into classes under `to`
    static std::vector<std::int64_t> refine(std::int64_t idx, const PeriodProfile& from, const PeriodProfile& to)
    {
        if (idx < from.preperiod)
            return {idx};
        std::vector<std::int64_t> out;
        for (std::int64_t v = idx; v < to.preperiod + to.period; v += from.period)
            out.push_back(v);
        return out;
    }

    // form value residue on a class tuple modulo the current joint modulus
    static bool fails(const std::vector<Equation>& eqs, const std::vector<Congruence>& side, const StateSequence& seq,
                      const ClassTuple& t, std::int64_t& witness)
    {
        const std::int64_t m = seq.profile.modulus;
        if (m == 1)
            return false;
        for (const auto& e : eqs) {
            BigInt s = 0;
            for (std::size_t i = 0; i < t.size(); ++i)
                for (std::size_t j = 0; j < seq.g; ++j)
                    if (e.coeffs(j, i) != 0)
                        s += e.coeffs(j, i) * seq.z(j, t[i]);
            if (mod_floor(s - e.target, BigInt(m)) != 0) {
                witness = m;
                return true;
            }
        }
        for (const auto& c : side) {
            if (!fits_int64(c.modulus) || m % to_int64(c.modulus) != 0)
                continue;
            BigInt s = 0;
            for (std::size_t i = 0; i < t.size(); ++i)
                for (std::size_t j = 0; j < seq.g; ++j)
                    if (c.coeffs(j, i) != 0)
                        s += c.coeffs(j, i) * seq.z(j, t[i]);
            if (mod_floor(s - c.target, c.modulus) != 0) {
                witness = to_int64(c.modulus);
                return true;
            }
        }
        return false;
    }

    void sieve_and_search(const std::vector<Equation>& eqs, const std::vector<Congruence>& side, std::size_t k,
                          EquationResult& res)
    {
        std::vector<std::int64_t> moduli = moduli_;
        for (const auto& c : side)
            if (fits_int64(c.modulus) && c.modulus <= p_.profile_cap)
                moduli.push_back(to_int64(c.modulus));
        std::sort(moduli.begin(), moduli.end());
        moduli.erase(std::unique(moduli.begin(), moduli.end()), moduli.end());

        std::shared_ptr<const StateSequence> seq = state_sequence(f_, 1, 1);
        std::vector<ClassTuple> alive{ClassTuple(k, 0)};
        std::vector<ExcludedClass> excluded;
        std::size_t excluded_total = 0;
        std::int64_t joint = 1;
        for (std::int64_t m : moduli) {
            std::int64_t next;
            try {
                next = checked_lcm(joint, m);
            } catch (const Refusal&) {
                continue;
            }
            if (next == joint)
                continue;
            auto nseq = state_sequence(f_, next, p_.profile_cap);
            if (!nseq)
                continue;
            const PeriodProfile& from = seq->profile;
            const PeriodProfile& to = nseq->profile;
            // size of the refinement
            std::vector<std::map<std::int64_t, std::size_t>> pieces(k);
            BigInt projected = 0;
            for (const auto& t : alive) {
                BigInt c = 1;
                for (std::size_t i = 0; i < k; ++i) {
                    auto it = pieces[i].find(t[i]);
                    if (it == pieces[i].end())
                        it = pieces[i].emplace(t[i], refine(t[i], from, to).size()).first;
                    c *= it->second;
                }
                projected += c;
            }
            if (projected > p_.class_cap)
                continue;
            std::vector<ClassTuple> survivors;
            for (const auto& t : alive) {
                std::vector<std::vector<std::int64_t>> parts(k);
                for (std::size_t i = 0; i < k; ++i)
                    parts[i] = refine(t[i], from, to);
                std::vector<std::size_t> pos(k, 0);
                for (;;) {
                    ClassTuple r(k);
                    for (std::size_t i = 0; i < k; ++i)
                        r[i] = parts[i][pos[i]];
                    std::int64_t witness = 0;
                    if (fails(eqs, side, *nseq, r, witness)) {
                        ++excluded_total;
                        if (excluded.size() < CompletenessStatus::kKeep) {
                            ExcludedClass ex;
                            for (auto x : r)
                                ex.classes.push_back(spec_of(x, to));
                            ex.modulus = witness;
                            excluded.push_back(ex);
                        }
                    } else {
                        survivors.push_back(std::move(r));
                    }
                    std::size_t i = 0;
                    while (i < k && ++pos[i] == parts[i].size())
                        pos[i++] = 0;
                    if (i == k)
                        break;
                }
            }
            alive = std::move(survivors);
            seq = nseq;
            joint = next;
            if (alive.empty())
                break;
        }

        // exact classes are single points; periodic ones need the bounded search
        const PeriodProfile prof = seq->profile;
        std::unordered_set<ClassTuple, ClassHash> alive_set(alive.begin(), alive.end());
        std::vector<std::vector<ClassSpec>> open;
        std::size_t open_total = 0;
        bool growth_certified = false;
        for (const auto& t : alive) {
            bool exact = true;
            for (auto x : t)
                exact = exact && x < prof.preperiod;
            if (exact) {
                if (satisfies(eqs, ExpTuple(t.begin(), t.end())))
                    res.solutions.add(ExpTuple(t.begin(), t.end()));
                continue;
            }
            ++open_total;
            if (open.size() < CompletenessStatus::kKeep) {
                std::vector<ClassSpec> spec;
                for (auto x : t)
                    spec.push_back(spec_of(x, prof));
                open.push_back(spec);
            }
        }
        if (open_total > 0 && k == 1 && g_ == 1 && growth_beyond_bound(eqs)) {
            growth_certified = true;
            res.status.notes.push_back("single geometric term: no solution beyond the search bound");
        } else if (open_total > 0 && k == 1 && window_beyond_bound(eqs)) {
            growth_certified = true;
            res.status.notes.push_back("nonnegative recurrence: the last window beyond the target stays beyond it");
        }

        // bounded search over the surviving periodic classes
        BigInt box = 1;
        for (std::size_t i = 0; i < k; ++i)
            box *= (p_.n_max + 1);
        if (open_total > 0) {
            if (box > p_.max_search)
                throw Refusal("bounded search box of " + box.str() + " tuples exceeds the limit");
            std::vector<std::vector<std::vector<BigInt>>> vals(eqs.size(), std::vector<std::vector<BigInt>>(k));
            for (std::size_t e = 0; e < eqs.size(); ++e)
                for (std::size_t i = 0; i < k; ++i)
                    for (std::int64_t n = 0; n <= p_.n_max; ++n)
                        vals[e][i].push_back(form_value(eqs[e].coeffs, i, z_, static_cast<std::size_t>(n)));
            ExpTuple n(k, 0);
            ClassTuple cls(k);
            for (;;) {
                for (std::size_t i = 0; i < k; ++i)
                    cls[i] = seq->class_index(n[i]);
                bool periodic = false;
                for (auto x : cls)
                    periodic = periodic || x >= prof.preperiod;
                if (periodic && alive_set.count(cls)) {
                    bool ok = true;
                    for (std::size_t e = 0; e < eqs.size() && ok; ++e) {
                        BigInt s = 0;
                        for (std::size_t i = 0; i < k; ++i)
                            s += vals[e][i][static_cast<std::size_t>(n[i])];
                        ok = s == eqs[e].target;
                    }
                    if (ok)
                        res.solutions.add(n);
                }
                std::size_t i = 0;
                while (i < k && ++n[i] > p_.n_max)
                    n[i++] = 0;
                if (i == k)
                    break;
            }
        }
        CompletenessStatus st;
        st.n_max = p_.n_max;
        st.complete = open_total == 0 || growth_certified;
        st.excluded = std::move(excluded);
        st.excluded_total = excluded_total;
        st.open = std::move(open);
        st.open_total = growth_certified ? 0 : open_total;
        if (growth_certified)
            st.open.clear();
        st.notes.push_back("sieve modulus " + std::to_string(joint) + " (preperiod " +
                           std::to_string(prof.preperiod) + ", period " + std::to_string(prof.period) + ")");
        res.status.absorb(st);
    }

    bool satisfies(const std::vector<Equation>& eqs, const ExpTuple& n) const
    {
        std::int64_t top = 0;
        for (auto x : n)
            top = std::max(top, x);
        const ZTable* z = &z_;
        ZTable local;
        if (static_cast<std::size_t>(top) >= z_.size()) {
            local = z_block(f_, static_cast<std::size_t>(top));
            z = &local;
        }
        for (const auto& e : eqs) {
            BigInt s = 0;
            for (std::size_t i = 0; i < n.size(); ++i)
                s += form_value(e.coeffs, i, *z, static_cast<std::size_t>(n[i]));
            if (s != e.target)
                return false;
        }
        return true;
    }

    // k = 1, f = X - a with |a| >= 2: |c a^n| > |D| for all n > n_max
    bool growth_beyond_bound(const std::vector<Equation>& eqs) const
    {
        const BigInt a = -f_[0];
        if (abs(a) < 2)
            return false;
        BigInt pw = boost::multiprecision::pow(abs(a), static_cast<unsigned>(p_.n_max + 1));
        for (const auto& e : eqs) {
            const BigInt c = abs(e.coeffs(0, 0));
            if (c != 0 && c * pw > abs(e.target))
                return true;
        }
        return false;
    }

    // k = 1, all recurrence coefficients >= 0 with sum >= 1: if the values at
    // n_max - g + 1, ..., n_max all exceed |D| (or all lie below -|D|), every
    // later value does too, by induction on the recurrence
    bool window_beyond_bound(const std::vector<Equation>& eqs) const
    {
        BigInt sum = 0;
        for (std::size_t l = 0; l < g_; ++l) {
            if (-f_[l] < 0)
                return false;
            sum += -f_[l];
        }
        if (sum < 1 || p_.n_max + 1 < static_cast<std::int64_t>(g_))
            return false;
        for (const auto& e : eqs) {
            const BigInt bound = abs(e.target);
            bool above = true, below = true;
            for (std::size_t j = 0; j < g_; ++j) {
                BigInt v = form_value(e.coeffs, 0, z_, static_cast<std::size_t>(p_.n_max) - j);
                above = above && v > bound;
                below = below && v < -bound;
            }
            if (above || below)
                return true;
        }
        return false;
    }

    IntPoly f_;
    std::size_t g_;
    SolverParams p_;
    ZTable z_;
    std::vector<std::int64_t> moduli_;
};

} // namespace detail

/// All solutions n in N^k with every n_i <= n_max of the equation system,
/// plus exact families along tied variables, with a completeness label.
/// Side congruences act as additional sieve filters.
inline EquationResult solve_equations(const IntPoly& f, const std::vector<Equation>& eqs, std::size_t k,
                                      const SolverParams& params = {}, const std::vector<Congruence>& side = {})
{
    if (!is_monic(f) || degree(f) < 1)
        throw InputError("solve_equations: f must be monic of degree >= 1");
    if (params.n_max < 1)
        throw InputError("solve_equations: n_max must be >= 1");
    detail::EquationSolver solver(f, params);
    return solver.solve(eqs, side, k);
}

} // namespace frobset

#endif // FROBSET_RECSOLVE_HPP
