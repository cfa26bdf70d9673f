#ifndef FROBSET_BIGINT_HPP
#define FROBSET_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>

namespace frobset {

using BigInt = boost::multiprecision::cpp_int;

/// Thrown for malformed or inconsistent caller input (dimension mismatch,
/// broken homomorphism conditions, unparsable scenario text, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation is refused because a precondition of the
/// mathematics does not hold (e.g. F is a zero divisor on the module).
class Refusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline BigInt floor_div(const BigInt& a, const BigInt& b)
{
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b)
{
    return -floor_div(-a, b);
}

/// Least nonnegative residue; m must be nonzero.
inline BigInt mod_floor(const BigInt& a, const BigInt& m)
{
    BigInt r = a % m;
    if (r < 0)
        r += abs(m);
    return r;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + (m < 0 ? -m : m) : r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b)
{
    return boost::multiprecision::gcd(abs(a), abs(b));
}

inline BigInt lcm(const BigInt& a, const BigInt& b)
{
    if (a == 0 || b == 0)
        return 0;
    return abs(a / gcd(a, b) * b);
}

inline std::int64_t lcm64(std::int64_t a, std::int64_t b)
{
    if (a == 0 || b == 0)
        return 0;
    std::int64_t x = a, y = b;
    while (y != 0) {
        std::int64_t t = x % y;
        x = y;
        y = t;
    }
    return a / (x < 0 ? -x : x) * b;
}

/// Extended gcd: returns (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0.
inline std::tuple<BigInt, BigInt, BigInt> ext_gcd(const BigInt& a, const BigInt& b)
{
    BigInt old_r = a, r = b;
    BigInt old_s = 1, s = 0;
    BigInt old_t = 0, t = 1;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

inline std::string to_string(const BigInt& v)
{
    return v.str();
}

inline bool fits_int64(const BigInt& v)
{
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

inline std::int64_t to_int64(const BigInt& v)
{
    if (!fits_int64(v))
        throw std::overflow_error("integer does not fit in 64 bits: " + v.str());
    return static_cast<std::int64_t>(v);
}

inline bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

} // namespace frobset

#endif // FROBSET_BIGINT_HPP
