#include "support.hpp"

#include <gtest/gtest.h>

using namespace frobset;

namespace {

FgModule fibonacci_module()
{
    return FgModule::make(2, {}, IntMatrix{{0, 1}, {1, 1}}, IntMatrix(0, 2), IntMatrix(0, 0), IntPoly{-1, -1, 1});
}

} // namespace

TEST(ZBlock, FibonacciRows)
{
    ZTable z = z_block(IntPoly{-1, -1, 1}, 30);
    // direct recursion
    std::vector<BigInt> fib{0, 1};
    while (fib.size() <= 31)
        fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
    for (std::size_t n = 0; n <= 30; ++n) {
        EXPECT_EQ(z(1, n), fib[n]);
        EXPECT_EQ(z(0, n), n == 0 ? BigInt(1) : fib[n - 1]);
    }
}

TEST(ZBlock, SingleTermRecursion)
{
    ZTable z = z_block(IntPoly{-3, 1}, 40);
    for (unsigned n = 0; n <= 40; ++n)
        EXPECT_EQ(z(0, n), boost::multiprecision::pow(BigInt(3), n));
}

TEST(ZBlock, RowsSatisfyTheRecursion)
{
    std::mt19937_64 rng(17);
    for (int it = 0; it < 50; ++it) {
        long g = testsupport::uniform(rng, 1, 4);
        IntPoly f;
        for (long i = 0; i < g; ++i)
            f.emplace_back(testsupport::uniform(rng, -3, 3));
        f.emplace_back(1);
        ZTable z = z_block(f, 60);
        for (std::size_t j = 0; j < z.g; ++j) {
            for (std::size_t n = 0; n < z.g; ++n)
                ASSERT_EQ(z(j, n), n == j ? 1 : 0);
            // checked from the top down, independent of generation order
            for (std::size_t n = 60; n >= z.g; --n) {
                BigInt s = 0;
                for (std::size_t l = 0; l < z.g; ++l)
                    s -= f[l] * z(j, n - z.g + l);
                ASSERT_EQ(z(j, n), s);
            }
        }
    }
    EXPECT_THROW(z_block(IntPoly{1, 2}, 3), InputError);
}

TEST(FrobPower, Examples)
{
    FgModule fib = fibonacci_module();
    ModElement p = fib.element({1, 0});
    EXPECT_EQ(frob_power(fib, p, 0), p);
    // 5-fold naive application of [[0,1],[1,1]]
    IntVector v{1, 0};
    for (int i = 0; i < 5; ++i)
        v = IntVector{v[1], v[0] + v[1]};
    EXPECT_EQ(frob_power(fib, p, 5).free, v);
    EXPECT_EQ(frob_power(fib, p, 5).free, (IntVector{3, 5}));
    EXPECT_EQ(frob_power(fib, p, 7).free, (IntVector{8, 13}));
    EXPECT_EQ(frob_power_via_z(fib, p, 7), frob_power(fib, p, 7));

    FgModule tors = FgModule::make(0, {4}, IntMatrix(0, 0), IntMatrix(1, 0), IntMatrix{{3}});
    ModElement t = tors.element({}, {1});
    EXPECT_EQ(frob_power(tors, t, 2).torsion, std::vector<std::int64_t>{1});
    EXPECT_EQ(frob_power(tors, t, 1).torsion, std::vector<std::int64_t>{3});

    FgModule gm = FgModule::multiplicative(2);
    EXPECT_EQ(frob_power_via_z(gm, gm.element({1}), 10).free[0], 1024);
}

TEST(FrobPower, ViaZBelowDegreeIsDirect)
{
    std::mt19937_64 rng(23);
    for (int it = 0; it < 30; ++it) {
        FgModule mod = testsupport::random_module(rng);
        ModElement p = testsupport::random_element(rng, mod, -5, 5);
        ModElement direct = p;
        for (std::size_t n = 0; n < mod.g(); ++n) {
            ASSERT_EQ(frob_power_via_z(mod, p, n), direct);
            direct = mod.apply(direct);
        }
    }
}

TEST(FrobPower, CoreIdentityOnRandomModules)
{
    std::mt19937_64 rng(101);
    for (int it = 0; it < 25; ++it) {
        FgModule mod = testsupport::random_module(rng);
        ASSERT_TRUE(mod.annihilated_by(mod.minpoly()));
        ModElement p = testsupport::random_element(rng, mod, -4, 4);
        ZTable z = z_block(mod.minpoly(), 120);
        ModElement direct = p;
        for (std::size_t n = 0; n <= 120; ++n) {
            ASSERT_EQ(frob_power_via_z(mod, p, n, z), direct) << "n=" << n;
            ASSERT_EQ(frob_power(mod, p, n), direct) << "n=" << n;
            direct = mod.apply(direct);
        }
    }
}

TEST(FgModule, RejectsBrokenHomomorphismCondition)
{
    // Z/2 -> Z/4 via 1: 2*1 != 0 mod 4
    try {
        FgModule::make(0, {4, 2}, IntMatrix(0, 0), IntMatrix(2, 0), IntMatrix{{1, 1}, {0, 1}});
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("A_tt(0,1)"), std::string::npos) << e.what();
    }
    EXPECT_THROW(FgModule::make(1, {}, IntMatrix{{1, 2}}, IntMatrix(0, 1), IntMatrix(0, 0)), InputError);
    EXPECT_THROW(FgModule::make(1, {1}, IntMatrix{{1}}, IntMatrix(1, 1), IntMatrix(1, 1)), InputError);
}

TEST(Validate, MultiplicativeModelPasses)
{
    for (std::int64_t q : {2, 3, 4, 9}) {
        auto rep = validate(FgModule::multiplicative(q));
        EXPECT_TRUE(rep.integrality.ok);
        EXPECT_TRUE(rep.zero_divisor.ok);
        EXPECT_TRUE(rep.separatedness.ok) << rep.separatedness.detail;
        EXPECT_TRUE(rep.chain.certified);
    }
}

TEST(Validate, ZeroMapFailsZeroDivisor)
{
    auto mod = FgModule::make(1, {}, IntMatrix{{0}}, IntMatrix(0, 1), IntMatrix(0, 0), IntPoly{0, 1});
    auto rep = validate(mod);
    EXPECT_TRUE(rep.integrality.ok);
    EXPECT_FALSE(rep.zero_divisor.ok);
}

TEST(Validate, TorsionKernelFailsZeroDivisor)
{
    // multiplication by 2 on Z/4 kills 2
    auto mod = FgModule::make(0, {4}, IntMatrix(0, 0), IntMatrix(1, 0), IntMatrix{{2}});
    EXPECT_FALSE(validate(mod).zero_divisor.ok);
}

TEST(Validate, DivisibleCoordinateFailsSeparatedness)
{
    auto mod = FgModule::make(2, {}, IntMatrix{{2, 0}, {0, 1}}, IntMatrix(0, 2), IntMatrix(0, 0),
                              poly_mul(IntPoly{-2, 1}, IntPoly{-1, 1}));
    auto rep = validate(mod);
    EXPECT_TRUE(rep.integrality.ok);
    EXPECT_TRUE(rep.zero_divisor.ok);
    EXPECT_FALSE(rep.separatedness.ok);
    ASSERT_EQ(rep.unit_factors.size(), 1u);
    EXPECT_EQ(rep.unit_factors[0], (IntPoly{-1, 1}));
    // the image chain keeps the vector (0,1) forever
    ASSERT_EQ(rep.chain.shortest.size(), 10u);
    for (const auto& s : rep.chain.shortest) {
        ASSERT_TRUE(s);
        EXPECT_EQ(*s, 1);
    }
    EXPECT_FALSE(rep.chain.certified);
}

TEST(Validate, WrongPolynomialFailsIntegrality)
{
    auto mod = FgModule::make(1, {}, IntMatrix{{2}}, IntMatrix(0, 1), IntMatrix(0, 0), IntPoly{-3, 1});
    EXPECT_FALSE(validate(mod).integrality.ok);
}

TEST(ProposeMinpoly, AnnihilatesWithTorsion)
{
    std::mt19937_64 rng(31);
    for (int it = 0; it < 50; ++it) {
        FgModule mod = testsupport::random_module(rng);
        EXPECT_TRUE(mod.annihilated_by(mod.minpoly()));
        EXPECT_TRUE(validate(mod, 0).integrality.ok);
    }
}

TEST(PowerModule, MatchesIteratedAction)
{
    std::mt19937_64 rng(37);
    for (int it = 0; it < 20; ++it) {
        FgModule mod = testsupport::random_module(rng);
        FgModule m3 = power_module(mod, 3);
        ModElement p = testsupport::random_element(rng, mod, -3, 3);
        EXPECT_EQ(m3.apply(p), frob_power(mod, p, 3));
        EXPECT_TRUE(m3.annihilated_by(m3.minpoly()));
    }
}
