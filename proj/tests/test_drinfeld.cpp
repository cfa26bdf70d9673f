#include "support.hpp"

#include <frobset/drinfeld.hpp>

#include <gtest/gtest.h>

using namespace frobset;
using testsupport::uniform;

namespace {

TwistedPoly random_twisted(std::mt19937_64& rng, const FiniteField& f, std::int64_t q, long max_deg)
{
    std::vector<FqElem> c;
    for (long i = uniform(rng, 0, max_deg); i >= 0; --i)
        c.push_back(FqElem::from_code(f, uniform(rng, 0, f.order() - 1)));
    return TwistedPoly(f, q, c);
}

FqRat random_rat(std::mt19937_64& rng, const FiniteField& f)
{
    auto poly = [&](long deg) {
        std::vector<FqElem> c;
        for (long i = 0; i <= deg; ++i)
            c.push_back(FqElem::from_code(f, uniform(rng, 0, f.order() - 1)));
        return FqPoly(f, c);
    };
    FqPoly den = poly(uniform(rng, 0, 2));
    if (den.is_zero())
        den = FqPoly::constant(FqElem(f, 1));
    return FqRat(poly(uniform(rng, 0, 3)), den);
}

FqPoly random_a(std::mt19937_64& rng, const FiniteField& f, std::int64_t q, long max_deg)
{
    auto base = base_field_elements(f, q);
    std::vector<FqElem> c;
    for (long i = uniform(rng, 0, max_deg); i >= 0; --i)
        c.push_back(base[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(base.size()) - 1))]);
    return FqPoly(f, c);
}

FqPoly t_power(const FiniteField& f, std::size_t n)
{
    return FqPoly::monomial(FqElem(f, 1), n);
}

} // namespace

TEST(TwistedPoly, SquareOfFPlusFCubed)
{
    for (std::int64_t q : {3, 5}) {
        const FiniteField& f2 = FiniteField::of_order(q * q);
        TwistedPoly u = TwistedPoly::from_ints(f2, q, {0, 1, 0, 1});
        EXPECT_EQ(tw_mul(u, u), TwistedPoly::from_ints(f2, q, {0, 0, 1, 0, 2, 0, 1}));
    }
}

TEST(TwistedPoly, TwistRule)
{
    const FiniteField& f9 = FiniteField::of_order(9);
    FqElem lambda = FqElem::generator(f9);
    TwistedPoly frob = TwistedPoly::monomial(FqElem(f9, 1), 1, 3);
    EXPECT_EQ(tw_mul(frob, TwistedPoly::constant(lambda, 3)), TwistedPoly::monomial(lambda.pow(3), 1, 3));
    EXPECT_EQ(tw_mul(TwistedPoly::constant(lambda, 3), frob), TwistedPoly::monomial(lambda, 1, 3));
    EXPECT_THROW(tw_mul(frob, TwistedPoly::monomial(FqElem(FiniteField::of_order(3), 1), 1, 3)), InputError);
}

TEST(TwistedPoly, AssociativeAndComposition)
{
    std::mt19937_64 rng(111);
    for (auto [order, q] : {std::pair<std::int64_t, std::int64_t>{9, 3}, {16, 4}, {8, 2}}) {
        const FiniteField& f = FiniteField::of_order(order);
        for (int it = 0; it < 30; ++it) {
            TwistedPoly u = random_twisted(rng, f, q, 4), v = random_twisted(rng, f, q, 4),
                        w = random_twisted(rng, f, q, 4);
            ASSERT_EQ(tw_mul(tw_mul(u, v), w), tw_mul(u, tw_mul(v, w)));
            ASSERT_EQ(tw_mul(u, v + w), tw_mul(u, v) + tw_mul(u, w));
            if (!u.is_zero() && !v.is_zero())
                ASSERT_EQ(tw_mul(u, v).degree(), u.degree() + v.degree());
            if (it < 8 && q <= 3) {
                // product as composition of the induced maps on rational functions
                FqRat x = random_rat(rng, f);
                ASSERT_EQ(act(tw_mul(u, v), x), act(u, act(v, x)));
            }
        }
    }
}

TEST(TwistedPoly, ValuationIsFinite)
{
    std::mt19937_64 rng(113);
    const FiniteField& f = FiniteField::of_order(9);
    EXPECT_FALSE(TwistedPoly::zero(f, 3).valuation());
    for (int it = 0; it < 50; ++it) {
        TwistedPoly u = tw_mul(random_twisted(rng, f, 3, 4),
                               TwistedPoly::monomial(FqElem(f, 1), static_cast<std::size_t>(uniform(rng, 0, 5)), 3));
        if (u.is_zero())
            continue;
        auto v = u.valuation();
        ASSERT_TRUE(v);
        TwistedPoly w = u.right_divide_by_F(*v);
        ASSERT_FALSE(w.coeff(0).is_zero());
        ASSERT_EQ(tw_mul(w, TwistedPoly::monomial(FqElem(f, 1), *v, 3)), u);
        ASSERT_THROW(u.right_divide_by_F(*v + 1), InputError);
    }
}

TEST(PhiEval, Examples)
{
    const FiniteField& f3 = FiniteField::of_order(3);
    DrinfeldModule d(TwistedPoly::from_ints(f3, 3, {0, 1, 1}));
    EXPECT_EQ(phi_eval(d, t_power(f3, 1)), d.phi_t());
    EXPECT_EQ(phi_eval(d, t_power(f3, 3)), TwistedPoly::from_ints(f3, 3, {0, 0, 0, 1, 0, 0, 1}));
    EXPECT_EQ(phi_eval(d, t_power(f3, 2)), tw_mul(d.phi_t(), d.phi_t()));
    EXPECT_EQ(phi_eval(d, t_power(f3, 2)), TwistedPoly::from_ints(f3, 3, {0, 0, 1, 2, 1}));
    EXPECT_EQ(phi_eval(d, FqPoly::from_ints(f3, {1, 1})).support().size(), 3u);
    EXPECT_THROW(DrinfeldModule(TwistedPoly::from_ints(f3, 3, {1})), InputError);
}

TEST(PhiEval, RingHomomorphism)
{
    std::mt19937_64 rng(127);
    const FiniteField& f9 = FiniteField::of_order(9);
    for (int it = 0; it < 30; ++it) {
        TwistedPoly phi_t = random_twisted(rng, f9, 3, 3);
        if (phi_t.degree() < 1)
            continue;
        DrinfeldModule d(phi_t);
        FqPoly a = random_a(rng, f9, 3, 5), b = random_a(rng, f9, 3, 5);
        ASSERT_EQ(phi_eval(d, a * b), tw_mul(phi_eval(d, a), phi_eval(d, b)));
        ASSERT_EQ(phi_eval(d, a + b), phi_eval(d, a) + phi_eval(d, b));
    }
    // coefficients outside F_q are rejected as elements of A
    DrinfeldModule d(TwistedPoly::from_ints(f9, 3, {0, 1}));
    EXPECT_THROW(phi_eval(d, FqPoly::constant(FqElem::generator(f9))), InputError);
}

TEST(PhiEval, FrobeniusIsAnEndomorphismOverBaseField)
{
    std::mt19937_64 rng(131);
    const FiniteField& f5 = FiniteField::of_order(5);
    for (int it = 0; it < 20; ++it) {
        TwistedPoly phi_t = random_twisted(rng, f5, 5, 3);
        if (phi_t.degree() < 1)
            continue;
        DrinfeldModule d(phi_t);
        TwistedPoly pa = phi_eval(d, random_a(rng, f5, 5, 4));
        TwistedPoly frob = TwistedPoly::monomial(FqElem(f5, 1), 1, 5);
        ASSERT_EQ(tw_mul(frob, pa), tw_mul(pa, frob));
    }
}

TEST(Act, Examples)
{
    const FiniteField& f2 = FiniteField::of_order(2);
    EXPECT_EQ(act(TwistedPoly::monomial(FqElem(f2, 1), 1, 2), FqRat::t(f2)), FqRat(t_power(f2, 2)));

    for (std::int64_t q : {2, 3}) {
        const FiniteField& f = FiniteField::of_order(q * q);
        FqElem lambda = least_non_base(f, q);
        TwistedPoly phi_t = TwistedPoly::from_ints(f, q, {0, 1, 0, 1});
        FqRat lt = FqRat::t(f).scaled(lambda);
        FqRat expect = (FqRat(t_power(f, static_cast<std::size_t>(q))) +
                        FqRat(t_power(f, static_cast<std::size_t>(q * q * q))))
                           .scaled(lambda.pow(q));
        EXPECT_EQ(act(phi_t, lt), expect);
        EXPECT_EQ(act(phi_t, lt), act(phi_t, FqRat::t(f)).scaled(lambda.pow(q)));
    }
}

TEST(Act, Additive)
{
    std::mt19937_64 rng(137);
    const FiniteField& f = FiniteField::of_order(9);
    for (int it = 0; it < 20; ++it) {
        TwistedPoly p = random_twisted(rng, f, 3, 2);
        FqRat x = random_rat(rng, f), y = random_rat(rng, f);
        ASSERT_EQ(act(p, x + y), act(p, x) + act(p, y));
    }
}

TEST(LucasBinom, Examples)
{
    EXPECT_EQ(lucas_binom(4, 2, 2), 0);
    EXPECT_EQ(lucas_binom(27, 27, 3), 1);
    EXPECT_EQ(lucas_binom(3, 5, 3), 0);
    EXPECT_THROW(lucas_binom(4, 2, 4), InputError);
}

TEST(LucasBinom, PascalTriangle)
{
    for (std::int64_t p : {2, 3, 5}) {
        std::vector<std::vector<std::int64_t>> pascal(201, std::vector<std::int64_t>(201, 0));
        for (std::size_t n = 0; n <= 200; ++n) {
            pascal[n][0] = 1;
            for (std::size_t k = 1; k <= n; ++k)
                pascal[n][k] = (pascal[n - 1][k - 1] + pascal[n - 1][k]) % p;
        }
        for (std::uint64_t n = 0; n <= 200; ++n)
            for (std::uint64_t k = 0; k <= n; ++k)
                ASSERT_EQ(lucas_binom(n, k, p), pascal[n][k]) << n << " " << k << " " << p;
    }
}

TEST(TwoTermSurvey, OddCharacteristic)
{
    const FiniteField& f3 = FiniteField::of_order(3);
    DrinfeldModule d(TwistedPoly::from_ints(f3, 3, {0, 1, 1}));
    auto hits = two_term_survey(d, 9);
    std::vector<FqPoly> found;
    for (const auto& h : hits)
        found.push_back(h.a);
    EXPECT_EQ(found, (std::vector<FqPoly>{t_power(f3, 1), t_power(f3, 3), t_power(f3, 9)}));
    for (const auto& h : hits) {
        const auto n = static_cast<std::size_t>(h.a.degree());
        EXPECT_EQ(h.phi_a, TwistedPoly::monomial(FqElem(f3, 1), n, 3) + TwistedPoly::monomial(FqElem(f3, 1), 2 * n, 3));
    }
}

TEST(TwoTermSurvey, CharacteristicTwo)
{
    const FiniteField& f2 = FiniteField::of_order(2);
    DrinfeldModule d(TwistedPoly::from_ints(f2, 2, {0, 1, 0, 1}));
    auto hits = two_term_survey(d, 8);
    ASSERT_EQ(hits.size(), 4u);
    std::size_t n = 1;
    for (const auto& h : hits) {
        EXPECT_EQ(h.a, t_power(f2, n));
        EXPECT_EQ(h.phi_a, TwistedPoly::monomial(FqElem(f2, 1), n, 2) + TwistedPoly::monomial(FqElem(f2, 1), 3 * n, 2));
        n *= 2;
    }
}

TEST(TwoTermSurvey, PrimePowerExponentsAsMaps)
{
    // phi_{t^(p^n)} = F^(p^n) + F^(2 p^n), as operators for n <= 3 and on functions for n <= 1
    const FiniteField& f3 = FiniteField::of_order(3);
    DrinfeldModule d(TwistedPoly::from_ints(f3, 3, {0, 1, 1}));
    std::mt19937_64 rng(139);
    std::size_t pn = 1;
    for (int n = 0; n <= 3; ++n, pn *= 3) {
        TwistedPoly lhs = phi_eval(d, t_power(f3, pn));
        EXPECT_EQ(lhs, TwistedPoly::monomial(FqElem(f3, 1), pn, 3) + TwistedPoly::monomial(FqElem(f3, 1), 2 * pn, 3));
        if (n <= 1)
            for (int it = 0; it < 3; ++it) {
                FqRat x = random_rat(rng, f3);
                EXPECT_EQ(act(lhs, x), frobpow_rat(x, 3, static_cast<long>(pn)) + frobpow_rat(x, 3, 2 * static_cast<long>(pn)));
            }
    }
}

TEST(SharpScenario, ConclusionsHold)
{
    SharpReport rep = sharp_scenario(3, 6);
    EXPECT_TRUE(rep.on_curve_matches);
    EXPECT_TRUE(rep.phi_t2_invariant);
    EXPECT_FALSE(rep.phi_t_invariant);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.operator_dim, 6u);
    EXPECT_EQ(rep.enumerated, 729u);
    EXPECT_EQ(rep.on_curve.size(), 81u);
    EXPECT_EQ(rep.expected_on_curve, 81u);
    const FiniteField& f9 = FiniteField::of_order(9);
    EXPECT_EQ(rep.phi_t2, TwistedPoly::from_ints(f9, 3, {0, 0, 1, 0, 2, 0, 1}));
    EXPECT_FALSE(rep.lambda.in_subfield(1));
}

TEST(SharpScenario, AdditiveFormAgreesWithRationalFunctions)
{
    // the twisted-polynomial form of points against dense evaluation in F_9(t)
    const FiniteField& f9 = FiniteField::of_order(9);
    FqElem lambda = least_non_base(f9, 3);
    AdditivePoint gen{TwistedPoly::one(f9, 3), TwistedPoly::constant(lambda, 3)};
    std::vector<FqRat> dense{FqRat::t(f9), FqRat::t(f9).scaled(lambda)};
    std::mt19937_64 rng(149);
    for (int it = 0; it < 20; ++it) {
        std::vector<FqElem> c;
        for (int i = 0; i <= 4; ++i)
            c.push_back(FqElem(f9, uniform(rng, 0, 2)));
        TwistedPoly u(f9, 3, c);
        AdditivePoint p = gen.under(u);
        auto fn = act(u, dense);
        ASSERT_EQ(p.as_functions(), fn);
        ASSERT_EQ(p.on_line(lambda), fn[1] == fn[0].scaled(lambda));
    }
    SharpReport rep = sharp_scenario(3, 4);
    for (const auto& p : rep.on_curve) {
        auto fn = p.as_functions();
        ASSERT_EQ(fn[1], fn[0].scaled(lambda));
    }
    EXPECT_EQ(additive_str(TwistedPoly::from_ints(f9, 3, {0, 1, 0, 2})), "t^3 + " + FqElem(f9, 2).str() + "*t^27");
    const FiniteField& f3 = FiniteField::of_order(3);
    EXPECT_EQ(additive_str(TwistedPoly::from_ints(f3, 3, {1, 0, 2})), "t + 2*t^9");
}

TEST(SharpScenario, GeneratorAndFrobeniusImage)
{
    const FiniteField& f9 = FiniteField::of_order(9);
    FqElem lambda = least_non_base(f9, 3);
    std::vector<FqRat> gen{FqRat::t(f9), FqRat::t(f9).scaled(lambda)};
    auto one = act(TwistedPoly::one(f9, 3), gen);
    EXPECT_EQ(one[1], one[0].scaled(lambda));
    auto frob = act(TwistedPoly::monomial(FqElem(f9, 1), 1, 3), gen);
    EXPECT_EQ(frob[1], frob[0].scaled(lambda.pow(3)));
    EXPECT_NE(frob[1], frob[0].scaled(lambda));
}
