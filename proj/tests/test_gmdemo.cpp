#include "support.hpp"

#include <frobset/gmdemo.hpp>

#include <gtest/gtest.h>

using namespace frobset;
using testsupport::uniform;

namespace {

FqRat poly(const FiniteField& f, std::vector<std::int64_t> c) { return FqRat(FqPoly::from_ints(f, c)); }

// gamma(e) by repeated multiplication and division
GmPoint slow_gamma(const TorusSubgroup& g, const ExpTuple& e)
{
    GmPoint out(g.s(), FqRat::one(g.field()));
    for (std::size_t i = 0; i < g.r(); ++i)
        for (std::size_t j = 0; j < g.s(); ++j)
            for (std::int64_t k = 0; k < std::abs(e[i]); ++k)
                out[j] = e[i] > 0 ? out[j] * g.generators()[i][j] : out[j] / g.generators()[i][j];
    return out;
}

std::vector<ExpTuple> box_oracle(const TorusSubgroup& g, const std::vector<FqRat>& a, const FqRat& b, std::int64_t box)
{
    std::vector<ExpTuple> out;
    ExpTuple e(g.r(), -box);
    for (;;) {
        GmPoint x = slow_gamma(g, e);
        FqRat v = FqRat::zero(g.field());
        for (std::size_t l = 0; l < a.size(); ++l)
            v = v + a[l] * x[l];
        if (v == b)
            out.push_back(e);
        std::size_t i = g.r();
        while (i > 0 && ++e[i - 1] > box)
            e[--i] = -box;
        if (i == 0)
            break;
    }
    return out;
}

FqRat random_unit(std::mt19937_64& rng, const FiniteField& f)
{
    for (;;) {
        std::vector<std::int64_t> n, d;
        for (long i = uniform(rng, 0, 2); i >= 0; --i)
            n.push_back(uniform(rng, 0, f.order() - 1));
        for (long i = uniform(rng, 0, 1); i >= 0; --i)
            d.push_back(uniform(rng, 0, f.order() - 1));
        FqPoly num = FqPoly::from_ints(f, n), den = FqPoly::from_ints(f, d);
        if (!num.is_zero() && !den.is_zero())
            return FqRat(num, den);
    }
}

std::vector<ExpTuple> all_points(const Clustering& c)
{
    std::vector<ExpTuple> out;
    for (const auto& o : c.orbits)
        out.insert(out.end(), o.points.begin(), o.points.end());
    for (const auto& k : c.cosets)
        out.insert(out.end(), k.points.begin(), k.points.end());
    out.insert(out.end(), c.unexplained.begin(), c.unexplained.end());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(GammaElement, Examples)
{
    const FiniteField& f2 = FiniteField::of_order(2);
    TorusSubgroup g(f2, {{FqRat::t(f2), poly(f2, {1, 1})}});
    EXPECT_EQ(gamma_element(g, {0}), (GmPoint{FqRat::one(f2), FqRat::one(f2)}));
    EXPECT_EQ(gamma_element(g, {2}), (GmPoint{poly(f2, {0, 0, 1}), poly(f2, {1, 0, 1})}));
    EXPECT_THROW(gamma_element(g, {1, 1}), InputError);
    EXPECT_THROW(TorusSubgroup(f2, {{FqRat::zero(f2)}}), InputError);
}

TEST(GammaElement, HomomorphismAndFrobenius)
{
    std::mt19937_64 rng(151);
    for (std::int64_t q : {2, 3, 4}) {
        const FiniteField& f = FiniteField::of_order(q);
        for (int it = 0; it < 15; ++it) {
            const std::size_t r = static_cast<std::size_t>(uniform(rng, 1, 2)), s = static_cast<std::size_t>(uniform(rng, 1, 2));
            std::vector<GmPoint> gens(r);
            for (auto& gen : gens)
                for (std::size_t j = 0; j < s; ++j)
                    gen.push_back(random_unit(rng, f));
            TorusSubgroup g(f, gens);
            ExpTuple e1(r), e2(r), sum(r), scaled(r);
            for (std::size_t i = 0; i < r; ++i) {
                e1[i] = uniform(rng, -4, 4);
                e2[i] = uniform(rng, -4, 4);
                sum[i] = e1[i] + e2[i];
                scaled[i] = q * e1[i];
            }
            GmPoint a = gamma_element(g, e1), b = gamma_element(g, e2), c = gamma_element(g, sum);
            ASSERT_EQ(a, slow_gamma(g, e1));
            for (std::size_t j = 0; j < s; ++j) {
                ASSERT_EQ(c[j], a[j] * b[j]);
                // the q-th power stays in Gamma, at exponent q e
                ASSERT_EQ(gamma_element(g, scaled)[j], frobpow_rat(a[j], q, 1));
            }
        }
    }
}

TEST(Independence, Examples)
{
    const FiniteField& f2 = FiniteField::of_order(2);
    const FiniteField& f3 = FiniteField::of_order(3);
    EXPECT_TRUE(TorusSubgroup(f2, {{FqRat::t(f2), poly(f2, {1, 1})}}).certify_independence().independent);
    EXPECT_TRUE(TorusSubgroup(f2, {{FqRat::t(f2)}, {poly(f2, {1, 1})}}).certify_independence().independent);

    auto dep = TorusSubgroup(f2, {{poly(f2, {0, 0, 1}), FqRat::one(f2)}, {FqRat::t(f2), FqRat::one(f2)}})
                   .certify_independence();
    ASSERT_FALSE(dep.independent);
    ASSERT_TRUE(dep.relation);

    auto torsion = TorusSubgroup(f3, {{poly(f3, {2})}}).certify_independence();
    EXPECT_FALSE(torsion.independent);

    // (t^2 + t) = t (t + 1): the three generators are dependent
    auto three = TorusSubgroup(f3, {{FqRat::t(f3)}, {poly(f3, {1, 1})}, {poly(f3, {0, 1, 1})}}).certify_independence();
    EXPECT_FALSE(three.independent);
    EXPECT_EQ(three.coprime_base.size(), 2u);
}

TEST(Independence, CertificateAgainstBoxSearch)
{
    std::mt19937_64 rng(157);
    const FiniteField& f3 = FiniteField::of_order(3);
    for (int it = 0; it < 25; ++it) {
        const std::size_t r = static_cast<std::size_t>(uniform(rng, 1, 3));
        std::vector<GmPoint> gens(r);
        for (auto& gen : gens)
            gen.push_back(random_unit(rng, f3));
        TorusSubgroup g(f3, gens);
        auto cert = g.certify_independence();
        if (!cert.independent) {
            ASSERT_TRUE(cert.relation);
            ExpTuple e;
            for (const auto& x : *cert.relation)
                e.push_back(static_cast<std::int64_t>(x));
            ASSERT_TRUE(gamma_element(g, e)[0].is_constant());
            ASSERT_TRUE(std::any_of(e.begin(), e.end(), [](std::int64_t x) { return x != 0; }));
        } else {
            // no nonzero e in a small box gives a constant
            ExpTuple e(r, -3);
            for (;;) {
                if (std::any_of(e.begin(), e.end(), [](std::int64_t x) { return x != 0; }))
                    ASSERT_FALSE(gamma_element(g, e)[0].is_constant());
                std::size_t i = r;
                while (i > 0 && ++e[i - 1] > 3)
                    e[--i] = -3;
                if (i == 0)
                    break;
            }
        }
    }
}

TEST(Hypersurface, Examples)
{
    const FiniteField& f2 = FiniteField::of_order(2);
    const FiniteField& f3 = FiniteField::of_order(3);
    {
        TorusSubgroup g(f3, {{FqRat::t(f3)}});
        auto res = intersect_hypersurface(g, Relation::linear({FqRat::one(f3)}, FqRat::one(f3)), 10);
        EXPECT_EQ(res.solutions, (std::vector<ExpTuple>{{0}}));
    }
    {
        TorusSubgroup g(f2, {{FqRat::t(f2), poly(f2, {1, 1})}});
        auto res = intersect_hypersurface(g, Relation::linear({FqRat::one(f2), FqRat::one(f2)}, FqRat::one(f2)), 64);
        std::vector<ExpTuple> expect;
        for (std::int64_t n = 0; n <= 6; ++n)
            expect.push_back({std::int64_t(1) << n});
        EXPECT_EQ(res.solutions, expect);
        EXPECT_TRUE(res.closure.applicable);
        EXPECT_EQ(res.closure.checked, 6u);
        EXPECT_TRUE(res.closure.holds);
        EXPECT_EQ(res.solutions, box_oracle(g, {FqRat::one(f2), FqRat::one(f2)}, FqRat::one(f2), 64));
    }
    {
        // x y = 1 on <(t, 1/t)>: the whole group
        TorusSubgroup g(f3, {{FqRat::t(f3), FqRat::t(f3).inverse()}});
        Relation rel{{RelationTerm{FqRat::one(f3), {1, 1}}}, FqRat::one(f3)};
        auto res = intersect_hypersurface(g, rel, 12);
        EXPECT_EQ(res.solutions.size(), 25u);
        Clustering c = cluster_fsets(res.solutions, 3, 12);
        ASSERT_EQ(c.cosets.size(), 1u);
        EXPECT_EQ(c.cosets[0].base, (ExpTuple{0}));
        EXPECT_EQ(c.cosets[0].lattice, (IntMatrix{{1}}));
        EXPECT_TRUE(c.orbits.empty());
        EXPECT_TRUE(c.unexplained.empty());
    }
    EXPECT_THROW(intersect_hypersurface(TorusSubgroup(f3, {{FqRat::t(f3)}}),
                                        Relation::linear({FqRat::one(f3)}, FqRat::one(f3)), -1),
                 InputError);
}

TEST(Hypersurface, AgreesWithExactBoxOracle)
{
    std::mt19937_64 rng(163);
    int nonempty = 0;
    for (std::int64_t q : {2, 3}) {
        const FiniteField& f = FiniteField::of_order(q);
        for (int it = 0; it < 20; ++it) {
            const std::size_t r = static_cast<std::size_t>(uniform(rng, 1, 2)), s = static_cast<std::size_t>(uniform(rng, 1, 2));
            std::vector<GmPoint> gens(r);
            for (auto& gen : gens)
                for (std::size_t j = 0; j < s; ++j)
                    gen.push_back(random_unit(rng, f));
            TorusSubgroup g(f, gens);
            std::vector<FqRat> a;
            for (std::size_t j = 0; j < s; ++j)
                a.push_back(FqRat::constant(FqElem(f, uniform(rng, 1, q - 1))));
            FqRat b = FqRat::constant(FqElem(f, uniform(rng, 0, q - 1)));
            if (it % 2) {
                // plant a solution
                ExpTuple e;
                for (std::size_t i = 0; i < r; ++i)
                    e.push_back(uniform(rng, -3, 3));
                GmPoint x = gamma_element(g, e);
                b = FqRat::zero(f);
                for (std::size_t j = 0; j < s; ++j)
                    b = b + a[j] * x[j];
            }
            const std::int64_t box = r == 1 ? 12 : 5;
            auto res = intersect_hypersurface(g, Relation::linear(a, b), box);
            ASSERT_EQ(res.solutions, box_oracle(g, a, b, box));
            nonempty += !res.solutions.empty();
            if (res.closure.applicable)
                ASSERT_TRUE(res.closure.holds);
            ASSERT_EQ(all_points(cluster_fsets(res.solutions, q, box)), res.solutions);
        }
    }
    EXPECT_GE(nonempty, 10);
}

TEST(Hypersurface, CharacteristicClosureOnUnitEquations)
{
    // x + y = 1 on <(u, 1 - u)> always has the orbit of e = 1
    std::mt19937_64 rng(167);
    for (std::int64_t q : {2, 3, 4, 5}) {
        const FiniteField& f = FiniteField::of_order(q);
        for (int it = 0; it < 4; ++it) {
            FqRat u = random_unit(rng, f);
            FqRat w = FqRat::one(f) - u;
            if (w.is_zero() || u.is_constant())
                continue;
            TorusSubgroup g(f, {{u, w}});
            auto res = intersect_hypersurface(g, Relation::linear({FqRat::one(f), FqRat::one(f)}, FqRat::one(f)), 30);
            ASSERT_TRUE(res.closure.applicable);
            ASSERT_TRUE(res.closure.holds);
            std::set<ExpTuple> sol(res.solutions.begin(), res.solutions.end());
            for (std::int64_t e = 1; e <= 30; e *= q)
                ASSERT_TRUE(sol.count({e}));
            Clustering c = cluster_fsets(res.solutions, q, 30);
            ASSERT_EQ(all_points(c), res.solutions);
            ASSERT_FALSE(c.orbits.empty());
        }
    }
}

TEST(ClusterFsets, Examples)
{
    EXPECT_TRUE(cluster_fsets({}, 2, 8).orbits.empty());

    std::vector<ExpTuple> orbit;
    for (std::int64_t n = 0; n <= 6; ++n)
        orbit.push_back({std::int64_t(1) << n, std::int64_t(1) << n});
    Clustering c = cluster_fsets(orbit, 2, 64);
    ASSERT_EQ(c.orbits.size(), 1u);
    EXPECT_TRUE(c.cosets.empty());
    EXPECT_TRUE(c.unexplained.empty());
    const FgModule emod = exponent_module(2, 2);
    EXPECT_EQ(c.orbits[0].fset, GrouplessFSet(emod.zero(), {FSetTerm{emod.element({1, 1}), 1}}));
    EXPECT_EQ(c.orbits[0].points, orbit);

    std::vector<ExpTuple> line;
    for (std::int64_t n = -8; n <= 8; ++n)
        line.push_back({n, 3});
    c = cluster_fsets(line, 2, 8);
    ASSERT_EQ(c.cosets.size(), 1u);
    EXPECT_TRUE(c.orbits.empty());
    EXPECT_EQ(c.cosets[0].base, (ExpTuple{0, 3}));
    EXPECT_EQ(c.cosets[0].points, line);

    // zero, an isolated point whose q-multiple leaves the box, and a broken chain
    c = cluster_fsets({{0}, {5}, {-2}}, 3, 8);
    ASSERT_EQ(c.orbits.size(), 1u);
    EXPECT_EQ(c.orbits[0].fset.k(), 0u);
    EXPECT_EQ(c.unexplained, (std::vector<ExpTuple>{{-2}, {5}}));

    EXPECT_THROW(cluster_fsets({{9}}, 2, 8), InputError);
}

TEST(ClusterFsets, AccountsForEveryPointOnce)
{
    std::mt19937_64 rng(173);
    for (int it = 0; it < 40; ++it) {
        const std::int64_t q = uniform(rng, 2, 3), box = 9;
        const std::size_t r = static_cast<std::size_t>(uniform(rng, 1, 2));
        std::set<ExpTuple> sol;
        // a few planted orbits, lines and noise
        for (long k = uniform(rng, 0, 2); k > 0; --k) {
            ExpTuple e;
            for (std::size_t i = 0; i < r; ++i)
                e.push_back(uniform(rng, -2, 2));
            for (ExpTuple p = e; detail::in_box(p, box) && std::any_of(p.begin(), p.end(), [](auto x) { return x; });
                 p = detail::shifted(ExpTuple(r, 0), p, q))
                sol.insert(p);
        }
        for (long k = uniform(rng, 0, 1); k > 0; --k) {
            ExpTuple e, h;
            for (std::size_t i = 0; i < r; ++i) {
                e.push_back(uniform(rng, -box, box));
                h.push_back(uniform(rng, 0, 1));
            }
            if (std::all_of(h.begin(), h.end(), [](auto x) { return x == 0; }))
                h[0] = 1;
            for (const auto& p : detail::line_in_box(e, h, box))
                sol.insert(p);
        }
        for (long k = uniform(rng, 0, 4); k > 0; --k) {
            ExpTuple e;
            for (std::size_t i = 0; i < r; ++i)
                e.push_back(uniform(rng, -box, box));
            sol.insert(e);
        }
        std::vector<ExpTuple> input(sol.begin(), sol.end());
        Clustering c = cluster_fsets(input, q, box);
        ASSERT_EQ(all_points(c), input);
        // every reported part is what it claims to be
        for (const auto& o : c.orbits) {
            if (o.fset.k() == 0)
                continue;
            for (std::size_t n = 0; n < o.points.size(); ++n) {
                ExpTuple expect;
                std::int64_t scale = 1;
                for (std::size_t i = 0; i < n; ++i)
                    scale *= q;
                for (const auto& x : o.fset.terms[0].a.free)
                    expect.push_back(scale * static_cast<std::int64_t>(x));
                ASSERT_EQ(o.points[n], expect);
            }
        }
        for (const auto& k : c.cosets)
            ASSERT_EQ(k.points, detail::coset_in_box(k.base, k.lattice, box));
    }
}
