#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"

using namespace planediag;
using namespace testing_support;

namespace {

using RMap = PolyAutomorphism<UniPoly<Fp>>;
using KMap = PolyAutomorphism<RatFunc<Fp>>;

int max_degree(const KMap& phi) { return std::max(phi.f1().total_degree(), phi.f2().total_degree()); }

bool has_r_coefficients(const KMap& phi) { return to_poly(phi).has_value(); }

}  // namespace

TEST(Compose, SubstitutesSecondIntoFirst) {
    auto delta = rmap("x1", "2*x2", 7);
    auto e = rmap("x1", "x2 + t*x1^3", 7);
    // result_i = delta applied to e_i, i.e. e_i(delta_1, delta_2)
    EXPECT_EQ(compose(delta, e), rmap("x1", "2*x2 + t*x1^3", 7));
    EXPECT_EQ(compose(e, delta), rmap("x1", "2*x2 + 2*t*x1^3", 7));
}

TEST(Compose, IdentityAndInvolution) {
    auto phi = rmap("x1 + t*x2^2", "3*x2 + x1", 7);
    auto id = RMap::identity(PolyRing<Fp>(gf(7)));
    EXPECT_EQ(compose(phi, id), phi);
    EXPECT_EQ(compose(id, phi), phi);
    auto sw = rmap("x2", "x1", 7);
    EXPECT_TRUE(compose(sw, sw).is_identity());
}

TEST(Compose, DomainMismatch) {
    EXPECT_THROW(compose(kmap("x1", "x2", 7), kmap("x1", "x2", 13)), MathError);
}

TEST(Invert, Examples) {
    EXPECT_EQ(invert(kmap("x1", "x2 + x1^2", 7)), kmap("x1", "x2 - x1^2", 7));
    EXPECT_EQ(invert(kmap("2*x1", "3*x2", 7)), kmap("4*x1", "5*x2", 7));
    EXPECT_EQ(invert(kmap("x1 + x2", "x2", 7)), kmap("x1 - x2", "x2", 7));
    EXPECT_THROW(invert(kmap("x1*x2", "x2", 7)), MathError);
    EXPECT_THROW(invert(kmap("x1^2", "x2", 7)), MathError);
}

TEST(VdkDecompose, SingleElementary) {
    auto w = vdk_decompose(kmap("x1 + x2^3", "x2", 7));
    EXPECT_TRUE(w.affine.is_identity());
    ASSERT_EQ(w.elementaries.size(), 1u);
    EXPECT_EQ(w.elementaries[0].index, 1);
    EXPECT_EQ(w.elementaries[0].f, kp("x2^3", 7));
}

TEST(VdkDecompose, TwoFactorWordRecomposes) {
    auto e1 = kmap("x1", "x2 + x1^2", 7), e2 = kmap("x1 + x2^3", "x2", 7);
    for (const auto& phi : {compose(e1, e2), compose(e2, e1)}) {
        auto w = vdk_decompose(phi);
        EXPECT_EQ(w.elementaries.size(), 2u);
        EXPECT_EQ(w.compose_all(), phi);
    }
}

TEST(VdkDecompose, RejectsSingularMaps) {
    try {
        vdk_decompose(kmap("x1*x2", "x2", 7));
        FAIL() << "accepted a singular map";
    } catch (const MathError& e) {
        EXPECT_NE(std::string(e.what()).find("not an automorphism"), std::string::npos);
    }
    EXPECT_FALSE(is_automorphism(kmap("x1 + x2^2", "x2 + x1^2", 7)));
    EXPECT_FALSE(is_automorphism(kmap("x1", "x1", 7)));
    EXPECT_TRUE(is_automorphism(kmap("x2", "x1", 7)));
}

TEST(VdkDecompose, WorksOverRationalFunctions) {
    auto phi = Kmap("x1 + x2^2/t", "x2", 7);
    auto w = vdk_decompose(phi);
    EXPECT_EQ(w.compose_all(), phi);
    EXPECT_EQ(invert(phi), Kmap("x1 - x2^2/t", "x2", 7));
}

TEST(Degree, Examples) {
    EXPECT_EQ(degree(kmap("x1", "x2", 7)), 2);
    EXPECT_EQ(degree(kmap("x1", "x2 + x1^3", 7)), 4);
    EXPECT_EQ(degree(rmap("x1 + x2^2", "x2 + t^5*x1", 7)), 3);
}

TEST(Degree, MatchesTermScan) {
    std::mt19937_64 rng(12);
    auto draw = [&] { return RandomElement<Fp>::draw(gf(13), rng); };
    for (int trial = 0; trial < 30; ++trial) {
        PolyAutomorphism<Fp> phi(random_bipoly<Fp>(gf(13), 5, draw, rng), random_bipoly<Fp>(gf(13), 5, draw, rng));
        int expect = 0;
        for (const auto* f : {&phi.f1(), &phi.f2()}) {
            int d = f->is_zero() ? -1 : 0;
            for (const auto& [m, c] : f->terms()) d = std::max(d, static_cast<int>(m.e1 + m.e2));
            expect += d;
        }
        EXPECT_EQ(degree(phi), expect);
    }
}

TEST(Keller, Examples) {
    EXPECT_EQ(keller_descend(Kmap("x1", "x2 + t*x1^3", 7)), rmap("x1", "x2 + t*x1^3", 7));
    EXPECT_EQ(keller_descend(Kmap("x1 + t^2*x2^2", "x2", 7)), rmap("x1 + t^2*x2^2", "x2", 7));
    try {
        keller_descend(Kmap("x1", "t*x2", 7));
        FAIL() << "accepted det J = t";
    } catch (const MathError& e) {
        EXPECT_NE(std::string(e.what()).find("jacobian not a unit"), std::string::npos);
    }
    EXPECT_THROW(keller_descend(Kmap("x1", "x2/t", 7)), MathError);
}

TEST(Tame, RecompositionAndInverseOverPrimeFields) {
    std::mt19937_64 rng(17);
    for (std::uint64_t p : {2u, 7u, 31u}) {
        auto draw = [&] { return RandomElement<Fp>::draw(gf(p), rng); };
        for (int trial = 0; trial < 40; ++trial) {
            auto phi = random_field_tame<Fp>(gf(p), 6, 3, draw, rng);
            auto w = vdk_decompose(phi);
            EXPECT_EQ(w.compose_all(), phi);
            auto inv = invert(phi);
            EXPECT_TRUE(compose(phi, inv).is_identity());
            EXPECT_TRUE(compose(inv, phi).is_identity());
            EXPECT_TRUE(phi.jacobian().is_constant());
        }
    }
}

TEST(Tame, RecompositionOverRationalFunctions) {
    std::mt19937_64 rng(18);
    const std::uint64_t p = 7;
    PolyRing<Fp> R(gf(p));
    FracField<Fp> K(gf(p));
    auto draw = [&] {
        auto num = random_r_element(R, 3, rng);
        auto den = random_r_element(R, 2, rng, true);
        return RatFunc<Fp>(num, den);
    };
    for (int trial = 0; trial < 25; ++trial) {
        auto phi = random_field_tame<RatFunc<Fp>>(K, 4, 3, draw, rng, 6);
        auto w = vdk_decompose(phi);
        EXPECT_EQ(w.compose_all(), phi);
        auto inv = invert(phi);
        EXPECT_TRUE(compose(phi, inv).is_identity());
        EXPECT_TRUE(compose(inv, phi).is_identity());
    }
}

TEST(Tame, InverseMatchesUndeterminedCoefficients) {
    std::mt19937_64 rng(19);
    auto draw = [&] { return RandomElement<Fp>::draw(gf(13), rng); };
    for (int trial = 0; trial < 20; ++trial) {
        auto phi = random_field_tame<Fp>(gf(13), 3, 3, draw, rng);
        int bound = std::max(phi.f1().total_degree(), phi.f2().total_degree());
        auto ref = oracle::inverse_by_coefficients(phi, bound);
        ASSERT_TRUE(ref.has_value());
        EXPECT_EQ(invert(phi), *ref);
    }
}

TEST(Keller, AgreesWithIndependentInverse) {
    std::mt19937_64 rng(20);
    const std::uint64_t p = 7;
    PolyRing<Fp> R(gf(p));
    TameWordBounds b{3, 4, 2};
    auto t = R.t();
    auto dt = RMap::diagonal(t, R.one());
    for (int trial = 0; trial < 12; ++trial) {
        auto w = random_tame(R, b, rng);
        EXPECT_EQ(keller_descend(to_frac(w.map)), w.map);
        auto ref = oracle::inverse_by_coefficients(to_frac(w.map), max_degree(to_frac(w.map)));
        ASSERT_TRUE(ref.has_value());
        EXPECT_TRUE(has_r_coefficients(*ref));
        EXPECT_EQ(*to_poly(*ref), w.inverse);

        for (const auto& bad : {compose(w.map, dt), compose(dt, w.map)}) {
            EXPECT_THROW(keller_descend(to_frac(bad)), MathError);
            auto r = oracle::inverse_by_coefficients(to_frac(bad), max_degree(to_frac(bad)));
            ASSERT_TRUE(r.has_value());
            EXPECT_FALSE(has_r_coefficients(*r));
        }
    }
}

TEST(Keller, ClearedDenominatorsAgreeWithIndependentInverse) {
    std::mt19937_64 rng(22);
    const std::uint64_t p = 7;
    PolyRing<Fp> R(gf(p));
    FracField<Fp> K(gf(p));
    auto draw = [&] { return RatFunc<Fp>(random_r_element(R, 2, rng), random_r_element(R, 1, rng, true)); };
    int accepted = 0, rejected = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto phi = trial % 2 ? to_frac(random_tame(R, TameWordBounds{3, 4, 2}, rng).map)
                             : random_field_tame<RatFunc<Fp>>(K, 2, 2, draw, rng);
        // scale each image by the lcm of its denominators
        auto clear = [&](const KMap::Poly& f) {
            auto d = R.one();
            for (const auto& [m, c] : f.terms()) d = (d * c.den()).divmod(gcd(d, c.den())).first;
            return f * RatFunc<Fp>(d);
        };
        KMap psi(clear(phi.f1()), clear(phi.f2()));
        auto ref = oracle::inverse_by_coefficients(psi, max_degree(psi));
        bool descends = ref && has_r_coefficients(*ref);
        try {
            keller_descend(psi);
            EXPECT_TRUE(descends) << psi.to_string();
            ++accepted;
        } catch (const MathError&) {
            EXPECT_FALSE(descends) << psi.to_string();
            ++rejected;
        }
    }
    EXPECT_GT(accepted, 0);
    EXPECT_GT(rejected, 0);
}
