#include <gtest/gtest.h>

#include "oracles.hpp"
#include "planediag/certificate.hpp"
#include "support.hpp"

using namespace planediag;
using namespace testing_support;

namespace {

using RMap = PolyAutomorphism<UniPoly<Fp>>;
using KMap = PolyAutomorphism<RatFunc<Fp>>;
using RGroup = FiniteAbelianSubgroup<UniPoly<Fp>>;
using KGroup = FiniteAbelianSubgroup<Fp>;

Fp el(std::uint64_t p, long long v) { return gf(p).from_int(v); }

ActionContext<Fp> monomial_context(std::uint64_t p, std::vector<std::vector<long long>> gens) {
    std::vector<std::vector<Fp>> g;
    for (const auto& row : gens) g.push_back({el(p, row[0]), el(p, row[1])});
    return ActionContext<Fp>(FieldSpec::prime_field(p), CharacterGroup<Fp>(2, g));
}

KappaPoly<Fp> kappa_poly(const std::string& s, const ExtField<Fp>& kappa, std::uint64_t p) {
    return residue_map(rp(s, p), kappa);
}

// f equals c * g for a nonzero constant c.
template <class C>
bool scalar_multiple(const BiPoly<C>& f, const BiPoly<C>& g) {
    if (f.is_zero() || g.is_zero()) return f.is_zero() && g.is_zero();
    auto c = f.leading_coefficient() / g.leading_coefficient();
    return f == g * c;
}
template <class F>
bool scalar_multiple(const RPoly<F>& f, const RPoly<F>& g) {
    if (f.is_zero() || g.is_zero()) return f.is_zero() && g.is_zero();
    auto [c, r] = f.leading_coefficient().divmod(g.leading_coefficient());
    return r.is_zero() && c.degree() == 0 && f == g * c;
}

bool holds_at_points(const Certificate<UniPoly<Fp>>& cert, std::uint64_t p, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < cert.generators.size(); ++l) {
        auto d = cert.diagonal(l);
        if (!oracle::conjugation_holds_at_points(cert.generators[l], cert.conjugator, d.a1.value(), d.a2.value(), p, rng))
            return false;
    }
    return true;
}

template <class Fn>
void expect_error(Fn&& fn, const std::string& needle) {
    try {
        fn();
        ADD_FAILURE() << "expected an error mentioning " << needle;
    } catch (const std::exception& e) {
        EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
}

}  // namespace

TEST(DiagonalizeOverField, CubicTriangular) {
    const std::uint64_t p = 7;
    KGroup g(FieldSpec::prime_field(p), {kmap("x1", "2*x2 + x1^3", p)}, {3}, {el(p, 2)});
    auto cert = diagonalize_over_field(g);
    EXPECT_TRUE(verify_certificate(cert).ok);
    EXPECT_EQ(cert.diagonal(0), DiagonalAuto<Fp>(el(p, 1), el(p, 2)));
    EXPECT_TRUE(scalar_multiple(cert.conjugator.f1(), kp("x1", p)));
    EXPECT_TRUE(scalar_multiple(cert.conjugator.f2(), kp("x2 + x1^3", p)));
}

TEST(DiagonalizeOverField, DiagonalGroupNeedsNoConjugation) {
    const std::uint64_t p = 7;
    KGroup g(FieldSpec::prime_field(p), {kmap("2*x1", "4*x2", p)}, {3}, {el(p, 2)});
    auto cert = diagonalize_over_field(g);
    EXPECT_TRUE(cert.conjugator.is_identity());
    EXPECT_EQ(cert.diagonal(0), DiagonalAuto<Fp>(el(p, 2), el(p, 4)));
}

TEST(DiagonalizeOverField, UnipotentOverRationalsFails) {
    expect_error(
        [] {
            FiniteAbelianSubgroup<Rational> g(FieldSpec::rationals(), {map_of(qp("x1"), qp("x2 + x1"))}, {2},
                                              {Rational(-1, 1)});
            diagonalize_over_field(g);
        },
        "not diagonalizable");
}

TEST(DiagonalizeOverField, RandomConjugatesVerify) {
    std::mt19937_64 rng(41);
    for (std::uint64_t p : {7u, 13u, 31u}) {
        auto fs = FieldSpec::prime_field(p);
        auto draw = [&] { return RandomElement<Fp>::draw(gf(p), rng); };
        for (int trial = 0; trial < 10; ++trial) {
            auto w = random_field_tame<Fp>(gf(p), 4, 3, draw, rng);
            auto winv = invert(w);
            Fp z3 = power(Fp(fs.generator(), p), (p - 1) / 3), z2 = el(p, -1);
            std::vector<PolyAutomorphism<Fp>> gens{compose(compose(w, PolyAutomorphism<Fp>::diagonal(z3, power(z3, 2u))), winv),
                                                  compose(compose(w, PolyAutomorphism<Fp>::diagonal(z2, gf(p).one())), winv)};
            KGroup g(fs, gens, {3, 2}, {z3, z2});
            auto cert = diagonalize_over_field(g);
            EXPECT_TRUE(verify_certificate(cert).ok);
            for (std::size_t l = 0; l < 2; ++l) {
                auto lhs = compose(gens[l], cert.conjugator);
                auto rhs = compose(cert.conjugator, cert.diagonal_automorphism(l));
                // phi(psi_i) = a_i psi_i, image by image
                EXPECT_EQ(lhs, rhs);
            }
        }
    }
}

TEST(Centralizer, SingleHomogeneousElementary) {
    const std::uint64_t p = 7;
    auto ctx = monomial_context(p, {{2, 1}});  // class(x2) = 3 class(x1)
    auto phi = kmap("x1", "x2 + 5*x1^3", p);
    auto w = centralizer_decompose(phi, ctx);
    ASSERT_EQ(w.factors.size(), 1u);
    EXPECT_EQ(w.factors[0].automorphism(), phi);
    EXPECT_EQ(w.tau, DiagonalAuto<Fp>(gf(p).one(), gf(p).one()));
}

TEST(Centralizer, DiagonalHasEmptyWord) {
    const std::uint64_t p = 7;
    auto ctx = monomial_context(p, {{2, 1}});
    auto w = centralizer_decompose(kmap("3*x1", "5*x2", p), ctx);
    EXPECT_TRUE(w.factors.empty());
    EXPECT_EQ(w.tau, DiagonalAuto<Fp>(el(p, 3), el(p, 5)));
}

TEST(Centralizer, ElementaryThenDiagonal) {
    const std::uint64_t p = 7;
    auto ctx = monomial_context(p, {{4, 2}});  // class(x1) = 2 class(x2)
    auto phi = compose(kmap("x1 + x2^2", "x2", p), kmap("2*x1", "3*x2", p));
    auto w = centralizer_decompose(phi, ctx);
    EXPECT_EQ(w.compose_all(gf(p)), phi);
    EXPECT_EQ(w.factors.size() + 1, 2u);
    for (const auto& s : w.factors) {
        auto cls = is_homogeneous(s.f, ctx);
        ASSERT_TRUE(cls.has_value());
        EXPECT_EQ(*cls, ctx.class_of(s.index == 1 ? Monomial{1, 0} : Monomial{0, 1}));
    }
    EXPECT_THROW(centralizer_decompose(kmap("x1", "x2 + x1", p), ctx), MathError);
}

TEST(LiftElementary, Examples) {
    const std::uint64_t p = 7;
    auto k0 = ExtField<Fp>::make(up({0, 1}, p));
    ElementaryAuto<ExtElem<Fp>> s(2, kappa_poly("3*x1^3", k0, p));
    auto e = lift_elementary(s);
    EXPECT_EQ(e.automorphism(), rmap("x1", "x2 + 3*x1^3", p));
    EXPECT_TRUE(e.automorphism().jacobian().is_one());
    ElementaryAuto<ExtElem<Fp>> id(1, KappaPoly<Fp>(k0));
    EXPECT_TRUE(lift_elementary(id).automorphism().is_identity());
    auto k2 = ExtField<Fp>::make(up({1, 0, 1}, p));
    ElementaryAuto<ExtElem<Fp>> s2(2, kappa_poly("t*x1^2", k2, p));
    EXPECT_EQ(lift_elementary(s2).automorphism(), rmap("x1", "x2 + t*x1^2", p));
}

TEST(CoordinateLift, Examples) {
    const std::uint64_t p = 7;
    auto k0 = ExtField<Fp>::make(up({0, 1}, p));
    auto ctx = monomial_context(p, {{1, 2}});
    auto a = homogeneous_coordinate_lift(kappa_poly("x2", k0, p), ctx);
    EXPECT_TRUE(a.g.is_identity());
    EXPECT_TRUE(a.a.is_one());
    EXPECT_EQ(a.index, 2);
    auto b = homogeneous_coordinate_lift(kappa_poly("3*x2", k0, p), ctx);
    EXPECT_TRUE(b.g.is_identity());
    EXPECT_EQ(coefficient_lift(KappaPoly<Fp>::constant(b.a)), rp("3", p));
    EXPECT_EQ(b.index, 2);

    auto ctx3 = monomial_context(p, {{2, 1}});
    auto c = homogeneous_coordinate_lift(kappa_poly("x2 + 4*x1^3", k0, p), ctx3);
    EXPECT_EQ(c.g, rmap("x1", "x2 + 4*x1^3", p));
    EXPECT_TRUE(c.a.is_one());
    EXPECT_EQ(c.index, 2);
    EXPECT_THROW(homogeneous_coordinate_lift(kappa_poly("x2 + x1", k0, p), ctx3), MathError);
    EXPECT_THROW(homogeneous_coordinate_lift(kappa_poly("x1*x2", k0, p), ctx), MathError);
}

TEST(CoordinateMate, Examples) {
    const std::uint64_t p = 7;
    auto a = coordinate_mate(kp("x1", p));
    ASSERT_TRUE(a.has_value());
    EXPECT_EQ(*a, kp("x2", p));
    auto b = coordinate_mate(kp("x2 + x1^3", p));
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(*b, kp("-x1", p));
    EXPECT_TRUE(jacobian_det(kp("x2 + x1^3", p), *b).is_one());
    EXPECT_FALSE(coordinate_mate(kp("x1*x2", p)).has_value());
    EXPECT_FALSE(coordinate_mate(kp("x1^2 + x2^2", p)).has_value());
}

TEST(CoordinateMate, RandomCoordinates) {
    std::mt19937_64 rng(43);
    const std::uint64_t p = 13;
    auto draw = [&] { return RandomElement<Fp>::draw(gf(p), rng); };
    for (int trial = 0; trial < 15; ++trial) {
        auto w = random_field_tame<Fp>(gf(p), 3, 3, draw, rng, 6);
        auto g = coordinate_mate(w.f1());
        ASSERT_TRUE(g.has_value()) << w;
        EXPECT_TRUE(jacobian_det(w.f1(), *g).is_one());
        EXPECT_TRUE(is_automorphism(PolyAutomorphism<Fp>(w.f1(), *g)));
    }
}

TEST(KernelGenerator, Examples) {
    const std::uint64_t p = 7;
    auto k0 = ExtField<Fp>::make(up({0, 1}, p));
    auto x1 = kappa_poly("x1", k0, p), zero = kappa_poly("0", k0, p);
    EXPECT_EQ(kernel_generator(x1, zero, kappa_poly("x2", k0, p)), kappa_poly("x2", k0, p));
    auto q = kernel_generator(x1, kappa_poly("x1^3", k0, p), kappa_poly("x2 - x1^3", k0, p));
    EXPECT_TRUE(scalar_multiple(q, kappa_poly("x2 - x1^3", k0, p)));
    // a multiple of the generator as the supplied kernel element
    auto q2 = kernel_generator(x1, kappa_poly("x1^3", k0, p), kappa_poly("x1*x2 - x1^4", k0, p));
    EXPECT_TRUE(scalar_multiple(q2, kappa_poly("x2 - x1^3", k0, p)));
    EXPECT_THROW(kernel_generator(x1, kappa_poly("x2", k0, p), kappa_poly("x2", k0, p)), MathError);
}

TEST(HomogenizeKernel, Examples) {
    const std::uint64_t p = 7;
    auto k0 = ExtField<Fp>::make(up({0, 1}, p));
    auto x1 = kappa_poly("x1", k0, p);
    auto h = homogenize_kernel_coordinate(kappa_poly("x2", k0, p), x1, kappa_poly("0", k0, p), monomial_context(p, {{1, 2}}));
    EXPECT_TRUE(scalar_multiple(h, kappa_poly("x2", k0, p)));
    auto h2 = homogenize_kernel_coordinate(kappa_poly("x2 - x1^3", k0, p), x1, kappa_poly("x1^3", k0, p),
                                           monomial_context(p, {{2, 1}}));
    EXPECT_TRUE(scalar_multiple(h2, kappa_poly("x2 - x1^3", k0, p)));
}

TEST(HomogenizeLastCoordinate, Examples) {
    const std::uint64_t p = 7;
    auto ctx = monomial_context(p, {{1, 2}});
    EXPECT_EQ(homogenize_last_coordinate(rp("x1", p), rp("x2 + x1^2 + 1", p), ctx), rp("x2", p));
    EXPECT_EQ(homogenize_last_coordinate(rp("x1", p), rp("x2 + t*x1", p), ctx), rp("x2", p));
    auto ctx3 = monomial_context(p, {{2, 1}});
    EXPECT_EQ(homogenize_last_coordinate(rp("x1", p), rp("x2 + t*x1^3", p), ctx3), rp("x2 + t*x1^3", p));
    EXPECT_THROW(homogenize_last_coordinate(rp("x1 + x2", p), rp("x2", p), ctx), MathError);
}

TEST(Descent, NormalizationAloneSuffices) {
    const std::uint64_t p = 7;
    auto ctx = descent_context(FieldSpec::prime_field(p), std::vector<DiagonalAuto<Fp>>{{el(p, 1), el(p, 2)}});
    auto r = descend_conjugator(Kmap("x1", "t*x2", p), ctx);
    EXPECT_TRUE(r.conjugator.is_identity());
    EXPECT_EQ(r.m_trace, (std::vector<std::size_t>{0}));
}

TEST(Descent, AlreadyOverR) {
    const std::uint64_t p = 7;
    auto ctx = descent_context(FieldSpec::prime_field(p), std::vector<DiagonalAuto<Fp>>{{el(p, 2), el(p, 1)}});
    auto r = descend_conjugator(Kmap("x1", "x2 + t*x1^3", p), ctx);
    EXPECT_EQ(r.conjugator, rmap("x1", "x2 + t*x1^3", p));
    EXPECT_EQ(r.iterations(), 0u);
}

TEST(Descent, OneIterationRemovesAPrime) {
    const std::uint64_t p = 7;
    // (x1, x2 + x1^3/t) normalizes to (x1, t x2 + x1^3), det J = t; it commutes with (2 x1, x2)
    auto ctx = descent_context(FieldSpec::prime_field(p), std::vector<DiagonalAuto<Fp>>{{el(p, 2), el(p, 1)}});
    auto r = descend_conjugator(Kmap("x1", "x2 + x1^3/t", p), ctx);
    EXPECT_EQ(r.m_trace, (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(r.iterations(), 1u);
    EXPECT_TRUE(is_unit_jacobian(r.conjugator.jacobian()));
    auto delta = rmap("2*x1", "x2", p);
    EXPECT_EQ(compose(delta, r.conjugator), compose(r.conjugator, delta));
}

TEST(Descent, ConjugatedGroup) {
    const std::uint64_t p = 7;
    auto w = rmap("x1", "x2 + x1^3", p);
    auto phi = compose(compose(w, rmap("x1", "2*x2", p)), *to_poly(invert(to_frac(w))));
    auto ctx = descent_context(FieldSpec::prime_field(p), std::vector<DiagonalAuto<Fp>>{{el(p, 1), el(p, 2)}});
    auto r = descend_conjugator(Kmap("x1", "t*x2 + t*x1^3", p), ctx);
    EXPECT_TRUE(scalar_multiple(r.conjugator.f1(), rp("x1", p)));
    EXPECT_TRUE(scalar_multiple(r.conjugator.f2(), rp("x2 + x1^3", p)));
    std::mt19937_64 rng(5);
    EXPECT_TRUE(oracle::conjugation_holds_at_points(phi, r.conjugator, 1, 2, p, rng));
}

TEST(DiagonalizeFiniteAbelian, CubicTriangularOverR) {
    const std::uint64_t p = 7;
    RGroup g(FieldSpec::prime_field(p), {rmap("x1", "2*x2 + t*x1^3", p)}, {3}, {el(p, 2)});
    auto cert = diagonalize_finite_abelian(g);
    EXPECT_TRUE(verify_certificate(cert).ok);
    EXPECT_EQ(cert.diagonal(0), DiagonalAuto<Fp>(el(p, 1), el(p, 2)));
    EXPECT_TRUE(holds_at_points(cert, p));
    EXPECT_TRUE(is_unit_jacobian(cert.conjugator.jacobian()));
}

TEST(DiagonalizeFiniteAbelian, TrivialAndDiagonalGroups) {
    const std::uint64_t p = 7;
    RGroup trivial(FieldSpec::prime_field(p), {}, {}, {});
    EXPECT_TRUE(diagonalize_finite_abelian(trivial).conjugator.is_identity());
    RGroup diag(FieldSpec::prime_field(p), {rmap("2*x1", "4*x2", p)}, {3}, {el(p, 2)});
    auto cert = diagonalize_finite_abelian(diag);
    EXPECT_TRUE(cert.conjugator.is_identity());
    EXPECT_EQ(cert.diagonal(0), DiagonalAuto<Fp>(el(p, 2), el(p, 4)));
}

TEST(DiagonalizeFiniteAbelian, RandomInstances) {
    std::mt19937_64 rng(47);
    for (std::uint64_t p : {7u, 13u}) {
        auto fs = FieldSpec::prime_field(p);
        for (int trial = 0; trial < 12; ++trial) {
            std::vector<std::uint64_t> orders = trial % 3 ? std::vector<std::uint64_t>{3} : std::vector<std::uint64_t>{2, 3};
            auto inst = random_group_instance(fs, orders, TameWordBounds{4, 4, 2}, rng);
            RGroup g(fs, inst.generators, inst.orders, inst.zetas);
            auto cert = diagonalize_finite_abelian(g);
            EXPECT_TRUE(verify_certificate(cert).ok);
            EXPECT_TRUE(holds_at_points(cert, p, static_cast<std::uint64_t>(trial)));
            EXPECT_TRUE(is_unit_jacobian(cert.conjugator.jacobian()));
            const auto& m = cert.descent_trace;
            ASSERT_FALSE(m.empty());
            EXPECT_EQ(m.back(), 0u);
            for (std::size_t i = 1; i < m.size(); ++i) EXPECT_LT(m[i], m[i - 1]);
            EXPECT_LE(m.size() - 1, m.front());
        }
    }
}

TEST(FixedCoordinate, DiagonalInput) {
    const std::uint64_t p = 7;
    auto cert = corollary_over_A_conjugator(FieldSpec::prime_field(p), rmap("x1", "2*x2", p), Kp("x1", p));
    EXPECT_TRUE(cert.conjugator.is_identity());
    EXPECT_EQ(cert.diagonal(0), DiagonalAuto<Fp>(el(p, 1), el(p, 2)));
}

TEST(FixedCoordinate, QuadraticShear) {
    const std::uint64_t p = 7;
    auto cert = corollary_over_A_conjugator(FieldSpec::prime_field(p), rmap("x1", "2*x2 + x1^2", p), Kp("x1", p));
    EXPECT_TRUE(verify_certificate(cert).ok);
    EXPECT_TRUE(scalar_multiple(cert.conjugator.f1(), rp("x1", p)));
    EXPECT_TRUE(scalar_multiple(cert.conjugator.f2(), rp("x2 + x1^2", p)));
    EXPECT_TRUE(holds_at_points(cert, p));
}

TEST(FixedCoordinate, OverRationals) {
    auto phi = PolyAutomorphism<UniPoly<Rational>>(parse_rpoly<Rational>("x1", RationalField()),
                                                   parse_rpoly<Rational>("-x2 + x1^3", RationalField()));
    auto f = parse_poly<Rational>("x1", RationalField());
    auto cert = corollary_over_A_conjugator(FieldSpec::rationals(), phi, f);
    EXPECT_TRUE(verify_certificate(cert).ok);
    EXPECT_TRUE(scalar_multiple(cert.conjugator.f2(), parse_rpoly<Rational>("x2 - 1/2*x1^3", RationalField())));
    EXPECT_EQ(cert.diagonal(0), DiagonalAuto<Rational>(Rational(1, 1), Rational(-1, 1)));
}

TEST(FixedCoordinate, Errors) {
    const std::uint64_t p = 7;
    auto fs = FieldSpec::prime_field(p);
    expect_error([&] { corollary_over_A_conjugator(fs, rmap("x1", "x2 + x1^2", p), Kp("x1", p)); }, "differ from 1");
    expect_error([&] { corollary_over_A_conjugator(fs, rmap("x1", "t*x2", p), Kp("x1", p)); }, "not a unit");
    expect_error([&] { corollary_over_A_conjugator(fs, rmap("x1 + x2^2", "2*x2", p), Kp("x1", p)); }, "does not fix");
}

TEST(FixedCoordinate, RandomConjugates) {
    std::mt19937_64 rng(53);
    const std::uint64_t p = 13;
    PolyRing<Fp> R(gf(p));
    for (int trial = 0; trial < 8; ++trial) {
        auto w = random_tame(R, TameWordBounds{3, 4, 2}, rng);
        Fp u = el(p, 2 + trial % 10);
        auto phi = compose(compose(w.map, RMap::diagonal(R.one(), R.from_base(u))), w.inverse);
        auto cert = corollary_over_A_conjugator(FieldSpec::prime_field(p), phi, to_frac(w.map.image(1)));
        EXPECT_TRUE(verify_certificate(cert).ok);
        EXPECT_EQ(cert.diagonal(0), DiagonalAuto<Fp>(gf(p).one(), u));
        EXPECT_TRUE(holds_at_points(cert, p));
    }
}
