#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"

using namespace planediag;
using namespace testing_support;

namespace {

CharacterGroup<Fp> gamma_of(std::uint64_t p, std::vector<std::vector<long long>> gens, std::size_t n = 2) {
    std::vector<std::vector<Fp>> g;
    for (const auto& row : gens) {
        std::vector<Fp> v;
        for (auto x : row) v.push_back(gf(p).from_int(x));
        g.push_back(v);
    }
    return CharacterGroup<Fp>(n, g);
}

// Members of the relation lattice in [0, p-1)^2 according to the library.
void expect_matches_brute_force(const CharacterGroup<Fp>& g, std::uint64_t p) {
    auto k = FieldSpec::prime_field(p);
    auto m = relation_lattice(g, k);
    auto q = quotient_structure(m, g.n);
    std::vector<std::vector<std::uint64_t>> gens;
    for (const auto& a : g.generators) {
        std::vector<std::uint64_t> v;
        for (const auto& x : a) v.push_back(x.value());
        gens.push_back(v);
    }
    long long N = static_cast<long long>(p - 1);
    long long members = 0;
    for (long long i = 0; i < N; ++i)
        for (long long j = 0; j < N; ++j) {
            bool rel = oracle::is_relation(gens, {i, j}, p);
            members += rel;
            EXPECT_EQ(rel, q.project({i, j}).is_zero()) << i << "," << j;
        }
    for (const auto& row : m.basis) EXPECT_TRUE(oracle::is_relation(gens, row, p));
    long long order = 1;
    for (auto d : q.factors()) order *= d;
    EXPECT_EQ(order * members, N * N);
}

}  // namespace

TEST(RelationLattice, TrivialGroupGivesEverything) {
    auto m = relation_lattice(CharacterGroup<Fp>(2, {}), FieldSpec::prime_field(7));
    EXPECT_EQ(m.basis, (IntMat{{1, 0}, {0, 1}}));
    auto q = quotient_structure(m, 2);
    EXPECT_TRUE(q.is_trivial());
    EXPECT_TRUE(q.gamma(1).is_zero());
    EXPECT_TRUE(q.gamma(2).is_zero());
}

TEST(RelationLattice, DiagonalScalarOfOrderThree) {
    auto g = gamma_of(7, {{2, 2}});
    expect_matches_brute_force(g, 7);
    auto q = quotient_structure(relation_lattice(g, FieldSpec::prime_field(7)), 2);
    EXPECT_EQ(q.factors(), IntVec{3});
    EXPECT_EQ(q.gamma(1), q.gamma(2));
    EXPECT_FALSE(q.gamma(1).is_zero());
    // (1,-1) and (3,0) are relations, (1,0) is not
    EXPECT_TRUE(q.project({1, -1}).is_zero());
    EXPECT_TRUE(q.project({3, 0}).is_zero());
    EXPECT_FALSE(q.project({1, 0}).is_zero());
}

TEST(RelationLattice, FirstCoordinateOnly) {
    auto g = gamma_of(7, {{2, 1}});
    expect_matches_brute_force(g, 7);
    auto q = quotient_structure(relation_lattice(g, FieldSpec::prime_field(7)), 2);
    EXPECT_EQ(q.factors(), IntVec{3});
    EXPECT_FALSE(q.gamma(1).is_zero());
    EXPECT_TRUE(q.gamma(2).is_zero());
}

TEST(RelationLattice, NonUnitRejected) {
    EXPECT_THROW(gamma_of(7, {{0, 1}}), MathError);
    EXPECT_THROW(relation_lattice(CharacterGroup<Rational>(1, {{Rational(2, 1)}}), FieldSpec::rationals()), MathError);
}

TEST(RelationLattice, RationalSigns) {
    auto m = relation_lattice(CharacterGroup<Rational>(2, {{Rational(-1, 1), Rational(1, 1)}}), FieldSpec::rationals());
    auto q = quotient_structure(m, 2);
    EXPECT_EQ(q.factors(), IntVec{2});
    EXPECT_FALSE(q.gamma(1).is_zero());
    EXPECT_TRUE(q.gamma(2).is_zero());
}

TEST(Subgroups, GammaI) {
    auto k = FieldSpec::prime_field(7);
    auto q1 = quotient_structure(relation_lattice(gamma_of(7, {{2, 2}}), k), 2);
    auto s = subgroup_gamma_i(q1, 1);
    EXPECT_TRUE(s.contains(q1.gamma(1)));
    EXPECT_TRUE(s.contains(q1.scale(q1.gamma(1), 2)));

    auto q2 = quotient_structure(relation_lattice(gamma_of(7, {{2, 1}}), k), 2);
    auto s2 = subgroup_gamma_i(q2, 1);
    EXPECT_TRUE(s2.contains(q2.zero()));
    EXPECT_FALSE(s2.contains(q2.gamma(1)));
    EXPECT_FALSE(s2.contains(q2.scale(q2.gamma(1), 2)));

    auto q3 = quotient_structure(relation_lattice(CharacterGroup<Fp>(2, {}), k), 2);
    EXPECT_TRUE(subgroup_gamma_i(q3, 1).contains(q3.zero()));
    EXPECT_THROW(subgroup_gamma_i(q3, 3), MathError);
}

TEST(Subgroups, TIndex) {
    auto k = FieldSpec::prime_field(7);
    auto q2 = quotient_structure(relation_lattice(gamma_of(7, {{2, 1}}), k), 2);
    EXPECT_EQ(t_index(q2, 1), TIndex::finite(3));
    EXPECT_EQ(t_index(q2, 2), TIndex::finite(1));
    auto q1 = quotient_structure(relation_lattice(gamma_of(7, {{2, 2}}), k), 2);
    EXPECT_EQ(t_index(q1, 1), TIndex::finite(1));
    EXPECT_EQ(t_index(q1, 2), TIndex::finite(1));
    auto q3 = quotient_structure(relation_lattice(CharacterGroup<Fp>(2, {}), k), 2);
    EXPECT_EQ(t_index(q3, 1), TIndex::finite(1));
}

TEST(Subgroups, TIndexInfinite) {
    // M = 0: Z^2 with gamma_1 = e_1, gamma_2 = e_2
    QuotientGroup q = quotient_structure(RelationLattice{{{0, 0}}}, 2);
    EXPECT_EQ(q.factors(), (IntVec{0, 0}));
    EXPECT_TRUE(t_index(q, 1).is_infinite());
    EXPECT_EQ(t_index(q, 1).to_string(), "inf");
    // r-part coefficients are forced and may be negative
    auto ce = canonical_expression(q, q.project({-1, 2}));
    EXPECT_EQ(ce.r, 2u);
    EXPECT_EQ(ce.i, (IntVec{-1, 2}));
    EXPECT_TRUE(ce.lambda.is_zero());
}

TEST(CanonicalExpression, Examples) {
    auto k = FieldSpec::prime_field(7);
    auto q = quotient_structure(relation_lattice(gamma_of(7, {{2, 1}}), k), 2);
    auto z = canonical_expression(q, q.zero());
    for (auto i : z.i) EXPECT_EQ(i, 0);
    EXPECT_TRUE(z.lambda.is_zero());

    auto c = canonical_expression(q, q.scale(q.gamma(1), 2));
    EXPECT_EQ(c.permutation, (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(c.r, 0u);
    EXPECT_EQ(c.s, 1u);
    EXPECT_EQ(c.i, IntVec{2});
    EXPECT_TRUE(c.lambda.is_zero());

    auto w = canonical_expression(q, q.scale(q.gamma(1), 3));
    EXPECT_EQ(w.i, IntVec{0});
    EXPECT_TRUE(w.lambda.is_zero());
}

TEST(CanonicalExpression, ReorderingIsReported) {
    auto k = FieldSpec::prime_field(7);
    auto q = quotient_structure(relation_lattice(gamma_of(7, {{1, 2}}), k), 2);
    auto c = canonical_expression(q, q.gamma(2));
    EXPECT_EQ(c.permutation, (std::vector<std::size_t>{2, 1}));
    EXPECT_EQ(c.i, IntVec{1});
}

TEST(Lattice, RandomPropertiesOverSmallFields) {
    std::mt19937_64 rng(21);
    for (std::uint64_t p : {7u, 13u}) {
        auto k = FieldSpec::prime_field(p);
        std::uniform_int_distribution<long long> d(1, static_cast<long long>(p - 1));
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t ngen = static_cast<std::size_t>(trial % 3);
            std::vector<std::vector<long long>> gens;
            for (std::size_t j = 0; j < ngen; ++j) gens.push_back({d(rng), d(rng)});
            auto g = gamma_of(p, gens);
            expect_matches_brute_force(g, p);
            auto q = quotient_structure(relation_lattice(g, k), 2);
            for (std::size_t i = 1; i <= 2; ++i) {
                auto sub = subgroup_gamma_i(q, i);
                bool whole = true;
                for (std::size_t j = 1; j <= 2; ++j) whole = whole && sub.contains(q.gamma(j));
                EXPECT_EQ(t_index(q, i) == TIndex::finite(1), whole);
            }
            for (long long a = 0; a < 4; ++a)
                for (long long b = 0; b < 4; ++b) {
                    auto gamma = q.project({a, b});
                    auto ce = canonical_expression(q, gamma);
                    auto sum = ce.lambda;
                    for (std::size_t l = 0; l < ce.s; ++l) sum = q.add(sum, q.scale(q.gamma(ce.permutation[l]), ce.i[l]));
                    EXPECT_EQ(sum, gamma);
                    for (std::size_t l = ce.r; l < ce.s; ++l) {
                        EXPECT_GE(ce.i[l], 0);
                        EXPECT_LT(ce.i[l], ce.t[l].value);
                    }
                }
        }
    }
}
