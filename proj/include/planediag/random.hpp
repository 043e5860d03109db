#pragma once

#include <numeric>
#include <random>
#include <vector>

#include "action.hpp"
#include "linalg.hpp"

namespace planediag {

struct TameWordBounds {
    int max_factors = 5;
    int max_degree = 6;
    int max_t_degree = 3;
};

template <class F, class Rng>
UniPoly<F> random_r_element(const PolyRing<F>& R, int max_t_degree, Rng& rng, bool nonzero = false) {
    for (;;) {
        UniPoly<F> out = R.zero();
        int d = std::uniform_int_distribution<int>(0, max_t_degree)(rng);
        for (int i = 0; i <= d; ++i)
            out += UniPoly<F>::monomial(RandomElement<F>::draw(R.base(), rng), i);
        if (!nonzero || !out.is_zero()) return out;
    }
}

template <class F, class Rng>
F random_unit(const typename F::context_type& k, Rng& rng) {
    for (;;) {
        F a = RandomElement<F>::draw(k, rng);
        if (!a.is_zero()) return a;
    }
}

template <class F>
struct RandomTame {
    PolyAutomorphism<UniPoly<F>> map, inverse;
    std::size_t factors = 0;
};

// Random tame automorphism of R[x] with det J in k*: elementaries over R of
// degree product at most max_degree, separated by affine maps over R.
template <class F, class Rng>
RandomTame<F> random_tame(const PolyRing<F>& R, const TameWordBounds& b, Rng& rng) {
    using A = PolyAutomorphism<UniPoly<F>>;
    using P = RPoly<F>;
    A map = A::identity(R), inv = A::identity(R);
    int n = std::uniform_int_distribution<int>(1, b.max_factors)(rng);
    int deg = 1;
    auto push = [&](const A& f, const A& finv) {
        map = compose(map, f);
        inv = compose(finv, inv);
    };
    for (int j = 0; j < n; ++j) {
        bool affine = std::uniform_int_distribution<int>(0, 2)(rng) == 0;
        if (affine) {
            auto a1 = R.from_base(random_unit<F>(R.base(), rng)), a2 = R.from_base(random_unit<F>(R.base(), rng));
            auto c1 = random_r_element(R, b.max_t_degree, rng), c2 = random_r_element(R, b.max_t_degree, rng);
            A f(P::monomial(a1, 1, 0) + P::constant(c1), P::monomial(a2, 0, 1) + P::constant(c2));
            if (std::uniform_int_distribution<int>(0, 1)(rng)) f = compose(A::swap(R), f);
            push(f, *to_poly(invert_affine(to_frac(f))));
            continue;
        }
        int lmax = b.max_degree / deg;
        int l = std::uniform_int_distribution<int>(1, std::max(1, lmax))(rng);
        int i = std::uniform_int_distribution<int>(1, 2)(rng);
        P f(R);
        for (int e = 0; e <= l; ++e) {
            auto c = random_r_element(R, b.max_t_degree, rng, e == l);
            if (c.is_zero()) continue;
            f += P::monomial(c, i == 1 ? 0 : static_cast<std::uint32_t>(e), i == 1 ? static_cast<std::uint32_t>(e) : 0);
        }
        ElementaryAuto<UniPoly<F>> el(i, f);
        push(el.automorphism(), el.inverse().automorphism());
        deg *= l;
    }
    return {map, inv, static_cast<std::size_t>(n)};
}

template <class F>
struct RandomGroupInstance {
    std::vector<PolyAutomorphism<UniPoly<F>>> generators;
    std::vector<std::uint64_t> orders;
    std::vector<F> zetas;
    std::vector<std::array<std::uint64_t, 2>> exponents;
    RandomTame<F> conjugator;
};

// G = w o D o w^{-1} with D diagonal of the given orders over GF(p).
template <class Rng>
RandomGroupInstance<Fp> random_group_instance(const FieldSpec& k, const std::vector<std::uint64_t>& orders,
                                              const TameWordBounds& b, Rng& rng) {
    if (!k.is_prime_field()) throw MathError("random instances need a prime field");
    std::uint64_t p = k.p();
    PrimeField F = k.prime_context();
    PolyRing<Fp> R(F);
    RandomGroupInstance<Fp> out;
    out.conjugator = random_tame(R, b, rng);
    for (auto d : orders) {
        if (d == 0 || (p - 1) % d != 0)
            throw MathError("order " + std::to_string(d) + " does not divide p - 1 = " + std::to_string(p - 1) +
                            "; a primitive root of that order is needed");
        Fp zeta = power(Fp(k.generator(), p), (p - 1) / d);
        std::uniform_int_distribution<std::uint64_t> e(0, d - 1);
        std::uint64_t e1 = e(rng), e2 = e(rng);
        if (std::gcd(std::gcd(e1, e2), d) != 1) e1 = 1;
        auto diag = PolyAutomorphism<UniPoly<Fp>>::diagonal(R.from_base(power(zeta, e1)), R.from_base(power(zeta, e2)));
        out.generators.push_back(compose(compose(out.conjugator.map, diag), out.conjugator.inverse));
        out.orders.push_back(d);
        out.zetas.push_back(zeta);
        out.exponents.push_back({e1, e2});
    }
    return out;
}

}  // namespace planediag
