#pragma once

#include <random>

#include "planediag/diagonalize.hpp"
#include "planediag/parse.hpp"
#include "planediag/random.hpp"

namespace planediag {

template <class C>
std::ostream& operator<<(std::ostream& os, const BiPoly<C>& f) {
    return os << f.to_string();
}
template <class C>
std::ostream& operator<<(std::ostream& os, const PolyAutomorphism<C>& phi) {
    return os << phi.to_string();
}

}  // namespace planediag

namespace testing_support {

using namespace planediag;

inline PrimeField gf(std::uint64_t p) { return PrimeField(p); }

inline BiPoly<Fp> kp(const std::string& s, std::uint64_t p) { return parse_kpoly<Fp>(s, gf(p)); }
inline RPoly<Fp> rp(const std::string& s, std::uint64_t p) { return parse_rpoly<Fp>(s, gf(p)); }
inline KPoly<Fp> Kp(const std::string& s, std::uint64_t p) { return parse_poly<Fp>(s, gf(p)); }
inline BiPoly<Rational> qp(const std::string& s) { return parse_kpoly<Rational>(s, RationalField()); }
inline UniPoly<Fp> up(std::initializer_list<long long> coeffs, std::uint64_t p) {
    std::vector<Fp> c;
    for (auto v : coeffs) c.push_back(gf(p).from_int(v));
    return UniPoly<Fp>(gf(p), c);
}

template <class C>
PolyAutomorphism<C> map_of(const BiPoly<C>& a, const BiPoly<C>& b) {
    return {a, b};
}

inline PolyAutomorphism<Fp> kmap(const std::string& a, const std::string& b, std::uint64_t p) {
    return {kp(a, p), kp(b, p)};
}
inline PolyAutomorphism<UniPoly<Fp>> rmap(const std::string& a, const std::string& b, std::uint64_t p) {
    return {rp(a, p), rp(b, p)};
}
inline PolyAutomorphism<RatFunc<Fp>> Kmap(const std::string& a, const std::string& b, std::uint64_t p) {
    return {Kp(a, p), Kp(b, p)};
}

// Random polynomial of total degree <= deg with coefficients from draw().
template <class C, class Draw, class Rng>
BiPoly<C> random_bipoly(const typename C::context_type& ctx, int deg, Draw&& draw, Rng& rng, double density = 0.6) {
    std::bernoulli_distribution keep(density);
    std::vector<typename BiPoly<C>::Term> terms;
    for (int d = 0; d <= deg; ++d)
        for (int a = 0; a <= d; ++a)
            if (keep(rng)) terms.emplace_back(Monomial{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(d - a)}, draw());
    return BiPoly<C>::from_terms(ctx, terms);
}

// Random tame automorphism over a field: elementaries of degree <= max_l and
// invertible affine maps, with coefficients from draw(). The product of the
// elementary degrees stays <= max_degree.
template <class E, class Draw, class Rng>
PolyAutomorphism<E> random_field_tame(const typename E::context_type& ctx, int factors, int max_l, Draw&& draw, Rng& rng,
                                      int max_degree = 12) {
    using P = BiPoly<E>;
    auto unit = [&] {
        for (;;) {
            E a = draw();
            if (!a.is_zero()) return a;
        }
    };
    auto phi = PolyAutomorphism<E>::identity(ctx);
    int deg = 1;
    for (int j = 0; j < factors; ++j) {
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
            E a = unit(), d = unit(), b = draw();
            PolyAutomorphism<E> aff(P::monomial(a, 1, 0) + P::monomial(b, 0, 1) + P::constant(draw()),
                                    P::monomial(d, 0, 1) + P::constant(draw()));
            if (std::uniform_int_distribution<int>(0, 1)(rng)) aff = compose(PolyAutomorphism<E>::swap(ctx), aff);
            phi = compose(phi, aff);
            continue;
        }
        int i = std::uniform_int_distribution<int>(1, 2)(rng);
        int lmax = std::min(max_l, max_degree / deg);
        if (lmax < 2) continue;
        int l = std::uniform_int_distribution<int>(2, lmax)(rng);
        deg *= l;
        P f(ctx);
        for (int e = 0; e <= l; ++e) {
            E c = e == l ? unit() : draw();
            f += P::monomial(c, i == 1 ? 0 : static_cast<std::uint32_t>(e), i == 1 ? static_cast<std::uint32_t>(e) : 0);
        }
        phi = compose(phi, ElementaryAuto<E>(i, f).automorphism());
    }
    return phi;
}

}  // namespace testing_support
