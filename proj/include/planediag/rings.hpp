#pragma once

#include <optional>
#include <utility>

#include "bipoly.hpp"
#include "extfield.hpp"
#include "ratfunc.hpp"

namespace planediag {

// Convenience aliases for the coefficient domains over a base field F.
template <class F>
using RPoly = BiPoly<UniPoly<F>>;  // R[x], R = k[t]
template <class F>
using KPoly = BiPoly<RatFunc<F>>;  // K[x], K = k(t)
template <class F>
using KappaPoly = BiPoly<ExtElem<F>>;  // kappa[x]

// R[x] -> K[x]
template <class F>
KPoly<F> to_frac(const RPoly<F>& f) {
    FracField<F> K(f.context().base());
    return f.template map_coefficients<RatFunc<F>>(K, [](const UniPoly<F>& c) { return RatFunc<F>(c); });
}

// K[x] -> R[x] when every coefficient is a polynomial in t.
template <class F>
std::optional<RPoly<F>> to_poly(const KPoly<F>& f) {
    for (const auto& [m, c] : f.terms())
        if (!c.is_polynomial()) return std::nullopt;
    PolyRing<F> R(f.context().base());
    return f.template map_coefficients<UniPoly<F>>(R, [](const RatFunc<F>& c) { return c.num(); });
}

// k[x] -> R[x] (constant coefficients)
template <class F>
RPoly<F> constant_lift(const BiPoly<F>& f) {
    PolyRing<F> R(f.context());
    return f.template map_coefficients<UniPoly<F>>(R, [](const F& c) { return UniPoly<F>(c); });
}

// Content (monic gcd of the coefficients) and primitive part. The content is
// monic; the primitive part carries the unit.
template <class F>
std::pair<UniPoly<F>, RPoly<F>> content_primitive(const RPoly<F>& f) {
    if (f.is_zero()) throw MathError("content of zero polynomial");
    UniPoly<F> g = f.context().zero();
    for (const auto& [m, c] : f.terms()) {
        g = gcd(g, c);
        if (g.is_one()) break;
    }
    if (g.is_one()) return {g, f};
    auto prim = f.template map_coefficients<UniPoly<F>>(f.context(), [&](const UniPoly<F>& c) { return c.divexact(g); });
    return {g, prim};
}

// For f in K[x] nonzero: (b, g) with g = b*f primitive in R[x], b in K*.
template <class F>
std::pair<RatFunc<F>, RPoly<F>> primitive_associate(const KPoly<F>& f) {
    if (f.is_zero()) throw MathError("primitive part of zero polynomial");
    PolyRing<F> R(f.context().base());
    UniPoly<F> den = R.one();
    for (const auto& [m, c] : f.terms()) {
        if (c.den().is_one()) continue;
        den = den.divexact(gcd(den, c.den())) * c.den();
    }
    auto cleared = f.template map_coefficients<UniPoly<F>>(R, [&](const RatFunc<F>& c) {
        return c.num() * den.divexact(c.den());
    });
    auto [content, prim] = content_primitive(cleared);
    return {RatFunc<F>(den, content), prim};
}

// Coefficient-wise reduction modulo an irreducible pi, i.e. into kappa[x].
template <class F>
KappaPoly<F> residue_map(const RPoly<F>& f, const ExtField<F>& kappa) {
    return f.template map_coefficients<ExtElem<F>>(kappa, [&](const UniPoly<F>& c) { return kappa.reduce(c); });
}

template <class F>
KappaPoly<F> residue_map(const RPoly<F>& f, const UniPoly<F>& pi) {
    return residue_map(f, ExtField<F>::make(pi));
}

// Canonical lift kappa[x] -> R[x]: each coefficient by its representative of
// degree < deg pi.
template <class F>
RPoly<F> coefficient_lift(const KappaPoly<F>& f, const typename F::context_type& base) {
    PolyRing<F> R(base);
    return f.template map_coefficients<UniPoly<F>>(R, [](const ExtElem<F>& c) { return c.representative(); });
}

template <class F>
RPoly<F> coefficient_lift(const KappaPoly<F>& f) {
    return coefficient_lift(f, f.context().base());
}

// Exact division f / c for c in the coefficient ring; nullopt if inexact.
template <class F>
std::optional<RPoly<F>> divide_by_scalar(const RPoly<F>& f, const UniPoly<F>& c) {
    std::vector<typename RPoly<F>::Term> out;
    out.reserve(f.size());
    for (const auto& [m, a] : f.terms()) {
        auto [q, r] = a.divmod(c);
        if (!r.is_zero()) return std::nullopt;
        out.emplace_back(m, q);
    }
    return RPoly<F>::from_terms(f.context(), std::move(out));
}

// Exact bivariate division over a field: nullopt when d does not divide f.
template <class C>
std::optional<BiPoly<C>> divide_exact(BiPoly<C> f, const BiPoly<C>& d) {
    if (d.is_zero()) throw MathError("division by zero polynomial");
    BiPoly<C> q(f.context());
    const auto& [lm, lc] = d.leading_term();
    C lc_inv = lc.inv();
    while (!f.is_zero()) {
        const auto& [m, c] = f.leading_term();
        if (m.e1 < lm.e1 || m.e2 < lm.e2) return std::nullopt;
        auto t = BiPoly<C>::monomial(c * lc_inv, m.e1 - lm.e1, m.e2 - lm.e2);
        q += t;
        f -= t * d;
    }
    return q;
}

// Scales so that the graded-lex leading coefficient is one.
template <class C>
BiPoly<C> make_monic(const BiPoly<C>& f) {
    if (f.is_zero() || f.leading_coefficient().is_one()) return f;
    return f * f.leading_coefficient().inv();
}

}  // namespace planediag
