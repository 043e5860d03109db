#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "automorphism.hpp"
#include "parse.hpp"

namespace planediag {

// Coefficient domain of a conjugator: the field itself, or R = k[t] inside K.
template <class C>
struct RingTraits {
    static constexpr RingKind kind = RingKind::field;
    static bool is_unit_jacobian(const BiPoly<C>& j) { return j.is_constant() && !j.is_zero(); }
    static std::optional<PolyAutomorphism<C>> inverse(const PolyAutomorphism<C>& psi) {
        try {
            return invert(psi);
        } catch (const MathError&) {
            return std::nullopt;
        }
    }
};

template <class F>
struct RingTraits<RatFunc<F>> {
    static constexpr RingKind kind = RingKind::fractions;
    static bool is_unit_jacobian(const KPoly<F>& j) { return j.is_constant() && !j.is_zero(); }
    static std::optional<PolyAutomorphism<RatFunc<F>>> inverse(const PolyAutomorphism<RatFunc<F>>& psi) {
        try {
            return invert(psi);
        } catch (const MathError&) {
            return std::nullopt;
        }
    }
};

template <class F>
struct RingTraits<UniPoly<F>> {
    static constexpr RingKind kind = RingKind::polynomials;
    static bool is_unit_jacobian(const RPoly<F>& j) { return planediag::is_unit_jacobian(j); }
    // Inverse over K, accepted only with R-coefficients.
    static std::optional<PolyAutomorphism<UniPoly<F>>> inverse(const PolyAutomorphism<UniPoly<F>>& psi) {
        try {
            return to_poly(invert(to_frac(psi)));
        } catch (const MathError&) {
            return std::nullopt;
        }
    }
};

struct LogStep {
    std::string operation;
    std::string input_hash;
    std::string update;
};

// FNV-1a, stable across platforms and runs.
inline std::string stable_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    auto out = os.str();
    return std::string(16 - out.size(), '0') + out;
}

// psi^{-1} o phi_l o psi = (zeta_l^{e_l1} x1, zeta_l^{e_l2} x2) for every generator.
template <class C>
struct Certificate {
    using F = typename C::base_field;

    FieldSpec field = FieldSpec::rationals();
    RingKind ring = RingTraits<C>::kind;
    std::vector<PolyAutomorphism<C>> generators;
    std::vector<std::uint64_t> orders;
    std::vector<F> zetas;
    PolyAutomorphism<C> conjugator;
    std::vector<std::array<std::uint64_t, 2>> exponents;
    std::vector<LogStep> log;
    std::vector<std::size_t> descent_trace;  // prime count of det J before each descent step

    DiagonalAuto<F> diagonal(std::size_t l) const {
        return {power(zetas[l], exponents[l][0]), power(zetas[l], exponents[l][1])};
    }
    PolyAutomorphism<C> diagonal_automorphism(std::size_t l) const {
        const auto& ctx = conjugator.context();
        auto d = diagonal(l);
        return PolyAutomorphism<C>::diagonal(ctx.from_base(d.a1), ctx.from_base(d.a2));
    }
};

struct VerificationReport {
    bool ok = true;
    std::vector<std::string> failures;
    void fail(std::string what) {
        ok = false;
        failures.push_back(std::move(what));
    }
};

// Replays every check from the certificate data alone:
// det J psi is a unit, psi^{-1} exists over the coefficient ring, and
// phi_l = psi o delta_l o psi^{-1}, which is equivalent to the conjugation
// equation psi^{-1} o phi_l o psi = delta_l.
template <class C>
VerificationReport verify_certificate(const Certificate<C>& cert) {
    VerificationReport rep;
    std::size_t r = cert.generators.size();
    if (cert.orders.size() != r || cert.zetas.size() != r || cert.exponents.size() != r) {
        rep.fail("generator, order, root and exponent lists differ in length");
        return rep;
    }
    const auto& psi = cert.conjugator;
    if (!RingTraits<C>::is_unit_jacobian(psi.jacobian())) {
        rep.fail("det J of the conjugator is not a unit: " + psi.jacobian().to_string());
        return rep;
    }
    auto inv = RingTraits<C>::inverse(psi);
    if (!inv) {
        rep.fail("conjugator has no inverse over " + ring_name(cert.ring));
        return rep;
    }
    if (!compose(psi, *inv).is_identity() || !compose(*inv, psi).is_identity()) {
        rep.fail("conjugator inverse does not compose to the identity");
        return rep;
    }
    for (std::size_t l = 0; l < r; ++l) {
        auto ord = multiplicative_order(cert.zetas[l]);
        if (!ord || *ord != cert.orders[l]) rep.fail("zeta of generator " + std::to_string(l + 1) + " has wrong order");
        const auto& phi = cert.generators[l];
        if (!(phi.context() == psi.context())) {
            rep.fail("generator " + std::to_string(l + 1) + " over a different coefficient domain");
            continue;
        }
        auto expected = compose(psi, compose(cert.diagonal_automorphism(l), *inv));
        if (expected != phi) rep.fail("conjugation equation fails for generator " + std::to_string(l + 1));
    }
    return rep;
}

}  // namespace planediag
