#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rings.hpp"

namespace planediag {

// Endomorphism of C[x1, x2] identified with the pair of images (f1, f2).
// phi(f) means f(f1, f2); compose(phi, psi) is phi o psi with
// (phi o psi)(x_i) = phi(psi(x_i)).
template <class C>
class PolyAutomorphism {
public:
    using coeff_type = C;
    using Poly = BiPoly<C>;
    using ring_context = typename C::context_type;

    PolyAutomorphism() = default;
    PolyAutomorphism(Poly f1, Poly f2) : f_{std::move(f1), std::move(f2)} {
        if (!(f_[0].context() == f_[1].context())) throw MathError("coefficient domain mismatch");
    }

    static PolyAutomorphism identity(const ring_context& ctx) {
        return {Poly::variable(ctx, 1), Poly::variable(ctx, 2)};
    }
    static PolyAutomorphism diagonal(const C& a1, const C& a2) {
        return {Poly::monomial(a1, 1, 0), Poly::monomial(a2, 0, 1)};
    }
    static PolyAutomorphism swap(const ring_context& ctx) {
        return {Poly::variable(ctx, 2), Poly::variable(ctx, 1)};
    }

    const Poly& f1() const { return f_[0]; }
    const Poly& f2() const { return f_[1]; }
    const Poly& image(int i) const { return f_[i - 1]; }
    const ring_context& context() const { return f_[0].context(); }

    // phi(f)
    Poly apply(const Poly& f) const { return f.substitute(f_[0], f_[1]); }

    Poly jacobian() const { return jacobian_det(f_[0], f_[1]); }
    // deg f1 + deg f2
    int degree() const { return f_[0].total_degree() + f_[1].total_degree(); }
    bool is_identity() const {
        return f_[0] == Poly::variable(context(), 1) && f_[1] == Poly::variable(context(), 2);
    }
    bool is_affine() const { return f_[0].total_degree() <= 1 && f_[1].total_degree() <= 1; }

    friend bool operator==(const PolyAutomorphism& a, const PolyAutomorphism& b) {
        return a.f_[0] == b.f_[0] && a.f_[1] == b.f_[1];
    }
    friend bool operator!=(const PolyAutomorphism& a, const PolyAutomorphism& b) { return !(a == b); }

    std::string to_string() const { return "(" + f_[0].to_string() + ", " + f_[1].to_string() + ")"; }

private:
    std::array<Poly, 2> f_;
};

template <class C>
PolyAutomorphism<C> compose(const PolyAutomorphism<C>& phi, const PolyAutomorphism<C>& psi) {
    if (!(phi.context() == psi.context())) throw MathError("coefficient domain mismatch");
    return {phi.apply(psi.f1()), phi.apply(psi.f2())};
}

template <class C>
int degree(const PolyAutomorphism<C>& phi) {
    return phi.degree();
}

// x_i -> x_i + f with f free of x_i.
template <class C>
struct ElementaryAuto {
    int index = 1;
    BiPoly<C> f;

    ElementaryAuto() = default;
    ElementaryAuto(int i, BiPoly<C> added) : index(i), f(std::move(added)) {
        if (i != 1 && i != 2) throw MathError("elementary index must be 1 or 2");
        if (!f.free_of(i)) throw MathError("elementary summand involves its own variable");
    }

    PolyAutomorphism<C> automorphism() const {
        auto x1 = BiPoly<C>::variable(f.context(), 1), x2 = BiPoly<C>::variable(f.context(), 2);
        return index == 1 ? PolyAutomorphism<C>(x1 + f, x2) : PolyAutomorphism<C>(x1, x2 + f);
    }
    ElementaryAuto inverse() const { return {index, -f}; }
    std::string to_string() const { return automorphism().to_string(); }
};

template <class C>
struct DiagonalAuto {
    C a1, a2;

    DiagonalAuto() = default;
    DiagonalAuto(C x, C y) : a1(std::move(x)), a2(std::move(y)) {
        if (a1.is_zero() || a2.is_zero()) throw MathError("diagonal entries must be units");
    }
    const C& operator[](int i) const { return i == 1 ? a1 : a2; }
    PolyAutomorphism<C> automorphism() const { return PolyAutomorphism<C>::diagonal(a1, a2); }
    DiagonalAuto inverse() const { return {a1.inv(), a2.inv()}; }
    friend bool operator==(const DiagonalAuto& a, const DiagonalAuto& b) { return a.a1 == b.a1 && a.a2 == b.a2; }
    std::string to_string() const { return automorphism().to_string(); }
};

// Affine automorphism: first factor of a tame word.
template <class C>
struct AffineParts {
    C a11, a12, a21, a22, c1, c2;
};

template <class C>
AffineParts<C> affine_parts(const PolyAutomorphism<C>& phi) {
    const auto& f1 = phi.f1();
    const auto& f2 = phi.f2();
    return {f1.coefficient(1, 0), f1.coefficient(0, 1), f2.coefficient(1, 0),
            f2.coefficient(0, 1), f1.constant_term(), f2.constant_term()};
}

template <class C>
PolyAutomorphism<C> invert_affine(const PolyAutomorphism<C>& phi) {
    if (!phi.is_affine()) throw MathError("not an affine map");
    auto [a, b, c, d, e1, e2] = affine_parts(phi);
    C det = a * d - b * c;
    if (det.is_zero()) throw MathError("not an automorphism of the plane");
    C inv = det.inv();
    const auto& ctx = phi.context();
    using P = BiPoly<C>;
    // x = L^{-1}(y - e)
    auto y1 = P::variable(ctx, 1) - P::constant(e1);
    auto y2 = P::variable(ctx, 2) - P::constant(e2);
    return {(d * inv) * y1 + (-b * inv) * y2, (-c * inv) * y1 + (a * inv) * y2};
}

// phi = affine o e_1 o ... o e_k
template <class C>
struct TameWord {
    PolyAutomorphism<C> affine;
    std::vector<ElementaryAuto<C>> elementaries;

    PolyAutomorphism<C> compose_all() const {
        if (elementaries.empty()) return affine;
        PolyAutomorphism<C> cur = elementaries.back().automorphism();
        for (auto it = elementaries.rbegin() + 1; it != elementaries.rend(); ++it)
            cur = compose(it->automorphism(), cur);
        return compose(affine, cur);
    }
    // e_k^{-1} o ... o e_1^{-1} o affine^{-1}
    PolyAutomorphism<C> compose_inverse() const {
        PolyAutomorphism<C> cur = invert_affine(affine);
        for (const auto& e : elementaries) cur = compose(e.inverse().automorphism(), cur);
        return cur;
    }
    std::size_t length() const { return elementaries.size() + 1; }
};

namespace detail {

// c with lf(f) = c * lf(g)^l, if any.
template <class C>
std::optional<C> leading_ratio(const BiPoly<C>& f, const BiPoly<C>& g, unsigned l) {
    auto lg = g.leading_form().pow(l);
    auto lf = f.leading_form();
    if (lf.size() != lg.size()) return std::nullopt;
    C c = lf.leading_coefficient() / lg.leading_coefficient();
    if (lf == lg * c) return c;
    return std::nullopt;
}

}  // namespace detail

// Degree reduction over a field. Fails with MathError on non-automorphisms.
template <class C>
TameWord<C> vdk_decompose(const PolyAutomorphism<C>& phi) {
    PolyAutomorphism<C> cur = phi;
    std::vector<ElementaryAuto<C>> stripped;  // sigma_1^{-1}, sigma_2^{-1}, ...
    const auto& ctx = phi.context();
    while (cur.degree() > 2) {
        const auto& f1 = cur.f1();
        const auto& f2 = cur.f2();
        int d1 = f1.total_degree(), d2 = f2.total_degree();
        if (d1 <= 0 || d2 <= 0) throw MathError("not an automorphism of the plane");
        // reduce the image of larger degree; on ties reduce f1
        int order[2] = {1, 2};
        if (d2 > d1) std::swap(order[0], order[1]);
        bool reduced = false;
        for (int i : order) {
            const auto& big = i == 1 ? f1 : f2;
            const auto& small = i == 1 ? f2 : f1;
            int db = big.total_degree(), ds = small.total_degree();
            if (db < ds || db % ds != 0) continue;
            auto l = static_cast<unsigned>(db / ds);
            auto c = detail::leading_ratio(big, small, l);
            if (!c) continue;
            auto term = small.pow(l) * *c;
            auto nb = big - term;
            int j = 3 - i;
            // added polynomial in the other variable: c * x_j^l
            auto added = BiPoly<C>::monomial(*c, j == 1 ? l : 0, j == 2 ? l : 0);
            stripped.emplace_back(i, added);
            cur = i == 1 ? PolyAutomorphism<C>(nb, f2) : PolyAutomorphism<C>(f1, nb);
            reduced = true;
            break;
        }
        if (!reduced) throw MathError("not an automorphism of the plane");
    }
    if (cur.f1().total_degree() != 1 || cur.f2().total_degree() != 1)
        throw MathError("not an automorphism of the plane");
    auto p = affine_parts(cur);
    if ((p.a11 * p.a22 - p.a12 * p.a21).is_zero()) throw MathError("not an automorphism of the plane");
    (void)ctx;
    TameWord<C> w;
    w.affine = cur;
    w.elementaries.assign(stripped.rbegin(), stripped.rend());
    return w;
}

template <class C>
bool is_automorphism(const PolyAutomorphism<C>& phi) {
    try {
        vdk_decompose(phi);
        return true;
    } catch (const MathError&) {
        return false;
    }
}

template <class C>
PolyAutomorphism<C> invert(const PolyAutomorphism<C>& phi) {
    TameWord<C> w;
    try {
        w = vdk_decompose(phi);
    } catch (const MathError&) {
        throw MathError("not an automorphism: " + phi.to_string());
    }
    return w.compose_inverse();
}

// R[x]-automorphisms as K[x]-automorphisms.
template <class F>
PolyAutomorphism<RatFunc<F>> to_frac(const PolyAutomorphism<UniPoly<F>>& phi) {
    return {to_frac(phi.f1()), to_frac(phi.f2())};
}

template <class F>
std::optional<PolyAutomorphism<UniPoly<F>>> to_poly(const PolyAutomorphism<RatFunc<F>>& phi) {
    auto a = to_poly(phi.f1());
    auto b = to_poly(phi.f2());
    if (!a || !b) return std::nullopt;
    return PolyAutomorphism<UniPoly<F>>(*a, *b);
}

// Unit of R = k[t] appearing as a Jacobian: nonzero constant in x and t.
template <class F>
bool is_unit_jacobian(const RPoly<F>& j) {
    return j.is_constant() && !j.is_zero() && j.constant_term().degree() == 0;
}

// A K-automorphism with images in R[x] and unit Jacobian restricts to R[x];
// certified by computing the K-inverse and checking it has R-coefficients.
template <class F>
PolyAutomorphism<UniPoly<F>> keller_descend(const PolyAutomorphism<RatFunc<F>>& psi) {
    auto over_r = to_poly(psi);
    if (!over_r) throw MathError("images not in R[x]");
    if (!is_unit_jacobian(over_r->jacobian())) throw MathError("jacobian not a unit");
    auto inv = to_poly(invert(psi));
    if (!inv) throw MathError("inverse has coefficients outside R");
    return *over_r;
}

}  // namespace planediag
