#pragma once

#include <optional>
#include <string>
#include <vector>

#include "automorphism.hpp"

namespace planediag {

// Letters of the amalgamated product Aut = A *_B J over a field, with A the
// affine maps, J the triangular maps (a x1 + c, b x2 + f(x1)) and B = A n J.
enum class LetterType { affine, triangular, both };

template <class C>
std::optional<LetterType> classify_letter(const PolyAutomorphism<C>& phi) {
    const auto& f1 = phi.f1();
    const auto& f2 = phi.f2();
    bool affine = phi.is_affine();
    bool tri = f1.total_degree() <= 1 && f1.free_of(2);
    if (tri)
        for (const auto& [m, c] : f2.terms())
            if (m.e2 > 1 || (m.e2 == 1 && m.e1 > 0)) {
                tri = false;
                break;
            }
    if (affine && tri) return LetterType::both;
    if (affine) return LetterType::affine;
    if (tri) return LetterType::triangular;
    return std::nullopt;
}

template <class C>
struct Letter {
    LetterType type;
    PolyAutomorphism<C> map;

    explicit Letter(PolyAutomorphism<C> m) : map(std::move(m)) {
        auto t = classify_letter(map);
        if (!t) throw AssertionFailure("map is neither affine nor triangular");
        type = *t;
    }
    Letter inverse() const {
        if (type != LetterType::triangular) return Letter(invert_affine(map));
        // (a x1 + c, b x2 + f(x1))^{-1} = ((x1 - c)/a, (x2 - f((x1 - c)/a))/b)
        const auto& ctx = map.context();
        using P = BiPoly<C>;
        C a = map.f1().coefficient(1, 0), c = map.f1().constant_term(), b = map.f2().coefficient(0, 1);
        P u = (P::variable(ctx, 1) - P::constant(c)) * a.inv();
        P f = map.f2() - P::monomial(b, 0, 1);
        P v = (P::variable(ctx, 2) - f.substitute(u, P::variable(ctx, 2))) * b.inv();
        return Letter(PolyAutomorphism<C>(u, v));
    }
    bool in_base() const { return type == LetterType::both; }
};

// Reduced word l_1 o ... o l_n: adjacent letters have different types and no
// letter lies in B, except that a word of length one may be a B-letter.
template <class C>
class AmalgamWord {
public:
    using ring_context = typename C::context_type;

    explicit AmalgamWord(ring_context ctx) : ctx_(std::move(ctx)) {}

    static AmalgamWord from_letter(const Letter<C>& l) {
        AmalgamWord w(l.map.context());
        w.push_back(l);
        return w;
    }

    // From a tame decomposition: type-1 elementaries become swap o J o swap.
    static AmalgamWord from_automorphism(const PolyAutomorphism<C>& phi) {
        auto tw = vdk_decompose(phi);
        const auto& ctx = phi.context();
        AmalgamWord w(ctx);
        w.push_back(Letter<C>(tw.affine));
        auto s = Letter<C>(PolyAutomorphism<C>::swap(ctx));
        for (const auto& e : tw.elementaries) {
            if (e.index == 2) {
                w.push_back(Letter<C>(e.automorphism()));
            } else {
                auto g = e.f.substitute(BiPoly<C>::variable(ctx, 2), BiPoly<C>::variable(ctx, 1));
                w.push_back(s);
                w.push_back(Letter<C>(ElementaryAuto<C>(2, g).automorphism()));
                w.push_back(s);
            }
        }
        return w;
    }

    const std::vector<Letter<C>>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    const ring_context& context() const { return ctx_; }

    void push_back(Letter<C> x) {
        while (!letters_.empty()) {
            const auto& top = letters_.back();
            if (top.type != x.type && !top.in_base() && !x.in_base()) break;
            x = Letter<C>(compose(top.map, x.map));
            letters_.pop_back();
        }
        if (x.in_base() && x.map.is_identity()) return;
        letters_.push_back(std::move(x));
    }

    AmalgamWord& operator*=(const AmalgamWord& o) {
        for (const auto& l : o.letters_) push_back(l);
        return *this;
    }
    friend AmalgamWord operator*(AmalgamWord a, const AmalgamWord& b) { return a *= b; }

    AmalgamWord inverse() const {
        AmalgamWord w(ctx_);
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.push_back(it->inverse());
        return w;
    }
    AmalgamWord pow(unsigned long long e) const {
        AmalgamWord r(ctx_);
        for (unsigned long long i = 0; i < e; ++i) r *= *this;
        return r;
    }

    bool is_identity() const { return letters_.empty(); }
    // Lies in the vertex stabilizer of the given type.
    bool in_factor(LetterType t) const {
        return letters_.empty() || (letters_.size() == 1 && (letters_[0].type == t || letters_[0].in_base()));
    }

    PolyAutomorphism<C> expand() const {
        if (letters_.empty()) return PolyAutomorphism<C>::identity(ctx_);
        PolyAutomorphism<C> cur = letters_.back().map;
        for (auto it = letters_.rbegin() + 1; it != letters_.rend(); ++it) cur = compose(it->map, cur);
        return cur;
    }

private:
    ring_context ctx_;
    std::vector<Letter<C>> letters_;
};

}  // namespace planediag
