#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unipoly.hpp"

namespace planediag {

namespace detail {

template <class C>
void add_product(C& acc, const C& a, const C& b) {
    if constexpr (requires { acc.add_product(a, b); })
        acc.add_product(a, b);
    else
        acc += a * b;
}

}  // namespace detail

// Exponent pair of x1^e1 * x2^e2.
struct Monomial {
    std::uint32_t e1 = 0;
    std::uint32_t e2 = 0;

    int degree() const { return static_cast<int>(e1 + e2); }
    // Graded-lex key: larger key means larger monomial (x1 > x2).
    std::uint64_t key() const { return (static_cast<std::uint64_t>(e1 + e2) << 32) | e1; }
    static Monomial from_key(std::uint64_t k) {
        auto d = static_cast<std::uint32_t>(k >> 32);
        auto e1 = static_cast<std::uint32_t>(k & 0xffffffffu);
        return {e1, d - e1};
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e1 == b.e1 && a.e2 == b.e2; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
    friend Monomial operator*(const Monomial& a, const Monomial& b) { return {a.e1 + b.e1, a.e2 + b.e2}; }
};

// Sparse polynomial in x1, x2 over a coefficient ring C (k, k[t], k(t) or
// kappa). Terms are kept in strictly decreasing graded-lex order with no zero
// coefficients.
template <class C>
class BiPoly {
public:
    using coeff_type = C;
    using ring_context = typename C::context_type;
    using Term = std::pair<Monomial, C>;

    BiPoly() = default;
    explicit BiPoly(ring_context ctx) : ctx_(std::move(ctx)) {}

    static BiPoly constant(const C& c) { return monomial(c, 0, 0); }
    static BiPoly monomial(const C& c, std::uint32_t e1, std::uint32_t e2) {
        BiPoly r(c.context());
        if (!c.is_zero()) r.terms_.emplace_back(Monomial{e1, e2}, c);
        return r;
    }
    static BiPoly variable(const ring_context& ctx, int i) {
        return i == 1 ? monomial(ctx.one(), 1, 0) : monomial(ctx.one(), 0, 1);
    }
    // Builds from arbitrary (unsorted, possibly repeated) terms.
    static BiPoly from_terms(const ring_context& ctx, std::vector<Term> terms) {
        BiPoly r(ctx);
        r.terms_ = std::move(terms);
        r.canonicalize();
        return r;
    }

    const ring_context& context() const { return ctx_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.degree() == 0); }
    bool is_one() const { return is_constant() && !is_zero() && terms_[0].second.is_one(); }
    int total_degree() const { return terms_.empty() ? kDegreeOfZero : terms_.front().first.degree(); }
    int degree_in(int var) const {
        int d = kDegreeOfZero;
        for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(var == 1 ? m.e1 : m.e2));
        return d;
    }

    C coefficient(std::uint32_t e1, std::uint32_t e2) const {
        Monomial m{e1, e2};
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m.key(),
                                   [](const Term& t, std::uint64_t k) { return t.first.key() > k; });
        if (it != terms_.end() && it->first == m) return it->second;
        return ctx_.zero();
    }
    C constant_term() const { return coefficient(0, 0); }
    const Term& leading_term() const { return terms_.front(); }
    C leading_coefficient() const { return terms_.empty() ? ctx_.zero() : terms_.front().second; }

    // Sum of the terms of top total degree.
    BiPoly leading_form() const { return homogeneous_part(total_degree()); }
    BiPoly homogeneous_part(int d) const {
        BiPoly r(ctx_);
        for (const auto& t : terms_)
            if (t.first.degree() == d) r.terms_.push_back(t);
        return r;
    }
    // True when no monomial involves x_var.
    bool free_of(int var) const { return degree_in(var) <= 0; }

    BiPoly operator-() const {
        BiPoly r = *this;
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }
    BiPoly& operator+=(const BiPoly& o) { return *this = merge(*this, o, false); }
    BiPoly& operator-=(const BiPoly& o) { return *this = merge(*this, o, true); }
    BiPoly& operator*=(const BiPoly& o) { return *this = *this * o; }
    BiPoly& operator*=(const C& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& t : terms_) t.second *= s;
        drop_zeros();
        return *this;
    }

    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) { return merge(a, b, false); }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) { return merge(a, b, true); }
    friend BiPoly operator*(BiPoly a, const C& s) { return a *= s; }
    friend BiPoly operator*(const C& s, BiPoly a) { return a *= s; }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        if (a.is_zero() || b.is_zero()) return BiPoly(a.ctx_);
        if (b.terms_.size() == 1 && b.terms_[0].first.degree() == 0) return a * b.terms_[0].second;
        if (a.terms_.size() == 1 && a.terms_[0].first.degree() == 0) return b * a.terms_[0].second;
        std::uint32_t m1 = 0, m2 = 0;
        for (const auto* x : {&a, &b}) {
            std::uint32_t d1 = 0, d2 = 0;
            for (const auto& [m, c] : x->terms_) d1 = std::max(d1, m.e1), d2 = std::max(d2, m.e2);
            m1 += d1;
            m2 += d2;
        }
        std::size_t w = static_cast<std::size_t>(m1) + 1, cells = w * (static_cast<std::size_t>(m2) + 1);
        std::vector<Term> out;
        if (cells <= 4 * a.terms_.size() * b.terms_.size() + 64) {
            std::vector<C> grid(cells, a.ctx_.zero());
            std::vector<char> used(cells, 0);
            for (const auto& [ma, ca] : a.terms_)
                for (const auto& [mb, cb] : b.terms_) {
                    std::size_t at = (ma.e2 + mb.e2) * w + ma.e1 + mb.e1;
                    detail::add_product(grid[at], ca, cb);
                    used[at] = 1;
                }
            for (std::size_t at = 0; at < cells; ++at)
                if (used[at]) out.emplace_back(Monomial{static_cast<std::uint32_t>(at % w), static_cast<std::uint32_t>(at / w)},
                                               std::move(grid[at]));
        } else {
            std::unordered_map<std::uint64_t, C> acc;
            for (const auto& [ma, ca] : a.terms_)
                for (const auto& [mb, cb] : b.terms_)
                    detail::add_product(acc.try_emplace((ma * mb).key(), a.ctx_.zero()).first->second, ca, cb);
            for (auto& [k, c] : acc) out.emplace_back(Monomial::from_key(k), std::move(c));
        }
        return from_terms(a.ctx_, std::move(out));
    }
    friend bool operator==(const BiPoly& a, const BiPoly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].first != b.terms_[i].first || a.terms_[i].second != b.terms_[i].second) return false;
        return true;
    }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    BiPoly pow(unsigned e) const {
        BiPoly r = BiPoly::constant(ctx_.one());
        BiPoly b = *this;
        while (e) {
            if (e & 1) r *= b;
            e >>= 1;
            if (e) b *= b;
        }
        return r;
    }

    // d/dx_var
    BiPoly derivative(int var) const {
        BiPoly r(ctx_);
        for (const auto& [m, c] : terms_) {
            std::uint32_t e = var == 1 ? m.e1 : m.e2;
            if (e == 0) continue;
            Monomial nm = var == 1 ? Monomial{m.e1 - 1, m.e2} : Monomial{m.e1, m.e2 - 1};
            C nc = c * ctx_.from_int(static_cast<long long>(e));
            if (!nc.is_zero()) r.terms_.emplace_back(nm, nc);
        }
        r.canonicalize();
        return r;
    }

    // f(g1, g2). Horner in g1 over slices that are linear combinations of
    // cached powers of g2.
    BiPoly substitute(const BiPoly& g1, const BiPoly& g2) const {
        BiPoly result(ctx_);
        if (is_zero()) return result;
        int max_e1 = degree_in(1), max_e2 = degree_in(2);
        std::vector<BiPoly> pow2;
        pow2.reserve(static_cast<std::size_t>(max_e2) + 1);
        pow2.push_back(BiPoly::constant(ctx_.one()));
        for (int i = 1; i <= max_e2; ++i) pow2.push_back(pow2.back() * g2);
        std::vector<std::vector<const Term*>> slices(static_cast<std::size_t>(max_e1) + 1);
        for (const auto& t : terms_) slices[t.first.e1].push_back(&t);
        for (int a = max_e1; a >= 0; --a) {
            if (a != max_e1) result = result * g1;
            if (slices[a].empty()) continue;
            std::vector<Term> acc;
            for (const Term* t : slices[a])
                for (const auto& [m, c] : pow2[t->first.e2].terms_) acc.emplace_back(m, t->second * c);
            result += BiPoly::from_terms(ctx_, std::move(acc));
        }
        return result;
    }

    template <class D, class Fn>
    BiPoly<D> map_coefficients(const typename D::context_type& target, Fn&& fn) const {
        std::vector<typename BiPoly<D>::Term> out;
        out.reserve(terms_.size());
        for (const auto& [m, c] : terms_) {
            D d = fn(c);
            if (!d.is_zero()) out.emplace_back(m, std::move(d));
        }
        return BiPoly<D>::from_terms(target, std::move(out));
    }

    std::string to_string() const;

private:
    static BiPoly merge(const BiPoly& a, const BiPoly& b, bool subtract) {
        BiPoly r(a.terms_.empty() && !b.terms_.empty() ? b.ctx_ : a.ctx_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() ||
                (i < a.terms_.size() && a.terms_[i].first.key() > b.terms_[j].first.key())) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].first.key() > a.terms_[i].first.key()) {
                r.terms_.emplace_back(b.terms_[j].first, subtract ? -b.terms_[j].second : b.terms_[j].second);
                ++j;
            } else {
                C c = subtract ? a.terms_[i].second - b.terms_[j].second : a.terms_[i].second + b.terms_[j].second;
                if (!c.is_zero()) r.terms_.emplace_back(a.terms_[i].first, std::move(c));
                ++i;
                ++j;
            }
        }
        return r;
    }
    void canonicalize() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& x, const Term& y) { return x.first.key() > y.first.key(); });
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!out.empty() && out.back().first == t.first)
                out.back().second += t.second;
            else
                out.push_back(std::move(t));
        }
        terms_ = std::move(out);
        drop_zeros();
    }
    void drop_zeros() {
        terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const Term& t) { return t.second.is_zero(); }),
                     terms_.end());
    }

    std::vector<Term> terms_;
    ring_context ctx_{};
};

namespace detail {

inline std::string monomial_string(const Monomial& m) {
    std::string s;
    auto var = [&](const char* name, std::uint32_t e) {
        if (e == 0) return;
        if (!s.empty()) s += "*";
        s += name;
        if (e > 1) s += "^" + std::to_string(e);
    };
    var("x1", m.e1);
    var("x2", m.e2);
    return s;
}

// Splits a coefficient's printed form into (negative?, body, needs parens).
inline std::tuple<bool, std::string, bool> split_sign(std::string cs) {
    bool compound = cs.find(' ') != std::string::npos || cs.find('/') != std::string::npos;
    if (!compound && !cs.empty() && cs[0] == '-') return {true, cs.substr(1), false};
    if (compound && cs.front() == '(') compound = false;  // already parenthesized
    return {false, cs, compound};
}

}  // namespace detail

template <class C>
std::string BiPoly<C>::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        auto [neg, body, paren] = detail::split_sign(c.to_string());
        std::string mono = detail::monomial_string(m);
        std::string term;
        if (mono.empty())
            term = paren ? "(" + body + ")" : body;
        else if (body == "1")
            term = mono;
        else
            term = (paren ? "(" + body + ")" : body) + "*" + mono;
        if (out.empty())
            out = (neg ? "-" : "") + term;
        else
            out += (neg ? " - " : " + ") + term;
    }
    return out;
}

// det of the Jacobian matrix of (f1, f2).
template <class C>
BiPoly<C> poly_substitute(const BiPoly<C>& f, const BiPoly<C>& g1, const BiPoly<C>& g2) {
    return f.substitute(g1, g2);
}

template <class C>
BiPoly<C> jacobian_det(const BiPoly<C>& f1, const BiPoly<C>& f2) {
    return f1.derivative(1) * f2.derivative(2) - f1.derivative(2) * f2.derivative(1);
}

}  // namespace planediag
