#pragma once

#include <algorithm>
#include <climits>
#include <random>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "field.hpp"

namespace planediag {

// Degree of the zero polynomial.
inline constexpr int kDegreeOfZero = INT_MIN;

template <class F>
class UniPoly;

template <class F>
class PolyRing {
public:
    using base_context = typename F::context_type;

    PolyRing() = default;
    explicit PolyRing(base_context base) : base_(base) {}

    const base_context& base() const { return base_; }
    std::uint64_t characteristic() const { return base_.characteristic(); }

    UniPoly<F> zero() const { return UniPoly<F>(base_); }
    UniPoly<F> one() const { return UniPoly<F>(base_.one()); }
    UniPoly<F> from_int(long long v) const { return UniPoly<F>(base_.from_int(v)); }
    UniPoly<F> from_base(const F& c) const { return UniPoly<F>(c); }
    UniPoly<F> t() const { return UniPoly<F>::monomial(base_.one(), 1); }

    std::string to_string() const { return base_.to_string() + "[t]"; }
    friend bool operator==(const PolyRing& a, const PolyRing& b) { return a.base_ == b.base_; }

private:
    base_context base_{};
};

// Dense univariate polynomial in t over a field. Coefficients are indexed by
// degree; the leading coefficient is nonzero unless the polynomial is zero.
template <class F>
class UniPoly {
public:
    using context_type = PolyRing<F>;
    using base_field = F;
    using base_context = typename F::context_type;

    UniPoly() = default;
    explicit UniPoly(base_context base) : base_(base) {}
    explicit UniPoly(const F& c) : base_(c.context()) {
        if (!c.is_zero()) c_.push_back(c);
    }
    UniPoly(base_context base, std::vector<F> coeffs) : c_(std::move(coeffs)), base_(base) { trim(); }

    static UniPoly monomial(const F& c, int deg) {
        UniPoly r(c.context());
        if (c.is_zero()) return r;
        r.c_.assign(static_cast<std::size_t>(deg) + 1, c.context().zero());
        r.c_[deg] = c;
        return r;
    }

    context_type context() const { return context_type(base_); }
    const base_context& base() const { return base_; }

    int degree() const { return c_.empty() ? kDegreeOfZero : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    bool is_constant() const { return c_.size() <= 1; }
    F coeff(int i) const {
        return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : base_.zero();
    }
    F lc() const { return c_.empty() ? base_.zero() : c_.back(); }
    const std::vector<F>& coeffs() const { return c_; }

    UniPoly operator-() const {
        UniPoly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    UniPoly& operator+=(const UniPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), base_.zero());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    UniPoly& operator-=(const UniPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), base_.zero());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }
    UniPoly& operator*=(const F& s) {
        if (s.is_zero()) {
            c_.clear();
            return *this;
        }
        for (auto& x : c_) x *= s;
        return *this;
    }

    friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
    friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        UniPoly r(a.base_);
        r.add_product(a, b);
        return r;
    }
    // *this += a * b without a temporary.
    void add_product(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return;
        std::size_t n = a.c_.size() + b.c_.size() - 1;
        if (c_.size() < n) c_.resize(n, base_.zero());
        if constexpr (std::is_same_v<F, Fp>) {
            if (a.base_.modulus() < (1ull << 40)) {
                add_product_delayed(a, b, n);
                return;
            }
        }
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c_[i + j] += a.c_[i] * b.c_[j];
        }
        trim();
    }

private:
    // Moduli below 2^40 keep sum of products under 2^128: one modulo per output coefficient.
    void add_product_delayed(const UniPoly& a, const UniPoly& b, std::size_t n) {
        std::uint64_t p = a.base_.modulus();
        std::vector<unsigned __int128> acc(n, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            std::uint64_t x = a.c_[i].value();
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] += static_cast<unsigned __int128>(x) * b.c_[j].value();
        }
        for (std::size_t k = 0; k < n; ++k)
            if (acc[k] != 0) c_[k] += Fp(static_cast<std::uint64_t>(acc[k] % p), p);
        trim();
    }

public:
    friend UniPoly operator*(UniPoly a, const F& s) { return a *= s; }
    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

    // Quotient and remainder; the divisor must be nonzero.
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const {
        if (d.is_zero()) throw MathError("polynomial division by zero");
        UniPoly q(base_), r = *this;
        if (degree() < d.degree()) return {q, r};
        q.c_.assign(static_cast<std::size_t>(degree() - d.degree()) + 1, base_.zero());
        F inv_lc = d.lc().inv();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int shift = r.degree() - d.degree();
            F c = r.lc() * inv_lc;
            q.c_[shift] = c;
            for (std::size_t j = 0; j < d.c_.size(); ++j) r.c_[shift + j] -= c * d.c_[j];
            r.trim();
        }
        q.trim();
        return {q, r};
    }
    UniPoly operator%(const UniPoly& d) const { return divmod(d).second; }

    // Exact division; throws if d does not divide *this.
    UniPoly divexact(const UniPoly& d) const {
        auto [q, r] = divmod(d);
        if (!r.is_zero()) throw AssertionFailure("inexact polynomial division");
        return q;
    }
    bool divides(const UniPoly& f) const { return (f % *this).is_zero(); }

    UniPoly monic() const {
        if (is_zero()) return *this;
        UniPoly r = *this;
        r *= lc().inv();
        return r;
    }
    bool is_monic() const { return !is_zero() && lc().is_one(); }

    UniPoly derivative() const {
        UniPoly r(base_);
        for (std::size_t i = 1; i < c_.size(); ++i)
            r.c_.push_back(c_[i] * base_.from_int(static_cast<long long>(i)));
        r.trim();
        return r;
    }

    F eval(const F& x) const {
        F acc = base_.zero();
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    // Canonical order: degree first, then coefficients from the top down.
    int compare(const UniPoly& o) const {
        if (degree() != o.degree()) return degree() < o.degree() ? -1 : 1;
        for (int i = degree(); i >= 0; --i) {
            int c = c_[i].compare(o.c_[i]);
            if (c) return c;
        }
        return 0;
    }

    std::string to_string(const std::string& var = "t") const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<F> c_;
    base_context base_{};
};

template <class F>
std::string coefficient_string(const F& c) {
    return c.to_string();
}

template <class F>
std::string UniPoly<F>::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        if (c_[i].is_zero()) continue;
        std::string cs = c_[i].to_string();
        bool neg = !cs.empty() && cs[0] == '-';
        if (neg) cs = cs.substr(1);
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        if (mono.empty())
            out += cs;
        else if (cs == "1")
            out += mono;
        else
            out += cs + "*" + mono;
    }
    return out;
}

template <class F>
UniPoly<F> gcd(UniPoly<F> a, UniPoly<F> b) {
    while (!b.is_zero()) {
        auto r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// Returns (g, s, u) with s*a + u*b = g, g monic (or zero).
template <class F>
std::tuple<UniPoly<F>, UniPoly<F>, UniPoly<F>> xgcd(const UniPoly<F>& a, const UniPoly<F>& b) {
    auto ring = a.context();
    UniPoly<F> r0 = a, r1 = b, s0 = ring.one(), s1 = ring.zero(), t0 = ring.zero(), t1 = ring.one();
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        auto s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        auto t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    F inv = r0.lc().inv();
    r0 *= inv;
    s0 *= inv;
    t0 *= inv;
    return {r0, s0, t0};
}

template <class F>
UniPoly<F> powmod(UniPoly<F> base, unsigned long long e, const UniPoly<F>& m) {
    UniPoly<F> r = base.context().one() % m;
    base = base % m;
    while (e) {
        if (e & 1) r = (r * base) % m;
        e >>= 1;
        if (e) base = (base * base) % m;
    }
    return r;
}

// Irreducible factorization: f = unit * prod factors[i].first ^ factors[i].second.
template <class F>
struct UniFactorization {
    F unit;
    std::vector<std::pair<UniPoly<F>, int>> factors;

    int count_with_multiplicity() const {
        int m = 0;
        for (const auto& f : factors) m += f.second;
        return m;
    }
    UniPoly<F> expand() const {
        UniPoly<F> r(unit);
        for (const auto& [f, e] : factors) r *= power(f, static_cast<unsigned long long>(e));
        return r;
    }
};

namespace detail {

template <class F>
void sort_factors(std::vector<std::pair<UniPoly<F>, int>>& fs) {
    std::sort(fs.begin(), fs.end(), [](const auto& a, const auto& b) {
        int c = a.first.compare(b.first);
        return c != 0 ? c < 0 : a.second < b.second;
    });
    // merge equal factors
    std::vector<std::pair<UniPoly<F>, int>> out;
    for (auto& f : fs) {
        if (!out.empty() && out.back().first == f.first)
            out.back().second += f.second;
        else
            out.push_back(std::move(f));
    }
    fs = std::move(out);
}

// p-th root of a polynomial whose derivative vanishes over GF(p).
inline UniPoly<Fp> pth_root(const UniPoly<Fp>& f) {
    std::uint64_t p = f.base().modulus();
    std::vector<Fp> c;
    for (int i = 0; i <= f.degree(); i += static_cast<int>(p)) c.push_back(f.coeff(i));
    return UniPoly<Fp>(f.base(), c);
}

// Squarefree decomposition of a monic polynomial over GF(p) (Musser).
inline std::vector<std::pair<UniPoly<Fp>, int>> squarefree(const UniPoly<Fp>& f) {
    std::vector<std::pair<UniPoly<Fp>, int>> out;
    if (f.degree() <= 0) return out;
    std::uint64_t p = f.base().modulus();
    auto df = f.derivative();
    if (df.is_zero()) {
        for (auto& [g, e] : squarefree(pth_root(f))) out.emplace_back(g, e * static_cast<int>(p));
        return out;
    }
    auto c = gcd(f, df);
    auto w = f.divexact(c);
    int i = 1;
    while (w.degree() > 0) {
        auto y = gcd(w, c);
        auto z = w.divexact(y);
        if (z.degree() > 0) out.emplace_back(z, i);
        ++i;
        w = y;
        c = c.divexact(y);
    }
    if (c.degree() > 0) {
        for (auto& [g, e] : squarefree(pth_root(c))) out.emplace_back(g, e * static_cast<int>(p));
    }
    return out;
}

// Distinct-degree factorization of a squarefree monic polynomial.
inline std::vector<std::pair<UniPoly<Fp>, int>> distinct_degree(UniPoly<Fp> f) {
    std::vector<std::pair<UniPoly<Fp>, int>> out;
    std::uint64_t p = f.base().modulus();
    auto x = f.context().t();
    auto h = x;
    int d = 0;
    while (f.degree() >= 2 * (d + 1)) {
        ++d;
        h = powmod(h, p, f);
        auto g = gcd(f, h - x);
        if (g.degree() > 0) {
            out.emplace_back(g, d);
            f = f.divexact(g);
            h = h % f;
        }
    }
    if (f.degree() > 0) out.emplace_back(f, f.degree());
    return out;
}

// Cantor-Zassenhaus equal-degree splitting.
inline void equal_degree(const UniPoly<Fp>& f, int d, std::mt19937_64& rng, std::vector<UniPoly<Fp>>& out) {
    if (f.degree() == d) {
        out.push_back(f);
        return;
    }
    std::uint64_t p = f.base().modulus();
    auto ctx = f.base();
    std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
    for (;;) {
        std::vector<Fp> c;
        for (int i = 0; i < f.degree(); ++i) c.push_back(Fp(dist(rng), p));
        UniPoly<Fp> a(ctx, c);
        if (a.degree() <= 0) continue;
        auto g = gcd(a, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(f.divexact(g), d, rng, out);
            return;
        }
        UniPoly<Fp> b(ctx);
        if (p == 2) {
            // trace map a + a^2 + ... + a^(2^(d-1))
            auto term = a;
            b = a;
            for (int i = 1; i < d; ++i) {
                term = (term * term) % f;
                b += term;
            }
        } else {
            unsigned long long e = 1;
            for (int i = 0; i < d; ++i) e *= p;
            b = powmod(a, (e - 1) / 2, f) - f.context().one();
        }
        g = gcd(b, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(f.divexact(g), d, rng, out);
            return;
        }
    }
}

}  // namespace detail

// Factorization over GF(p): squarefree, distinct-degree, then equal-degree
// splitting. Deterministic (fixed seed).
inline UniFactorization<Fp> uni_factor(const UniPoly<Fp>& f) {
    if (f.is_zero()) throw MathError("cannot factor zero");
    UniFactorization<Fp> out{f.lc(), {}};
    std::mt19937_64 rng(0x5eed);
    for (auto& [g, e] : detail::squarefree(f.monic())) {
        for (auto& [h, d] : detail::distinct_degree(g)) {
            std::vector<UniPoly<Fp>> parts;
            detail::equal_degree(h, d, rng, parts);
            for (auto& q : parts) out.factors.emplace_back(q.monic(), e);
        }
    }
    detail::sort_factors(out.factors);
    return out;
}

namespace detail {

inline std::vector<mpz_class> divisors(mpz_class n) {
    if (n < 0) n = -n;
    if (n > mpz_class("1000000000000"))
        throw MathError("rational root search: coefficient too large");
    std::vector<mpz_class> ds;
    for (mpz_class d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            ds.push_back(d);
            if (d * d != n) ds.push_back(n / d);
        }
    }
    return ds;
}

}  // namespace detail

// Factorization over QQ, restricted to what desk-scale inputs need: linear
// factors by rational roots, and a remaining cofactor of degree <= 3 without
// roots (which is then irreducible).
inline UniFactorization<Rational> uni_factor(const UniPoly<Rational>& f) {
    if (f.is_zero()) throw MathError("cannot factor zero");
    UniFactorization<Rational> out{f.lc(), {}};
    auto g = f.monic();
    auto ring = f.context();
    for (;;) {
        if (g.degree() <= 0) break;
        if (g.coeff(0).is_zero()) {
            out.factors.emplace_back(ring.t(), 1);
            g = g.divexact(ring.t());
            continue;
        }
        // integer-scaled copy
        mpz_class den = 1;
        for (const auto& c : g.coeffs()) den = lcm(den, mpz_class(c.value().get_den()));
        mpz_class lead = den, cst = mpz_class(g.coeff(0).value() * den);
        bool found = false;
        for (const auto& a : detail::divisors(cst)) {
            for (const auto& b : detail::divisors(lead)) {
                for (int sgn : {1, -1}) {
                    Rational r(mpq_class(a * sgn, b));
                    if (g.eval(r).is_zero()) {
                        auto lin = ring.t() - ring.from_base(r);
                        out.factors.emplace_back(lin, 1);
                        g = g.divexact(lin);
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
        if (found) continue;
        if (g.degree() > 3)
            throw MathError("factorization over QQ of a root-free polynomial of degree > 3 is not supported");
        out.factors.emplace_back(g, 1);
        break;
    }
    detail::sort_factors(out.factors);
    return out;
}

template <class F>
bool is_irreducible(const UniPoly<F>& f) {
    if (f.degree() <= 0) return false;
    auto fac = uni_factor(f);
    return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

}  // namespace planediag
