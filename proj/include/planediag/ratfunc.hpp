#pragma once

#include <string>

#include "unipoly.hpp"

namespace planediag {

template <class F>
class RatFunc;

template <class F>
class FracField {
public:
    using base_context = typename F::context_type;

    FracField() = default;
    explicit FracField(base_context base) : base_(base) {}

    const base_context& base() const { return base_; }
    std::uint64_t characteristic() const { return base_.characteristic(); }
    PolyRing<F> ring() const { return PolyRing<F>(base_); }

    RatFunc<F> zero() const { return RatFunc<F>(ring().zero()); }
    RatFunc<F> one() const { return RatFunc<F>(ring().one()); }
    RatFunc<F> from_int(long long v) const { return RatFunc<F>(ring().from_int(v)); }
    RatFunc<F> from_base(const F& c) const { return RatFunc<F>(ring().from_base(c)); }
    RatFunc<F> t() const { return RatFunc<F>(ring().t()); }

    std::string to_string() const { return base_.to_string() + "(t)"; }
    friend bool operator==(const FracField& a, const FracField& b) { return a.base_ == b.base_; }

private:
    base_context base_{};
};

// Element of k(t): reduced fraction with monic denominator.
template <class F>
class RatFunc {
public:
    using context_type = FracField<F>;
    using base_field = F;
    using Poly = UniPoly<F>;

    RatFunc() = default;
    explicit RatFunc(Poly num) : num_(std::move(num)), den_(num_.context().one()) {}
    RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw MathError("rational function with zero denominator");
        normalize();
    }

    context_type context() const { return context_type(num_.base()); }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_polynomial() const { return den_.is_one(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }

    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    RatFunc& operator+=(const RatFunc& o) {
        if (den_.is_one() && o.den_.is_one()) {
            num_ += o.num_;
            return *this;
        }
        if (den_ == o.den_) {
            num_ += o.num_;
            normalize();
            return *this;
        }
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ = den_ * o.den_;
        normalize();
        return *this;
    }
    RatFunc& operator-=(const RatFunc& o) { return *this += -o; }
    RatFunc& operator*=(const RatFunc& o) {
        if (den_.is_one() && o.den_.is_one()) {
            num_ *= o.num_;
            return *this;
        }
        // cross-cancel before multiplying
        auto g1 = gcd(num_, o.den_);
        auto g2 = gcd(o.num_, den_);
        Poly n1 = g1.is_one() ? num_ : num_.divexact(g1);
        Poly d2 = g1.is_one() ? o.den_ : o.den_.divexact(g1);
        Poly n2 = g2.is_one() ? o.num_ : o.num_.divexact(g2);
        Poly d1 = g2.is_one() ? den_ : den_.divexact(g2);
        num_ = n1 * n2;
        den_ = d1 * d2;
        fix_sign();
        return *this;
    }
    RatFunc& operator/=(const RatFunc& o) { return *this *= o.inv(); }

    friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
    friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
    friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
    friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    RatFunc inv() const {
        if (is_zero()) throw MathError("division by zero in " + context().to_string());
        RatFunc r;
        r.num_ = den_;
        r.den_ = num_;
        r.fix_sign();
        return r;
    }

    int compare(const RatFunc& o) const {
        int c = num_.compare(o.num_);
        return c ? c : den_.compare(o.den_);
    }

    std::string to_string() const {
        if (den_.is_one()) return num_.to_string();
        return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
    }

private:
    void fix_sign() {
        if (num_.is_zero()) {
            den_ = num_.context().one();
            return;
        }
        if (!den_.lc().is_one()) {
            F inv = den_.lc().inv();
            num_ *= inv;
            den_ *= inv;
        }
    }
    void normalize() {
        if (num_.is_zero()) {
            den_ = num_.context().one();
            return;
        }
        if (!den_.is_constant()) {
            auto g = gcd(num_, den_);
            if (!g.is_one()) {
                num_ = num_.divexact(g);
                den_ = den_.divexact(g);
            }
        }
        fix_sign();
    }

    Poly num_;
    Poly den_;
};

}  // namespace planediag
