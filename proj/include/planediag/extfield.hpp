#pragma once

#include <memory>
#include <string>

#include "unipoly.hpp"

namespace planediag {

template <class F>
class ExtElem;

// kappa = k[t]/(pi) for a monic irreducible pi. Elements are canonical
// representatives of degree < deg pi.
template <class F>
class ExtField {
public:
    using base_context = typename F::context_type;
    using Poly = UniPoly<F>;

    ExtField() = default;

    // Checks irreducibility through the factorization routine.
    static ExtField make(const Poly& modulus) {
        if (modulus.degree() < 1 || !is_irreducible(modulus))
            throw MathError("modulus not irreducible: " + modulus.to_string());
        return ExtField(std::make_shared<const Poly>(modulus.monic()));
    }

    const Poly& modulus() const { return *mod_; }
    bool valid() const { return mod_ != nullptr; }
    const base_context& base() const { return mod_->base(); }
    std::uint64_t characteristic() const { return base().characteristic(); }
    int degree() const { return mod_->degree(); }

    ExtElem<F> zero() const { return ExtElem<F>(*this, mod_->context().zero()); }
    ExtElem<F> one() const { return ExtElem<F>(*this, mod_->context().one()); }
    ExtElem<F> from_int(long long v) const { return ExtElem<F>(*this, mod_->context().from_int(v)); }
    ExtElem<F> from_base(const F& c) const { return ExtElem<F>(*this, mod_->context().from_base(c)); }
    ExtElem<F> reduce(const Poly& p) const { return ExtElem<F>(*this, p); }

    std::string to_string() const { return base().to_string() + "[t]/(" + mod_->to_string() + ")"; }
    friend bool operator==(const ExtField& a, const ExtField& b) {
        return a.mod_ == b.mod_ || (a.mod_ && b.mod_ && *a.mod_ == *b.mod_);
    }

private:
    explicit ExtField(std::shared_ptr<const Poly> m) : mod_(std::move(m)) {}
    std::shared_ptr<const Poly> mod_;
};

template <class F>
class ExtElem {
public:
    using context_type = ExtField<F>;
    using base_field = F;
    using Poly = UniPoly<F>;

    ExtElem() = default;
    ExtElem(ExtField<F> field, const Poly& p) : field_(std::move(field)), rep_(p % field_.modulus()) {}

    const context_type& context() const { return field_; }
    const Poly& representative() const { return rep_; }

    bool is_zero() const { return rep_.is_zero(); }
    bool is_one() const { return rep_.is_one(); }

    ExtElem operator-() const { return ExtElem(field_, -rep_, raw{}); }
    ExtElem& operator+=(const ExtElem& o) {
        adopt(o);
        rep_ += o.rep_;
        return *this;
    }
    ExtElem& operator-=(const ExtElem& o) {
        adopt(o);
        rep_ -= o.rep_;
        return *this;
    }
    ExtElem& operator*=(const ExtElem& o) {
        adopt(o);
        rep_ = (rep_ * o.rep_) % field_.modulus();
        return *this;
    }
    ExtElem& operator/=(const ExtElem& o) { return *this *= o.inv(); }

    friend ExtElem operator+(ExtElem a, const ExtElem& b) { return a += b; }
    friend ExtElem operator-(ExtElem a, const ExtElem& b) { return a -= b; }
    friend ExtElem operator*(ExtElem a, const ExtElem& b) { return a *= b; }
    friend ExtElem operator/(ExtElem a, const ExtElem& b) { return a /= b; }
    friend bool operator==(const ExtElem& a, const ExtElem& b) { return a.rep_ == b.rep_; }
    friend bool operator!=(const ExtElem& a, const ExtElem& b) { return !(a == b); }

    ExtElem inv() const {
        if (is_zero()) throw MathError("division by zero in " + field_.to_string());
        auto [g, s, u] = xgcd(rep_, field_.modulus());
        (void)u;
        if (!g.is_one()) throw MathError("modulus not irreducible");
        return ExtElem(field_, s);
    }

    int compare(const ExtElem& o) const { return rep_.compare(o.rep_); }
    std::string to_string() const {
        if (rep_.is_constant()) return rep_.to_string();
        return "(" + rep_.to_string() + ")";
    }

private:
    struct raw {};
    ExtElem(ExtField<F> field, Poly p, raw) : field_(std::move(field)), rep_(std::move(p)) {}
    void adopt(const ExtElem& o) {
        if (!field_.valid()) field_ = o.field_;
    }

    ExtField<F> field_;
    Poly rep_;
};

}  // namespace planediag
