#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace planediag {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace detail

class Fp;

// Context of GF(p): just the modulus. Elements carry it too so that
// arithmetic needs no ambient state.
class PrimeField {
public:
    PrimeField() = default;
    explicit PrimeField(std::uint64_t p) : p_(p) {}

    std::uint64_t modulus() const { return p_; }
    std::uint64_t characteristic() const { return p_; }

    inline Fp zero() const;
    inline Fp one() const;
    inline Fp from_int(long long v) const;
    inline Fp from_base(const Fp& c) const;

    std::string to_string() const { return "GF(" + std::to_string(p_) + ")"; }
    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

private:
    std::uint64_t p_ = 0;
};

class Fp {
public:
    using context_type = PrimeField;
    using base_field = Fp;

    Fp() = default;
    Fp(std::uint64_t v, std::uint64_t p) : v_(p ? v % p : v), p_(p) {}

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return p_; }
    PrimeField context() const { return PrimeField(p_); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Fp operator-() const { return Fp(v_ == 0 ? 0 : p_ - v_, p_); }
    Fp& operator+=(const Fp& o) {
        fix(o);
        v_ += o.v_;
        if (v_ >= p_) v_ -= p_;
        return *this;
    }
    Fp& operator-=(const Fp& o) {
        fix(o);
        v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
        return *this;
    }
    Fp& operator*=(const Fp& o) {
        fix(o);
        v_ = detail::mulmod(v_, o.v_, p_);
        return *this;
    }
    Fp& operator/=(const Fp& o) { return *this *= o.inv(); }

    friend Fp operator+(Fp a, const Fp& b) { return a += b; }
    friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
    friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
    friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
    friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Fp& a, const Fp& b) { return a.v_ != b.v_; }

    Fp inv() const {
        if (v_ == 0) throw MathError("division by zero in " + context().to_string());
        return Fp(detail::powmod(v_, p_ - 2, p_), p_);
    }

    // Canonical total order (by residue), used only for deterministic sorting.
    int compare(const Fp& o) const { return v_ < o.v_ ? -1 : (v_ > o.v_ ? 1 : 0); }

    // Symmetric representative in (-p/2, p/2].
    long long signed_value() const {
        return v_ > p_ / 2 ? static_cast<long long>(v_) - static_cast<long long>(p_)
                           : static_cast<long long>(v_);
    }
    std::string to_string() const { return std::to_string(signed_value()); }

private:
    void fix(const Fp& o) {
        if (p_ == 0) p_ = o.p_;
    }

    std::uint64_t v_ = 0;
    std::uint64_t p_ = 0;
};

inline Fp PrimeField::zero() const { return Fp(0, p_); }
inline Fp PrimeField::one() const { return Fp(1, p_); }
inline Fp PrimeField::from_base(const Fp& c) const { return c; }
inline Fp PrimeField::from_int(long long v) const {
    long long m = static_cast<long long>(p_);
    long long r = v % m;
    if (r < 0) r += m;
    return Fp(static_cast<std::uint64_t>(r), p_);
}

class Rational;

class RationalField {
public:
    std::uint64_t characteristic() const { return 0; }
    inline Rational zero() const;
    inline Rational one() const;
    inline Rational from_int(long long v) const;
    inline Rational from_base(const Rational& c) const;
    std::string to_string() const { return "QQ"; }
    friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

class Rational {
public:
    using context_type = RationalField;
    using base_field = Rational;

    Rational() = default;
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
    Rational(long num, long den) : q_(num, den) {
        if (den == 0) throw MathError("zero denominator");
        q_.canonicalize();
    }

    const mpq_class& value() const { return q_; }
    RationalField context() const { return {}; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw MathError("division by zero in QQ");
        q_ /= o.q_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }

    Rational inv() const {
        if (is_zero()) throw MathError("division by zero in QQ");
        return Rational(mpq_class(1 / q_));
    }
    int compare(const Rational& o) const { return cmp(q_, o.q_) < 0 ? -1 : (cmp(q_, o.q_) > 0 ? 1 : 0); }
    std::string to_string() const { return q_.get_str(); }

private:
    mpq_class q_{0};
};

inline Rational RationalField::zero() const { return Rational(0, 1); }
inline Rational RationalField::one() const { return Rational(1, 1); }
inline Rational RationalField::from_int(long long v) const { return Rational(v, 1); }
inline Rational RationalField::from_base(const Rational& c) const { return c; }

template <class T>
T power(T base, unsigned long long e) {
    T r = base.context().one();
    while (e) {
        if (e & 1) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

// The base field k, as declared in instance files: GF(p) with a fixed
// generator of GF(p)*, or QQ.
class FieldSpec {
public:
    enum class Kind { prime_field, rationals };

    static FieldSpec prime_field(std::uint64_t p) {
        check_prime(p);
        for (std::uint64_t g = 1; g < p; ++g)
            if (is_generator(p, g)) return FieldSpec(Kind::prime_field, p, g);
        throw AssertionFailure("no generator found");
    }
    static FieldSpec prime_field(std::uint64_t p, std::uint64_t g) {
        check_prime(p);
        if (!is_generator(p, g % p))
            throw MathError(std::to_string(g) + " does not generate GF(" + std::to_string(p) + ")*");
        return FieldSpec(Kind::prime_field, p, g % p);
    }
    static FieldSpec rationals() { return FieldSpec(Kind::rationals, 0, 0); }

    Kind kind() const { return kind_; }
    bool is_prime_field() const { return kind_ == Kind::prime_field; }
    std::uint64_t p() const { return p_; }
    std::uint64_t generator() const { return g_; }
    PrimeField prime_context() const { return PrimeField(p_); }

    // Order of the group of roots of unity available: p-1 for GF(p), 2 for QQ.
    std::uint64_t unit_group_exponent() const { return is_prime_field() ? p_ - 1 : 2; }

    std::string to_string() const { return is_prime_field() ? "GF(" + std::to_string(p_) + ")" : "QQ"; }
    friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
        return a.kind_ == b.kind_ && a.p_ == b.p_ && a.g_ == b.g_;
    }

private:
    FieldSpec(Kind k, std::uint64_t p, std::uint64_t g) : kind_(k), p_(p), g_(g) {}

    static void check_prime(std::uint64_t p) {
        if (p > (1ULL << 32)) throw MathError("prime fields above 2^32 are not supported");
        if (!detail::is_prime(p)) throw MathError(std::to_string(p) + " is not prime");
    }
    static bool is_generator(std::uint64_t p, std::uint64_t g) {
        if (g == 0) return false;
        if (p == 2) return g == 1;
        for (auto q : detail::prime_divisors(p - 1))
            if (detail::powmod(g, (p - 1) / q, p) == 1) return false;
        return true;
    }

    Kind kind_;
    std::uint64_t p_;
    std::uint64_t g_;
};

// Multiplicative order of a unit of GF(p).
inline std::optional<std::uint64_t> multiplicative_order(const Fp& a) {
    if (a.is_zero()) throw MathError("zero has no multiplicative order");
    std::uint64_t p = a.modulus();
    std::uint64_t n = p - 1;
    for (auto q : detail::prime_divisors(p - 1))
        while (n % q == 0 && detail::powmod(a.value(), n / q, p) == 1) n /= q;
    return std::optional<std::uint64_t>(n);
}

// Order in QQ*: 1 for 1, 2 for -1, none otherwise.
inline std::optional<std::uint64_t> multiplicative_order(const Rational& a) {
    if (a.is_one()) return 1;
    if (a == -a.context().one()) return 2;
    return std::nullopt;
}

}  // namespace planediag
