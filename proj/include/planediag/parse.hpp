#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "rings.hpp"

namespace planediag {

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Fp> {
    static PrimeField context(const FieldSpec& k) {
        if (!k.is_prime_field()) throw MathError("expected a prime field");
        return k.prime_context();
    }
    static Fp from_decimal(const PrimeField& ctx, const std::string& digits) {
        mpz_class z(digits, 10);
        mpz_class m = static_cast<unsigned long>(ctx.modulus());
        z %= m;
        return Fp(z.get_ui(), ctx.modulus());
    }
};

template <>
struct FieldTraits<Rational> {
    static RationalField context(const FieldSpec& k) {
        if (k.is_prime_field()) throw MathError("expected QQ");
        return {};
    }
    static Rational from_decimal(const RationalField&, const std::string& digits) {
        return Rational(mpq_class(mpz_class(digits, 10)));
    }
};

// "GF(7)", "GF(7, 3)" (explicit generator) or "QQ".
inline FieldSpec parse_field(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s == "QQ" || s == "Q") return FieldSpec::rationals();
    if (s.rfind("GF(", 0) == 0 && s.back() == ')') {
        auto body = s.substr(3, s.size() - 4);
        auto comma = body.find(',');
        try {
            if (comma == std::string::npos) return FieldSpec::prime_field(std::stoull(body));
            return FieldSpec::prime_field(std::stoull(body.substr(0, comma)), std::stoull(body.substr(comma + 1)));
        } catch (const std::invalid_argument&) {
        } catch (const std::out_of_range&) {
        }
    }
    throw ParseError("bad field header: " + std::string(text));
}

enum class RingKind { field, polynomials, fractions };

// "k", "k[t]", "k(t)", optionally with the field spelled out: "GF(7)[t]".
inline RingKind parse_ring(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto ends = [&](const std::string& suf) { return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0; };
    if (ends("[t]")) return RingKind::polynomials;
    if (ends("(t)")) return RingKind::fractions;
    if (s == "k" || s == "QQ" || s.rfind("GF(", 0) == 0) return RingKind::field;
    throw ParseError("bad ring declaration: " + std::string(text));
}

inline std::string ring_name(RingKind r) {
    switch (r) {
        case RingKind::field: return "k";
        case RingKind::polynomials: return "k[t]";
        case RingKind::fractions: return "k(t)";
    }
    return "?";
}

namespace detail {

// Recursive descent over + - * / ^ and parentheses; evaluates in K[x].
template <class F>
class PolyParser {
public:
    using KP = KPoly<F>;
    PolyParser(std::string_view text, typename F::context_type base) : s_(text), base_(base), K_(base) {}

    KP parse_all() {
        KP v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at position " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    KP constant(const RatFunc<F>& c) const { return KP::constant(c); }

    KP expr() {
        KP v(K_);
        bool neg = false;
        if (accept('-'))
            neg = true;
        else
            accept('+');
        v = term();
        if (neg) v = -v;
        for (;;) {
            if (accept('+'))
                v += term();
            else if (accept('-'))
                v -= term();
            else
                return v;
        }
    }
    KP term() {
        KP v = factor();
        for (;;) {
            if (accept('*')) {
                v *= factor();
            } else if (accept('/')) {
                KP d = factor();
                if (!d.is_constant() || d.is_zero()) fail("division only by nonzero coefficients");
                v *= d.constant_term().inv();
            } else {
                return v;
            }
        }
    }
    KP factor() {
        KP b = base();
        if (accept('^')) {
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
            if (e > 100000) fail("exponent too large");
            b = b.pow(static_cast<unsigned>(e));
        }
        return b;
    }
    KP base() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            KP v = expr();
            if (!accept(')')) fail("expected ')'");
            return v;
        }
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            F v = FieldTraits<F>::from_decimal(base_, std::string(s_.substr(start, pos_ - start)));
            return constant(K_.from_base(v));
        }
        if (c == 't') {
            ++pos_;
            return constant(K_.t());
        }
        if (c == 'x') {
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '1' || s_[pos_] == '2')) {
                int i = s_[pos_++] - '0';
                return KP::variable(K_, i);
            }
            fail("expected x1 or x2");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    typename F::context_type base_;
    FracField<F> K_;
};

inline std::vector<std::string> split_top_level(std::string_view s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

}  // namespace detail

template <class F>
KPoly<F> parse_poly(std::string_view text, const typename F::context_type& base) {
    return detail::PolyParser<F>(text, base).parse_all();
}

// Polynomial over R = k[t]; rejects t-denominators.
template <class F>
RPoly<F> parse_rpoly(std::string_view text, const typename F::context_type& base) {
    auto r = to_poly(parse_poly<F>(text, base));
    if (!r) throw ParseError("coefficients must be polynomials in t: " + std::string(text));
    return *r;
}

// Polynomial over k; rejects t.
template <class F>
BiPoly<F> parse_kpoly(std::string_view text, const typename F::context_type& base) {
    auto r = parse_rpoly<F>(text, base);
    std::vector<typename BiPoly<F>::Term> terms;
    for (const auto& [m, c] : r.terms()) {
        if (c.degree() > 0) throw ParseError("coefficients must be constants: " + std::string(text));
        terms.emplace_back(m, c.coeff(0));
    }
    return BiPoly<F>::from_terms(base, std::move(terms));
}

template <class F>
F parse_scalar(std::string_view text, const typename F::context_type& base) {
    auto p = parse_kpoly<F>(text, base);
    if (!p.is_constant()) throw ParseError("expected a scalar: " + std::string(text));
    return p.is_zero() ? base.zero() : p.constant_term();
}

// "(f1, f2)" -> the two image strings.
inline std::pair<std::string, std::string> split_pair(std::string_view text) {
    auto s = detail::trim(text);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw ParseError("expected (f1, f2): " + s);
    auto parts = detail::split_top_level(std::string_view(s).substr(1, s.size() - 2), ',');
    if (parts.size() != 2) throw ParseError("expected exactly two images: " + s);
    return {detail::trim(parts[0]), detail::trim(parts[1])};
}

}  // namespace planediag
