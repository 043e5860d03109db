#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "action.hpp"
#include "parse.hpp"

namespace planediag {

// Text form of an instance:
//
//   field GF(7)
//   ring k[t]
//   gen phi1 order 3 zeta 2 = (x1, 2*x2 + t*x1^3)
//   conjugator = (x1, x2 + t*x1^3)
//
// '#' starts a comment. The conjugator line is optional.
struct GeneratorLine {
    std::string name;
    std::uint64_t order = 1;
    std::string zeta;
    std::string f1, f2;
};

struct InstanceFile {
    FieldSpec field = FieldSpec::rationals();
    RingKind ring = RingKind::polynomials;
    std::vector<GeneratorLine> generators;
    std::optional<std::pair<std::string, std::string>> conjugator;
};

namespace detail {

inline std::vector<std::string> words_of(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

}  // namespace detail

inline InstanceFile parse_instance(const std::string& text) {
    InstanceFile inst;
    bool have_field = false, have_ring = false;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) -> ParseError {
        return ParseError("line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        auto head = detail::words_of(eq == std::string::npos ? line : line.substr(0, eq));
        if (head.empty()) throw fail("empty declaration");
        if (head[0] == "field") {
            if (eq != std::string::npos || head.size() < 2) throw fail("expected 'field <spec>'");
            inst.field = parse_field(line.substr(5));
            have_field = true;
        } else if (head[0] == "ring") {
            if (eq != std::string::npos || head.size() < 2) throw fail("expected 'ring <k | k[t] | k(t)>'");
            inst.ring = parse_ring(line.substr(4));
            have_ring = true;
        } else if (head[0] == "gen") {
            if (eq == std::string::npos || head.size() != 6 || head[2] != "order" || head[4] != "zeta")
                throw fail("expected 'gen <name> order <d> zeta <z> = (f1, f2)'");
            GeneratorLine g;
            g.name = head[1];
            try {
                g.order = std::stoull(head[3]);
            } catch (const std::exception&) {
                throw fail("bad order '" + head[3] + "'");
            }
            g.zeta = head[5];
            std::tie(g.f1, g.f2) = split_pair(line.substr(eq + 1));
            inst.generators.push_back(std::move(g));
        } else if (head[0] == "conjugator") {
            if (eq == std::string::npos || head.size() != 1) throw fail("expected 'conjugator = (f1, f2)'");
            inst.conjugator = split_pair(line.substr(eq + 1));
        } else {
            throw fail("unknown declaration '" + head[0] + "'");
        }
    }
    if (!have_field) throw ParseError("missing field header");
    if (!have_ring) throw ParseError("missing ring declaration");
    return inst;
}

inline InstanceFile read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

// Coefficient domain selected by the ring declaration.
template <class C>
struct Domain;

template <>
struct Domain<Fp> {
    using F = Fp;
    static PrimeField make(const FieldSpec& k) { return FieldTraits<Fp>::context(k); }
    static BiPoly<Fp> parse(const std::string& s, const PrimeField& k) { return parse_kpoly<Fp>(s, k); }
};

template <>
struct Domain<Rational> {
    using F = Rational;
    static RationalField make(const FieldSpec& k) { return FieldTraits<Rational>::context(k); }
    static BiPoly<Rational> parse(const std::string& s, const RationalField& k) { return parse_kpoly<Rational>(s, k); }
};

template <class B>
struct Domain<UniPoly<B>> {
    using F = B;
    static PolyRing<B> make(const FieldSpec& k) { return PolyRing<B>(FieldTraits<B>::context(k)); }
    static RPoly<B> parse(const std::string& s, const PolyRing<B>& r) { return parse_rpoly<B>(s, r.base()); }
};

template <class B>
struct Domain<RatFunc<B>> {
    using F = B;
    static FracField<B> make(const FieldSpec& k) { return FracField<B>(FieldTraits<B>::context(k)); }
    static KPoly<B> parse(const std::string& s, const FracField<B>& K) { return parse_poly<B>(s, K.base()); }
};

template <class C>
struct TypedInstance {
    using F = typename Domain<C>::F;
    FieldSpec field = FieldSpec::rationals();
    typename C::context_type ctx;
    std::vector<std::string> names;
    std::vector<PolyAutomorphism<C>> generators;
    std::vector<std::uint64_t> orders;
    std::vector<F> zetas;
    std::optional<PolyAutomorphism<C>> conjugator;

    FiniteAbelianSubgroup<C> group() const { return FiniteAbelianSubgroup<C>(field, generators, orders, zetas); }
};

template <class C>
PolyAutomorphism<C> parse_map(const std::string& f1, const std::string& f2, const typename C::context_type& ctx) {
    return {Domain<C>::parse(f1, ctx), Domain<C>::parse(f2, ctx)};
}

template <class C>
TypedInstance<C> instantiate(const InstanceFile& raw) {
    TypedInstance<C> t;
    t.field = raw.field;
    t.ctx = Domain<C>::make(raw.field);
    auto base = FieldTraits<typename Domain<C>::F>::context(raw.field);
    for (const auto& g : raw.generators) {
        t.names.push_back(g.name);
        t.generators.push_back(parse_map<C>(g.f1, g.f2, t.ctx));
        t.orders.push_back(g.order);
        t.zetas.push_back(parse_scalar<typename Domain<C>::F>(g.zeta, base));
    }
    if (raw.conjugator) t.conjugator = parse_map<C>(raw.conjugator->first, raw.conjugator->second, t.ctx);
    return t;
}

template <class C>
std::string print_instance(const TypedInstance<C>& t, RingKind ring) {
    std::ostringstream os;
    os << "field " << t.field.to_string() << "\n";
    os << "ring " << ring_name(ring) << "\n";
    for (std::size_t l = 0; l < t.generators.size(); ++l)
        os << "gen " << t.names[l] << " order " << t.orders[l] << " zeta " << t.zetas[l].to_string() << " = "
           << t.generators[l].to_string() << "\n";
    if (t.conjugator) os << "conjugator = " << t.conjugator->to_string() << "\n";
    return os.str();
}

// "phi = (f1, f2) over GF(7)[t]" or just "(f1, f2) over QQ".
struct MapLine {
    FieldSpec field = FieldSpec::rationals();
    RingKind ring = RingKind::field;
    std::string f1, f2;
};

inline MapLine parse_map_line(const std::string& text) {
    std::string s = detail::trim(text);
    if (auto eq = s.find('='); eq != std::string::npos && s.find('(') > eq) s = detail::trim(s.substr(eq + 1));
    auto over = s.rfind(" over ");
    if (over == std::string::npos) throw ParseError("expected '(f1, f2) over <ring>'");
    MapLine m;
    std::tie(m.f1, m.f2) = split_pair(s.substr(0, over));
    auto ring = detail::trim(s.substr(over + 6));
    std::string field_part = ring;
    m.ring = RingKind::field;
    if (ring.size() > 3 && ring.compare(ring.size() - 3, 3, "[t]") == 0) {
        field_part = ring.substr(0, ring.size() - 3);
        m.ring = RingKind::polynomials;
    } else if (ring.size() > 3 && ring.compare(ring.size() - 3, 3, "(t)") == 0) {
        field_part = ring.substr(0, ring.size() - 3);
        m.ring = RingKind::fractions;
    }
    m.field = parse_field(field_part);
    return m;
}

}  // namespace planediag
