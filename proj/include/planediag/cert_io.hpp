#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "certificate.hpp"
#include "instance.hpp"

namespace planediag {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCertificateFormat = "planediag-certificate";
inline constexpr int kCertificateVersion = 1;

template <class C>
Json certificate_to_json(const Certificate<C>& c, const std::vector<std::string>& names = {}) {
    Json j;
    j["format"] = kCertificateFormat;
    j["version"] = kCertificateVersion;
    j["field"] = c.field.to_string();
    j["field_generator"] = c.field.is_prime_field() ? c.field.generator() : 0;
    j["ring"] = ring_name(c.ring);
    Json gens = Json::array();
    for (std::size_t l = 0; l < c.generators.size(); ++l) {
        auto d = c.diagonal(l);
        gens.push_back({{"name", l < names.size() ? names[l] : "phi" + std::to_string(l + 1)},
                        {"images", {c.generators[l].f1().to_string(), c.generators[l].f2().to_string()}},
                        {"order", c.orders[l]},
                        {"zeta", c.zetas[l].to_string()},
                        {"exponents", {c.exponents[l][0], c.exponents[l][1]}},
                        {"diagonal", {d.a1.to_string(), d.a2.to_string()}}});
    }
    j["generators"] = gens;
    j["conjugator"] = {c.conjugator.f1().to_string(), c.conjugator.f2().to_string()};
    Json log = Json::array();
    for (const auto& s : c.log) log.push_back({{"operation", s.operation}, {"input_hash", s.input_hash}, {"update", s.update}});
    j["log"] = log;
    j["descent_trace"] = c.descent_trace;
    j["verify"] = {{"conjugator_hash", stable_hash(c.conjugator.to_string())},
                   {"jacobian", c.conjugator.jacobian().to_string()},
                   {"checks",
                    {"jacobian is a unit", "inverse over the coefficient ring", "inverse composes to identity",
                     "diagonal entries are the recorded powers of zeta", "phi = psi o delta o psi^-1 per generator"}}};
    return j;
}

// Header of a certificate, enough to choose the coefficient domain.
struct CertificateHeader {
    FieldSpec field = FieldSpec::rationals();
    RingKind ring = RingKind::polynomials;
};

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

inline CertificateHeader certificate_header(const Json& j) {
    try {
        if (j.at("format").get<std::string>() != kCertificateFormat) throw ParseError("not a certificate");
        CertificateHeader h;
        auto g = j.value("field_generator", std::uint64_t{0});
        h.field = parse_field(j.at("field").get<std::string>());
        if (h.field.is_prime_field() && g != 0) h.field = FieldSpec::prime_field(h.field.p(), g);
        h.ring = parse_ring(j.at("ring").get<std::string>());
        return h;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed certificate: ") + e.what());
    } catch (const MathError& e) {
        throw ParseError(std::string("malformed certificate: ") + e.what());
    }
}

template <class C>
struct LoadedCertificate {
    Certificate<C> cert;
    std::vector<std::string> names;
    // Mismatches between stored data and what it must be (tampering).
    std::vector<std::string> inconsistencies;
};

template <class C>
LoadedCertificate<C> certificate_from_json(const Json& j) {
    using F = typename Certificate<C>::F;
    auto h = certificate_header(j);
    LoadedCertificate<C> out;
    auto& c = out.cert;
    c.field = h.field;
    c.ring = h.ring;
    auto ctx = Domain<C>::make(h.field);
    auto base = FieldTraits<F>::context(h.field);
    try {
        for (const auto& g : j.at("generators")) {
            out.names.push_back(g.at("name").get<std::string>());
            const auto& im = g.at("images");
            c.generators.push_back(parse_map<C>(im.at(0).get<std::string>(), im.at(1).get<std::string>(), ctx));
            c.orders.push_back(g.at("order").get<std::uint64_t>());
            c.zetas.push_back(parse_scalar<F>(g.at("zeta").get<std::string>(), base));
            const auto& e = g.at("exponents");
            c.exponents.push_back({e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>()});
            const auto& d = g.at("diagonal");
            F a1 = parse_scalar<F>(d.at(0).get<std::string>(), base), a2 = parse_scalar<F>(d.at(1).get<std::string>(), base);
            auto expect = c.diagonal(c.generators.size() - 1);
            if (!(a1 == expect.a1) || !(a2 == expect.a2))
                out.inconsistencies.push_back("diagonal of " + out.names.back() + " is not zeta^exponents");
        }
        const auto& psi = j.at("conjugator");
        c.conjugator = parse_map<C>(psi.at(0).get<std::string>(), psi.at(1).get<std::string>(), ctx);
        for (const auto& s : j.value("log", Json::array()))
            c.log.push_back({s.value("operation", ""), s.value("input_hash", ""), s.value("update", "")});
        if (j.contains("descent_trace")) c.descent_trace = j["descent_trace"].get<std::vector<std::size_t>>();
        if (j.contains("verify") && j["verify"].contains("conjugator_hash") &&
            j["verify"]["conjugator_hash"].get<std::string>() != stable_hash(c.conjugator.to_string()))
            out.inconsistencies.push_back("conjugator hash mismatch");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed certificate: ") + e.what());
    }
    return out;
}

}  // namespace planediag
