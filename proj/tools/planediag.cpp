#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "CLI11.hpp"
#include "planediag/cert_io.hpp"
#include "planediag/diagonalize.hpp"
#include "planediag/instance.hpp"
#include "planediag/random.hpp"

using namespace planediag;

namespace {

enum Exit { kOk = 0, kUsage = 1, kMath = 2 };

template <class T>
struct Tag {
    using type = T;
};

// Calls fn(Tag<C>{}) for the coefficient domain named by field and ring.
template <class Fn>
auto with_domain(const FieldSpec& field, RingKind ring, Fn&& fn) {
    if (field.is_prime_field()) {
        switch (ring) {
            case RingKind::field: return fn(Tag<Fp>{});
            case RingKind::polynomials: return fn(Tag<UniPoly<Fp>>{});
            case RingKind::fractions: return fn(Tag<RatFunc<Fp>>{});
        }
    }
    switch (ring) {
        case RingKind::field: return fn(Tag<Rational>{});
        case RingKind::polynomials: return fn(Tag<UniPoly<Rational>>{});
        case RingKind::fractions: break;
    }
    return fn(Tag<RatFunc<Rational>>{});
}

template <class T>
struct IsPolyRing : std::false_type {};
template <class F>
struct IsPolyRing<UniPoly<F>> : std::true_type {};

// Diagonal exponents of psi^{-1} phi psi over the fraction field, or nullopt.
template <class C>
std::optional<std::array<std::uint64_t, 2>> exponents_for(const PolyAutomorphism<C>& phi, const PolyAutomorphism<C>& psi,
                                                          const typename C::base_field& zeta, std::uint64_t order) {
    using K = typename FieldOf<C>::type;
    auto pk = FieldOf<C>::map(psi);
    auto conj = compose(invert(pk), compose(FieldOf<C>::map(phi), pk));
    std::array<std::uint64_t, 2> e{};
    for (int i = 1; i <= 2; ++i) {
        const auto& f = conj.image(i);
        if (f.size() != 1 || f.terms()[0].first.e1 != (i == 1 ? 1u : 0u) || f.terms()[0].first.e2 != (i == 2 ? 1u : 0u))
            return std::nullopt;
        auto z = pk.context().one();
        bool found = false;
        for (std::uint64_t k = 0; k < order; ++k) {
            if (f.terms()[0].second == z) {
                e[i - 1] = k;
                found = true;
                break;
            }
            z *= pk.context().from_base(zeta);
        }
        if (!found) return std::nullopt;
    }
    (void)sizeof(K);
    return e;
}

template <class C>
Certificate<C> solve_instance(const TypedInstance<C>& inst) {
    auto group = [&] {
        try {
            return inst.group();
        } catch (const MathError& e) {
            throw MathError(std::string("group check: ") + e.what());
        }
    }();
    if constexpr (IsPolyRing<C>::value) {
        using F = typename C::base_field;
        if (!inst.conjugator) return diagonalize_finite_abelian(group);
        // Caller-supplied conjugator over K: read off the diagonal, then descend.
        Certificate<C> cert;
        cert.field = inst.field;
        cert.generators = inst.generators;
        cert.orders = inst.orders;
        cert.zetas = inst.zetas;
        std::vector<DiagonalAuto<F>> diags;
        for (std::size_t l = 0; l < inst.generators.size(); ++l) {
            auto e = exponents_for(inst.generators[l], *inst.conjugator, inst.zetas[l], inst.orders[l]);
            if (!e) throw MathError("supplied conjugator does not diagonalize generator " + inst.names[l]);
            cert.exponents.push_back(*e);
            diags.push_back(cert.diagonal(l));
        }
        auto ctx = descent_context(inst.field, diags);
        auto dr = descend_conjugator(to_frac(*inst.conjugator), ctx);
        cert.conjugator = dr.conjugator;
        cert.log = dr.log;
        cert.descent_trace = dr.m_trace;
        auto rep = verify_certificate(cert);
        if (!rep.ok) throw AssertionFailure("certificate verification failed: " + rep.failures.front());
        return cert;
    } else {
        return diagonalize_over_field(group);
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
}

struct Overrides {
    std::string field, ring;
};

int diagonalize_one(const std::string& path, const std::string& out_path, const Overrides& ov, std::string& report) {
    try {
        auto raw = read_instance(path);
        if (!ov.field.empty()) raw.field = parse_field(ov.field);
        if (!ov.ring.empty()) raw.ring = parse_ring(ov.ring);
        auto json = with_domain(raw.field, raw.ring, [&](auto tag) {
            using C = typename decltype(tag)::type;
            auto inst = instantiate<C>(raw);
            auto cert = solve_instance(inst);
            return std::make_pair(certificate_to_json(cert, inst.names), cert.conjugator.to_string());
        });
        write_text(out_path, json.first.dump(2) + "\n");
        report = path + ": verified, conjugator " + json.second + ", certificate " + out_path;
        return kOk;
    } catch (const ParseError& e) {
        report = path + ": parse error: " + e.what();
        return kUsage;
    } catch (const MathError& e) {
        report = path + ": not diagonalized: " + e.what();
        return kMath;
    } catch (const AssertionFailure& e) {
        report = path + ": out of scope: " + e.what();
        return kMath;
    }
}

int cmd_diagonalize(const std::vector<std::string>& files, const std::string& out, const Overrides& ov, int jobs) {
    if (!out.empty() && files.size() > 1) {
        std::cerr << "--out needs a single instance file; certificates go to <file>.cert.json otherwise\n";
        return kUsage;
    }
    auto run = [&](std::size_t i) {
        std::string report;
        int code = diagonalize_one(files[i], out.empty() ? files[i] + ".cert.json" : out, ov, report);
        (code == kOk ? std::cout : std::cerr) << report << std::endl;
        return code;
    };
    if (jobs <= 1 || files.size() == 1) {
        int worst = kOk;
        for (std::size_t i = 0; i < files.size(); ++i) worst = std::max(worst, run(i));
        return worst;
    }
    // One instance per process, at most `jobs` at a time.
    int worst = kOk, running = 0;
    auto reap = [&] {
        int status = 0;
        if (::wait(&status) > 0) {
            --running;
            worst = std::max(worst, WIFEXITED(status) ? WEXITSTATUS(status) : int(kMath));
        }
    };
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (running >= jobs) reap();
        std::cout.flush();
        std::cerr.flush();
        pid_t pid = ::fork();
        if (pid < 0) {
            worst = std::max(worst, run(i));
        } else if (pid == 0) {
            std::_Exit(run(i));
        } else {
            ++running;
        }
    }
    while (running > 0) reap();
    return worst;
}

int cmd_verify(const std::string& path) {
    try {
        auto j = read_json_file(path);
        auto h = certificate_header(j);
        return with_domain(h.field, h.ring, [&](auto tag) {
            using C = typename decltype(tag)::type;
            auto loaded = certificate_from_json<C>(j);
            auto rep = verify_certificate(loaded.cert);
            for (const auto& s : loaded.inconsistencies) rep.fail(s);
            if (rep.ok) {
                std::cout << path << ": certificate verified (" << loaded.cert.generators.size() << " generators)\n";
                return int(kOk);
            }
            for (const auto& f : rep.failures) std::cerr << path << ": FAILED: " << f << "\n";
            return int(kMath);
        });
    } catch (const ParseError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return kUsage;
    } catch (const MathError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return kUsage;
    }
}

int cmd_gen_random(std::uint64_t seed, const std::string& field, std::vector<std::uint64_t> orders, int degree,
                   int factors, int t_degree, const std::string& out) {
    try {
        auto k = parse_field(field);
        if (!k.is_prime_field()) throw ParseError("gen-random needs a prime field GF(p)");
        for (auto d : orders)
            if (d == 0 || (k.p() - 1) % d != 0)
                throw ParseError("order " + std::to_string(d) + " does not divide p - 1 = " + std::to_string(k.p() - 1) +
                                 " (a primitive root of unity of that order must exist in k)");
        std::mt19937_64 rng(seed);
        TameWordBounds b{factors, degree, t_degree};
        auto inst = random_group_instance(k, orders, b, rng);
        FiniteAbelianSubgroup<UniPoly<Fp>> check(k, inst.generators, inst.orders, inst.zetas);
        TypedInstance<UniPoly<Fp>> t;
        t.field = k;
        t.ctx = PolyRing<Fp>(k.prime_context());
        for (std::size_t l = 0; l < orders.size(); ++l) t.names.push_back("phi" + std::to_string(l + 1));
        t.generators = inst.generators;
        t.orders = inst.orders;
        t.zetas = inst.zetas;
        std::string text = "# gen-random seed " + std::to_string(seed) + "\n" + print_instance(t, RingKind::polynomials);
        if (out.empty())
            std::cout << text;
        else
            write_text(out, text);
        return kOk;
    } catch (const ParseError& e) {
        std::cerr << "gen-random: " << e.what() << "\n";
        return kUsage;
    } catch (const MathError& e) {
        std::cerr << "gen-random: " << e.what() << "\n";
        return kMath;
    }
}

// "(1,2),(3,3)" -> generators of Gamma in (k*)^2.
template <class F>
CharacterGroup<F> parse_gamma(const std::string& spec, const typename F::context_type& k) {
    std::vector<std::vector<F>> gens;
    for (const auto& part : detail::split_top_level(spec, ',')) {
        auto p = detail::trim(part);
        if (p.empty()) continue;
        auto [a, b] = split_pair(p);
        gens.push_back({parse_scalar<F>(a, k), parse_scalar<F>(b, k)});
    }
    return CharacterGroup<F>(2, gens);
}

template <class E, class F>
void print_centralizer(const PolyAutomorphism<E>& phi, const ActionContext<F>& ctx) {
    auto w = centralizer_decompose(phi, ctx);
    std::cout << "phi = ";
    for (std::size_t j = 0; j < w.factors.size(); ++j) std::cout << "sigma" << j + 1 << " o ";
    std::cout << "tau\n";
    for (std::size_t j = 0; j < w.factors.size(); ++j)
        std::cout << "sigma" << j + 1 << " = " << w.factors[j].to_string() << "\n";
    std::cout << "tau = " << w.tau.to_string() << "\n";
}

int cmd_decompose(const std::string& path, const std::string& centralizer) {
    try {
        std::string line;
        for (std::istringstream is(read_text(path)); std::getline(is, line);) {
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            if (!detail::trim(line).empty()) break;
        }
        auto m = parse_map_line(line);
        with_domain(m.field, m.ring, [&](auto tag) {
            using C = typename decltype(tag)::type;
            using F = typename C::base_field;
            auto ctx = Domain<C>::make(m.field);
            auto phi = FieldOf<C>::map(parse_map<C>(m.f1, m.f2, ctx));
            if (centralizer.empty()) {
                auto tw = vdk_decompose(phi);
                std::cout << "phi = affine";
                for (std::size_t j = 0; j < tw.elementaries.size(); ++j) std::cout << " o e" << j + 1;
                std::cout << "\n";
                std::cout << "affine = " << tw.affine.to_string() << "\n";
                for (std::size_t j = 0; j < tw.elementaries.size(); ++j)
                    std::cout << "e" << j + 1 << " = " << tw.elementaries[j].to_string() << "\n";
                if (tw.compose_all() != phi) throw AssertionFailure("tame word does not recompose");
            } else {
                auto k = FieldTraits<F>::context(m.field);
                ActionContext<F> actx(m.field, parse_gamma<F>(centralizer, k));
                print_centralizer(phi, actx);
            }
            return 0;
        });
        return kOk;
    } catch (const ParseError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return kUsage;
    } catch (const MathError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return kMath;
    } catch (const AssertionFailure& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return kMath;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diagonalize finite abelian groups of plane polynomial automorphisms over k[t]"};
    app.require_subcommand(1);

    Overrides ov;
    std::vector<std::string> files;
    std::string out;
    int jobs = 1;
    auto* diag = app.add_subcommand("diagonalize", "Diagonalize the group in each instance file and write a certificate");
    diag->add_option("files", files, "Instance files")->required()->check(CLI::ExistingFile);
    diag->add_option("--field", ov.field, "Override the field header, e.g. GF(7) or QQ");
    diag->add_option("--ring", ov.ring, "Override the ring declaration: k, k[t] or k(t)");
    diag->add_option("--out", out, "Certificate path (single input); default <file>.cert.json");
    diag->add_option("--jobs", jobs, "Worker processes, one instance file each")->check(CLI::PositiveNumber);

    std::string cert_path;
    auto* ver = app.add_subcommand("verify", "Re-check a certificate without the solver");
    ver->add_option("certificate", cert_path, "Certificate JSON")->required();

    std::uint64_t seed = 1;
    std::string field = "GF(7)";
    std::vector<std::uint64_t> orders;
    int degree = 6, factors = 5, t_degree = 3;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen-random", "Write a random instance w o D o w^-1");
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--field", field, "Prime field GF(p)");
    std::uint64_t p_opt = 0;
    gen->add_option("--p", p_opt, "Shorthand for --field GF(p)");
    gen->add_option("--orders", orders, "Generator orders, each dividing p - 1")->required()->delimiter(',');
    gen->add_option("--degree-bound", degree, "Maximal total degree of the conjugating word");
    gen->add_option("--factors", factors, "Maximal number of factors of the conjugating word");
    gen->add_option("--t-degree", t_degree, "Maximal degree in t of the coefficients");
    gen->add_option("--out", gen_out, "Output path (default stdout)");

    std::string map_path, centralizer;
    auto* dec = app.add_subcommand("decompose", "Print a tame decomposition of an automorphism");
    dec->add_option("file", map_path, "File with a line 'phi = (f1, f2) over <ring>'")->required()->check(CLI::ExistingFile);
    dec->add_option("--centralizer", centralizer,
                    "Decompose in the centralizer of Gamma, given by generators '(a1,a2),(b1,b2)'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }
    if (*diag) return cmd_diagonalize(files, out, ov, jobs);
    if (*ver) return cmd_verify(cert_path);
    if (*gen) return cmd_gen_random(seed, p_opt ? "GF(" + std::to_string(p_opt) + ")" : field, orders, degree, factors, t_degree, gen_out);
    if (*dec) return cmd_decompose(map_path, centralizer);
    return kUsage;
}
