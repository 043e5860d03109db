#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "action.hpp"
#include "certificate.hpp"
#include "linalg.hpp"

namespace planediag {

// ---------------------------------------------------------------------------
// Diagonalization over a field

template <class C>
struct FieldDiagonalization {
    using F = typename C::base_field;
    PolyAutomorphism<C> conjugator;
    std::vector<std::array<std::uint64_t, 2>> exponents;
    std::vector<LogStep> log;
};

namespace detail {

inline LetterType other_type(LetterType t) { return t == LetterType::affine ? LetterType::triangular : LetterType::affine; }

// Conjugates the generators into a single vertex group of A *_B J by walking
// the Bass-Serre tree toward the common fixed point, then linearizes the
// resulting affine or triangular family with eigencomponents of x1 and x2.
template <class C>
FieldDiagonalization<C> diagonalize_words(std::vector<AmalgamWord<C>> words, const std::vector<std::uint64_t>& orders,
                                          const std::vector<typename C::base_field>& zetas,
                                          const typename C::context_type& ctx) {
    using P = BiPoly<C>;
    FieldDiagonalization<C> out;
    std::size_t r = words.size();
    AmalgamWord<C> walk(ctx);
    LetterType type = LetterType::affine;
    std::size_t total = 0;
    for (const auto& w : words) total += w.length();
    std::size_t cap = 4 * total + 16;
    for (std::size_t step = 0;; ++step) {
        auto it = std::find_if(words.begin(), words.end(), [&](const auto& w) { return !w.in_factor(type); });
        if (it == words.end()) break;
        if (step >= cap) throw MathError("conjugation into bounded subgroup failed");
        auto first = it->letters().front();
        if (first.type == type || first.in_base()) {
            auto lw = AmalgamWord<C>::from_letter(first);
            auto li = lw.inverse();
            walk *= lw;
            for (auto& w : words) w = li * w * lw;
            out.log.push_back({"tree_step", stable_hash(first.map.to_string()), "conjugate by " + first.map.to_string()});
        }
        type = other_type(type);
    }
    std::vector<PolyAutomorphism<C>> gens;
    for (const auto& w : words) gens.push_back(w.expand());

    auto x1 = P::variable(ctx, 1), x2 = P::variable(ctx, 2);
    auto c1 = eigen_split(x1, gens, orders, zetas);
    auto c2 = eigen_split(x2, gens, orders, zetas);
    std::vector<std::pair<IntVec, P>> all(c1);
    all.insert(all.end(), c2.begin(), c2.end());
    auto accept = [&](const std::pair<IntVec, P>& u, const std::pair<IntVec, P>& v) {
        auto j = jacobian_det(u.second, v.second);
        if (!j.is_constant() || j.is_zero()) return false;
        PolyAutomorphism<C> chi(u.second, v.second);
        if (!is_automorphism(chi)) return false;
        out.conjugator = compose(walk.expand(), chi);
        for (std::size_t l = 0; l < r; ++l)
            out.exponents.push_back({static_cast<std::uint64_t>(u.first[l]), static_cast<std::uint64_t>(v.first[l])});
        out.log.push_back({"linearize", stable_hash(chi.to_string()), "right factor " + chi.to_string()});
        return true;
    };
    for (const auto& u : c1)
        for (const auto& v : c2)
            if (accept(u, v)) return out;
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = 0; b < all.size(); ++b)
            if (a != b && accept(all[a], all[b])) return out;
    throw MathError("not diagonalizable over " + ctx.to_string() + ": no eigenbasis");
}

}  // namespace detail

// G over a field: conjugator psi over the same field with every generator
// conjugated to (zeta^e1 x1, zeta^e2 x2).
template <class C>
Certificate<C> diagonalize_over_field(const FiniteAbelianSubgroup<C>& g) {
    Certificate<C> cert;
    cert.field = g.field();
    cert.generators = g.generators();
    cert.orders = g.orders();
    cert.zetas = g.zetas();
    auto fd = detail::diagonalize_words(g.words(), g.orders(), g.zetas(), g.context());
    cert.conjugator = fd.conjugator;
    cert.exponents = fd.exponents;
    cert.log = fd.log;
    if (g.size() == 0) cert.conjugator = PolyAutomorphism<C>::identity(g.context());
    auto rep = verify_certificate(cert);
    if (!rep.ok) throw AssertionFailure("certificate verification failed: " + rep.failures.front());
    return cert;
}

// ---------------------------------------------------------------------------
// Centralizer C_Gamma: decomposition and lifts

template <class E>
struct CentralizerWord {
    std::vector<ElementaryAuto<E>> factors;  // sigma_1, ..., sigma_r
    DiagonalAuto<E> tau;

    PolyAutomorphism<E> compose_all(const typename E::context_type& ctx) const {
        PolyAutomorphism<E> cur = tau.automorphism();
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) cur = compose(it->automorphism(), cur);
        (void)ctx;
        return cur;
    }
};

template <class E, class F>
GradingDegree variable_class(const ActionContext<F>& ctx, int i) {
    return ctx.class_of(i == 1 ? Monomial{1, 0} : Monomial{0, 1});
}

// phi = sigma_1 o ... o sigma_r o tau with homogeneous elementaries sigma_j and
// tau diagonal. The monomial grading is the one of ctx over (k*)^2.
template <class E, class F>
CentralizerWord<E> centralizer_decompose(const PolyAutomorphism<E>& phi, const ActionContext<F>& ctx) {
    using P = BiPoly<E>;
    const auto& rc = phi.context();
    GradingDegree g[2] = {variable_class<E>(ctx, 1), variable_class<E>(ctx, 2)};
    for (int i = 1; i <= 2; ++i) {
        auto c = is_homogeneous(phi.image(i), ctx);
        if (!c || *c != g[i - 1])
            throw MathError("automorphism is not Gamma-homogeneous: image " + std::to_string(i) + " = " +
                            phi.image(i).to_string());
    }
    auto tw = vdk_decompose(phi);  // phi = A o e_1 o ... o e_k
    PolyAutomorphism<E> cur = tw.affine;
    std::vector<ElementaryAuto<E>> stripped;  // inverses of the right factors, in stripping order
    auto strip = [&](int i, const P& f) {     // cur <- cur o (x_i -> x_i + f)
        cur = compose(cur, ElementaryAuto<E>(i, f).automorphism());
        stripped.emplace_back(i, -f);
    };
    for (int i = 1; i <= 2; ++i) {
        auto c = cur.image(i).constant_term();
        if (!c.is_zero()) strip(i, P::constant(-c));
    }
    auto coef = [&](int i, int j) { return cur.image(i).coefficient(j == 1 ? 1 : 0, j == 2 ? 1 : 0); };
    if (!coef(1, 2).is_zero() || !coef(2, 1).is_zero()) {
        if (coef(1, 1).is_zero()) strip(1, P::variable(rc, 2));
        if (!coef(2, 1).is_zero()) strip(2, P::variable(rc, 1) * -(coef(2, 1) / coef(1, 1)));
        if (!coef(1, 2).is_zero()) strip(1, P::variable(rc, 2) * -(coef(1, 2) / coef(2, 2)));
    }
    if (!cur.is_affine() || !coef(1, 2).is_zero() || !coef(2, 1).is_zero() || !cur.f1().constant_term().is_zero() ||
        !cur.f2().constant_term().is_zero())
        throw AssertionFailure("affine base case did not reach a diagonal map");
    CentralizerWord<E> out;
    out.tau = DiagonalAuto<E>(coef(1, 1), coef(2, 2));
    std::vector<ElementaryAuto<E>> chain(stripped.rbegin(), stripped.rend());
    chain.insert(chain.end(), tw.elementaries.begin(), tw.elementaries.end());
    auto tau = out.tau.automorphism(), tau_inv = out.tau.inverse().automorphism();
    for (const auto& e : chain) {
        auto conj = compose(compose(tau, e.automorphism()), tau_inv);
        auto f = conj.image(e.index) - P::variable(rc, e.index);
        ElementaryAuto<E> s(e.index, f);
        auto cls = is_homogeneous(f, ctx);
        if (!cls || *cls != g[e.index - 1])
            throw AssertionFailure("centralizer factor left the graded piece: " + s.to_string());
        out.factors.push_back(std::move(s));
    }
    if (out.compose_all(rc) != phi) throw AssertionFailure("centralizer word does not recompose");
    return out;
}

template <class F>
ElementaryAuto<UniPoly<F>> lift_elementary(const ElementaryAuto<ExtElem<F>>& s) {
    return {s.index, coefficient_lift(s.f)};
}

// ---------------------------------------------------------------------------
// Coordinates, mates, kernels

namespace detail {

template <class E>
std::vector<Monomial> monomials_up_to(int d) {
    std::vector<Monomial> out;  // graded lex, highest first
    for (int k = d; k >= 0; --k)
        for (int a = k; a >= 0; --a) out.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(k - a)});
    return out;
}

template <class E>
BiPoly<E> from_vector(const typename E::context_type& ctx, const std::vector<Monomial>& mons, const std::vector<E>& x) {
    std::vector<typename BiPoly<E>::Term> terms;
    for (std::size_t j = 0; j < mons.size(); ++j)
        if (!x[j].is_zero()) terms.emplace_back(mons[j], x[j]);
    return BiPoly<E>::from_terms(ctx, std::move(terms));
}

// Linear map on coefficient vectors into polynomials, as a dense matrix.
template <class E>
Matrix<E> columns_to_matrix(const std::vector<BiPoly<E>>& cols, const E& zero, std::vector<Monomial>* rows_out = nullptr) {
    std::map<std::uint64_t, std::size_t> row_of;
    std::vector<Monomial> rows;
    for (const auto& c : cols)
        for (const auto& [m, a] : c.terms())
            if (row_of.emplace(m.key(), rows.size()).second) rows.push_back(m);
    Matrix<E> a(rows.size(), std::vector<E>(cols.size(), zero));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [m, v] : cols[j].terms()) a[row_of[m.key()]][j] = v;
    if (rows_out) *rows_out = rows;
    return a;
}

template <class E>
std::vector<E> uni_mul(const std::vector<E>& a, const std::vector<E>& b, const E& zero) {
    if (a.empty() || b.empty()) return {};
    std::vector<E> c(a.size() + b.size() - 1, zero);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) c[i + j] += a[i] * b[j];
    }
    return c;
}

// f restricted to the line (x1, x2) = (al s + be, ga s + de), as coefficients in s.
template <class E>
std::vector<E> restrict_to_line(const BiPoly<E>& f, const std::array<E, 4>& line, const E& zero) {
    int d = std::max(f.total_degree(), 0);
    std::vector<std::vector<E>> p1{{zero.context().one()}}, p2{{zero.context().one()}};
    std::vector<E> l1{line[1], line[0]}, l2{line[3], line[2]};
    for (int i = 1; i <= d; ++i) {
        p1.push_back(uni_mul(p1.back(), l1, zero));
        p2.push_back(uni_mul(p2.back(), l2, zero));
    }
    std::vector<E> out(static_cast<std::size_t>(d) + 1, zero);
    for (const auto& [m, c] : f.terms()) {
        auto t = uni_mul(p1[m.e1], p2[m.e2], zero);
        for (std::size_t k = 0; k < t.size(); ++k) out[k] += c * t[k];
    }
    return out;
}

}  // namespace detail

// g with F[h, g] = F[x1, x2] and det J(h, g) = 1, of least leading monomial for
// the least degree bound that certifies; nullopt when none exists.
template <class E>
std::optional<BiPoly<E>> coordinate_mate(const BiPoly<E>& h) {
    if (h.total_degree() < 1) throw MathError("coordinate_mate needs a nonconstant polynomial");
    const auto& ctx = h.context();
    E zero = ctx.zero();
    auto h1 = h.derivative(1), h2 = h.derivative(2);
    for (int d = 1; d <= h.total_degree(); ++d) {
        auto mons = detail::monomials_up_to<E>(d);
        std::vector<BiPoly<E>> cols;
        for (const auto& m : mons) {
            auto mono = BiPoly<E>::monomial(ctx.one(), m.e1, m.e2);
            cols.push_back(h1 * mono.derivative(2) - h2 * mono.derivative(1));
        }
        std::vector<Monomial> rows;
        auto a = detail::columns_to_matrix(cols, zero, &rows);
        std::vector<E> b(rows.size(), zero);
        bool has_const = false;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].e1 == 0 && rows[i].e2 == 0) {
                b[i] = ctx.one();
                has_const = true;
            }
        if (!has_const) {
            a.push_back(std::vector<E>(mons.size(), zero));
            b.push_back(ctx.one());
        }
        auto sol = solve_linear(a, b, mons.size(), zero);
        if (!sol.particular) continue;
        auto x = *sol.particular;
        reduce_by_nullspace(x, sol);
        auto g = detail::from_vector(ctx, mons, x);
        if (is_automorphism(PolyAutomorphism<E>(h, g))) return g;
    }
    return std::nullopt;
}

// Least-degree q with q(f1, f2) = 0, given a nonzero kernel element. Random
// lines prune the candidate space; the answer is certified by substitution.
// A kernel element of least degree generates the prime kernel and is
// therefore irreducible.
template <class E>
BiPoly<E> kernel_generator(const BiPoly<E>& f1, const BiPoly<E>& f2, const BiPoly<E>& kernel_element,
                           std::uint64_t seed = 0x5eed) {
    const auto& ctx = f1.context();
    E zero = ctx.zero();
    if (kernel_element.is_zero() || !kernel_element.substitute(f1, f2).is_zero())
        throw MathError("kernel not principal within bound: no nonzero kernel element supplied");
    std::mt19937_64 rng(seed);
    int fdeg = std::max({f1.total_degree(), f2.total_degree(), 0});
    std::vector<std::array<std::vector<E>, 2>> lines;
    std::vector<std::vector<std::vector<E>>> pow1, pow2;
    auto add_line = [&] {
        std::array<E, 4> l{RandomElement<E>::draw(ctx, rng), RandomElement<E>::draw(ctx, rng),
                           RandomElement<E>::draw(ctx, rng), RandomElement<E>::draw(ctx, rng)};
        lines.push_back({detail::restrict_to_line(f1, l, zero), detail::restrict_to_line(f2, l, zero)});
        pow1.push_back({{ctx.one()}});
        pow2.push_back({{ctx.one()}});
    };
    auto power_of = [&](std::vector<std::vector<std::vector<E>>>& cache, std::size_t li, int which, std::uint32_t e)
        -> const std::vector<E>& {
        while (cache[li].size() <= e) cache[li].push_back(detail::uni_mul(cache[li].back(), lines[li][which], zero));
        return cache[li][e];
    };
    for (int d = 1; d <= kernel_element.total_degree(); ++d) {
        auto mons = detail::monomials_up_to<E>(d);
        std::size_t n = mons.size(), per_line = static_cast<std::size_t>(d * fdeg + 1);
        std::size_t want = std::max<std::size_t>(2, (n + 8) / per_line + 2);
        while (lines.size() < want) add_line();
        Matrix<E> a;
        for (std::size_t li = 0; li < want; ++li) {
            Matrix<E> block(per_line, std::vector<E>(n, zero));
            for (std::size_t j = 0; j < n; ++j) {
                auto prod = detail::uni_mul(power_of(pow1, li, 0, mons[j].e1), power_of(pow2, li, 1, mons[j].e2), zero);
                for (std::size_t k = 0; k < prod.size() && k < per_line; ++k) block[k][j] = prod[k];
            }
            for (auto& row : block) a.push_back(std::move(row));
        }
        auto sol = solve_linear(a, {}, n, zero);
        if (sol.nullspace.empty()) continue;
        // Exact step on the surviving candidates.
        std::vector<BiPoly<E>> cand, images;
        for (const auto& v : sol.nullspace) {
            cand.push_back(detail::from_vector(ctx, mons, v));
            images.push_back(cand.back().substitute(f1, f2));
        }
        auto exact = solve_linear(detail::columns_to_matrix(images, zero), {}, images.size(), zero);
        if (exact.nullspace.empty()) continue;
        BiPoly<E> q(ctx);
        const auto& lam = exact.nullspace.front();
        for (std::size_t j = 0; j < cand.size(); ++j)
            if (!lam[j].is_zero()) q += cand[j] * lam[j];
        if (q.total_degree() < 1 || !q.substitute(f1, f2).is_zero())
            throw AssertionFailure("kernel candidate failed exact certification");
        q = make_monic(q);
        if (!divide_exact(kernel_element, q)) throw AssertionFailure("kernel generator does not divide the kernel element");
        return q;
    }
    throw MathError("kernel not principal within bound");
}

// The homogeneous generator h of ker psibar from a generator q.
template <class E, class F>
BiPoly<E> homogenize_kernel_coordinate(BiPoly<E> q, const BiPoly<E>& f1, const BiPoly<E>& f2, const ActionContext<F>& ctx) {
    auto img = q.substitute(f1, f2);
    if (!img.is_zero()) {
        if (!img.is_constant()) throw MathError("polynomial is not in the kernel up to a constant");
        q -= img;
    }
    std::map<GradingDegree, BiPoly<E>> parts;
    for (const auto& [m, c] : q.terms()) {
        auto g = ctx.class_of(m);
        auto it = parts.find(g);
        auto t = BiPoly<E>::monomial(c, m.e1, m.e2);
        if (it == parts.end())
            parts.emplace(g, t);
        else
            it->second += t;
    }
    if (parts.size() != 1) throw AssertionFailure("kernel generator has " + std::to_string(parts.size()) + " homogeneous components");
    return make_monic(q);
}

template <class F>
struct CoordinateLift {
    PolyAutomorphism<UniPoly<F>> g;  // (g1, g2) in C_Gamma(R), det J = 1
    ExtElem<F> a;
    int index = 1;  // h = a * residue(g_index)
};

// Homogeneous coordinate h of kappa[x] -> (g1, g2) over R with h = a * gbar_i.
template <class F>
CoordinateLift<F> homogeneous_coordinate_lift(const KappaPoly<F>& h, const ActionContext<F>& ctx) {
    using P = KappaPoly<F>;
    const auto& kappa = h.context();
    auto mu = is_homogeneous(h, ctx);
    if (!mu || h.total_degree() < 1) throw MathError("h is not a homogeneous coordinate");
    auto mate = coordinate_mate(h);
    if (!mate) throw MathError("h is not a coordinate: " + h.to_string());
    const auto& q = ctx.quotient();
    auto g1 = variable_class<ExtElem<F>>(ctx, 1), g2 = variable_class<ExtElem<F>>(ctx, 2);
    auto target = q.sub(q.add(g1, g2), *mu);
    P gc(kappa);
    for (const auto& [m, c] : mate->terms())
        if (ctx.class_of(m) == target) gc += P::monomial(c, m.e1, m.e2);
    bool ok1 = *mu == g1 && target == g2, ok2 = *mu == g2 && target == g1;
    if (!ok1 && !ok2) throw AssertionFailure("homogeneous mate has the wrong class");
    int index = 1;
    if (ok1 && ok2) {
        bool has1 = !h.coefficient(1, 0).is_zero(), has2 = !h.coefficient(0, 1).is_zero();
        index = has2 && !has1 ? 2 : 1;
    } else if (ok2) {
        index = 2;
    }
    PolyAutomorphism<ExtElem<F>> phi = index == 1 ? PolyAutomorphism<ExtElem<F>>(h, gc) : PolyAutomorphism<ExtElem<F>>(-gc, h);
    if (!is_automorphism(phi)) throw AssertionFailure("homogeneous component of the mate is not a mate");
    auto word = centralizer_decompose(phi, ctx);
    PolyRing<F> R(kappa.base());
    auto cur = PolyAutomorphism<UniPoly<F>>::identity(R);
    for (auto it = word.factors.rbegin(); it != word.factors.rend(); ++it)
        cur = compose(lift_elementary(*it).automorphism(), cur);
    CoordinateLift<F> out{cur, word.tau[index], index};
    auto j = cur.jacobian();
    if (!(j.is_one())) throw AssertionFailure("lifted coordinates have det J != 1");
    if (residue_map(cur.image(index), kappa) * out.a != h) throw AssertionFailure("lift does not reduce to h");
    return out;
}

// Homogeneous mate g_mu of a homogeneous coordinate f1 of R[x].
template <class F>
RPoly<F> homogenize_last_coordinate(const RPoly<F>& f1, const RPoly<F>& g, const ActionContext<F>& ctx) {
    auto mu = is_homogeneous(f1, ctx);
    if (!mu) throw MathError("f1 is not homogeneous");
    const auto& q = ctx.quotient();
    auto target = q.sub(q.add(variable_class<UniPoly<F>>(ctx, 1), variable_class<UniPoly<F>>(ctx, 2)), *mu);
    RPoly<F> out(g.context());
    for (const auto& [m, c] : g.terms())
        if (ctx.class_of(m) == target) out += RPoly<F>::monomial(c, m.e1, m.e2);
    try {
        keller_descend(to_frac(PolyAutomorphism<UniPoly<F>>(f1, out)));
    } catch (const MathError& e) {
        throw AssertionFailure(std::string("homogeneous mate does not certify: ") + e.what());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Descent from K to R

template <class F>
struct DescentResult {
    PolyAutomorphism<UniPoly<F>> conjugator;
    std::vector<std::size_t> m_trace;  // prime count before each iteration, then the final 0
    std::vector<LogStep> log;
    std::size_t iterations() const { return m_trace.empty() ? 0 : m_trace.size() - 1; }
};

template <class F>
std::size_t prime_count(const UniFactorization<F>& f) {
    std::size_t m = 0;
    for (const auto& [p, e] : f.factors) m += static_cast<std::size_t>(e);
    return m;
}

// The character group of the diagonal images, acting on monomials.
template <class F>
ActionContext<F> descent_context(const FieldSpec& field, const std::vector<DiagonalAuto<F>>& diagonals) {
    std::vector<std::vector<F>> gens;
    for (const auto& d : diagonals) gens.push_back({d.a1, d.a2});
    return ActionContext<F>(field, CharacterGroup<F>(2, gens));
}

// psi0 over K with psi0^{-1} G psi0 diagonal -> psi over R with the same
// property, by right multiplication with elements of C_Gamma(K).
template <class F>
DescentResult<F> descend_conjugator(const PolyAutomorphism<RatFunc<F>>& psi0, const ActionContext<F>& ctx) {
    DescentResult<F> out;
    auto psi = psi0;
    for (;;) {
        auto [b1, g1] = primitive_associate(psi.f1());
        auto [b2, g2] = primitive_associate(psi.f2());
        PolyAutomorphism<UniPoly<F>> cur(g1, g2);
        if (!b1.is_one() || !b2.is_one())
            out.log.push_back({"normalize", stable_hash(psi.to_string()),
                               "scale by (" + b1.to_string() + ", " + b2.to_string() + ")"});
        auto jac = cur.jacobian();
        if (!jac.is_constant() || jac.is_zero()) throw MathError("conjugator is not an automorphism over K");
        auto fac = uni_factor(jac.constant_term());
        std::size_t m = prime_count(fac);
        if (!out.m_trace.empty() && m >= out.m_trace.back())
            throw AssertionFailure("descent did not decrease the prime count (" + std::to_string(out.m_trace.back()) +
                                   " -> " + std::to_string(m) + ")");
        out.m_trace.push_back(m);
        if (m == 0) {
            out.conjugator = keller_descend(to_frac(cur));
            out.log.push_back({"keller", stable_hash(cur.to_string()), "conjugator " + cur.to_string()});
            return out;
        }
        const auto& p = fac.factors.back().first;
        auto inv = invert(to_frac(cur));
        int idx = 0;
        RPoly<F> gk(cur.context());
        for (int i = 1; i <= 2 && idx == 0; ++i) {
            auto [b, g] = primitive_associate(inv.image(i));
            if (b.is_polynomial() && (b.num() % p).is_zero()) {
                idx = i;
                gk = g;
            }
        }
        if (idx == 0) throw AssertionFailure("no b_i divisible by the prime " + p.to_string());
        auto kappa = ExtField<F>::make(p);
        auto f1 = residue_map(cur.f1(), kappa), f2 = residue_map(cur.f2(), kappa);
        auto q = kernel_generator(f1, f2, residue_map(gk, kappa));
        auto h = homogenize_kernel_coordinate(q, f1, f2, ctx);
        auto lift = homogeneous_coordinate_lift(h, ctx);
        RPoly<F> img[2] = {cur.apply(lift.g.f1()), cur.apply(lift.g.f2())};
        auto divided = divide_by_scalar(img[lift.index - 1], p);
        if (!divided) throw AssertionFailure("p does not divide psi(g_i)");
        img[lift.index - 1] = *divided;
        psi = to_frac(PolyAutomorphism<UniPoly<F>>(img[0], img[1]));
        out.log.push_back({"descent_step", stable_hash(cur.to_string()),
                           "p = " + p.to_string() + ", h = " + h.to_string() + ", sigma2: x" +
                               std::to_string(lift.index) + " -> p^-1 * (" + lift.g.image(lift.index).to_string() + ")"});
    }
}

// ---------------------------------------------------------------------------
// End-to-end pipelines

// Finite abelian G over R = k[t]: diagonalize over K, then descend to R.
template <class F>
Certificate<UniPoly<F>> diagonalize_finite_abelian(const FiniteAbelianSubgroup<UniPoly<F>>& g) {
    Certificate<UniPoly<F>> cert;
    cert.field = g.field();
    cert.generators = g.generators();
    cert.orders = g.orders();
    cert.zetas = g.zetas();
    PolyRing<F> R = g.context();
    FracField<F> K(R.base());
    if (g.size() == 0) {
        cert.conjugator = PolyAutomorphism<UniPoly<F>>::identity(R);
        return cert;
    }
    FieldDiagonalization<RatFunc<F>> fd;
    try {
        fd = detail::diagonalize_words(g.words(), g.orders(), g.zetas(), K);
    } catch (const MathError& e) {
        throw MathError(std::string("diagonalization over K: ") + e.what());
    }
    cert.exponents = fd.exponents;
    cert.log = fd.log;
    std::vector<DiagonalAuto<F>> diags;
    for (std::size_t l = 0; l < g.size(); ++l) diags.push_back(cert.diagonal(l));
    auto ctx = descent_context(g.field(), diags);
    DescentResult<F> dr;
    try {
        dr = descend_conjugator(fd.conjugator, ctx);
    } catch (const MathError& e) {
        throw MathError(std::string("descent to R: ") + e.what());
    }
    cert.conjugator = dr.conjugator;
    cert.descent_trace = dr.m_trace;
    cert.log.insert(cert.log.end(), dr.log.begin(), dr.log.end());
    auto rep = verify_certificate(cert);
    if (!rep.ok) throw AssertionFailure("certificate verification failed: " + rep.failures.front());
    return cert;
}

// phi over R with det J phi = u in k, u != 1, fixing the coordinate f of K[x]:
// psi = (f, g + (u - 1)^{-1} h) over K, then descent for Gamma = {(1, u^i)}.
template <class F>
Certificate<UniPoly<F>> corollary_over_A_conjugator(const FieldSpec& field, const PolyAutomorphism<UniPoly<F>>& phi,
                                                   const KPoly<F>& f) {
    using KP = KPoly<F>;
    const auto& R = phi.context();
    auto jac = phi.jacobian();
    if (!is_unit_jacobian(jac)) throw MathError("det J phi is not a unit of k");
    F u = jac.constant_term().coeff(0);
    if (u.is_one()) throw MathError("det J phi must differ from 1");
    auto ord = multiplicative_order(u);
    if (!ord) throw MathError("det J phi has infinite order");
    auto phik = to_frac(phi);
    if (phik.apply(f) != f) throw MathError("phi does not fix f");
    auto g = coordinate_mate(f);
    if (!g) throw MathError("f is not a coordinate of K[x]");
    const auto& K = f.context();
    PolyAutomorphism<RatFunc<F>> chi(f, *g);
    KP h = phik.apply(*g) - *g * K.from_base(u);
    auto pre = invert(chi).apply(h);  // h = P(f) iff chi^{-1}(h) = P(x1)
    if (!pre.free_of(2)) throw MathError("phi(g) - u g is not in K[f]");
    PolyAutomorphism<RatFunc<F>> psi(f, *g + h * K.from_base((u - u.context().one()).inv()));
    auto ctx = descent_context(field, std::vector<DiagonalAuto<F>>{{u.context().one(), u}});
    auto dr = descend_conjugator(psi, ctx);
    Certificate<UniPoly<F>> cert;
    cert.field = field;
    cert.generators = {phi};
    cert.orders = {*ord};
    cert.zetas = {u};
    cert.exponents = {{0, 1}};
    cert.conjugator = dr.conjugator;
    cert.descent_trace = dr.m_trace;
    cert.log = {{"fixed_coordinate_conjugator", stable_hash(psi.to_string()), "psi over K = " + psi.to_string()}};
    cert.log.insert(cert.log.end(), dr.log.begin(), dr.log.end());
    (void)R;
    auto rep = verify_certificate(cert);
    if (!rep.ok) throw AssertionFailure("certificate verification failed: " + rep.failures.front());
    return cert;
}

}  // namespace planediag
