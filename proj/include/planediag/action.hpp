#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "word.hpp"

namespace planediag {

// The field in which words and inverses over C are computed.
template <class C>
struct FieldOf {
    using type = C;
    static const PolyAutomorphism<C>& map(const PolyAutomorphism<C>& phi) { return phi; }
};

template <class F>
struct FieldOf<UniPoly<F>> {
    using type = RatFunc<F>;
    static PolyAutomorphism<RatFunc<F>> map(const PolyAutomorphism<UniPoly<F>>& phi) { return to_frac(phi); }
};

// Grading data for a character group Gamma in (k*)^n: the relation lattice and
// the quotient Gamma_Gamma = Z^n / M.
template <class F>
class ActionContext {
public:
    ActionContext() = default;
    ActionContext(FieldSpec field, CharacterGroup<F> gamma)
        : field_(std::move(field)), gamma_(std::move(gamma)) {
        lattice_ = relation_lattice(gamma_, field_);
        quotient_ = quotient_structure(lattice_, gamma_.n);
        for (const auto& row : lattice_.basis)
            for (const auto& a : gamma_.generators)
                if (!character_value(a, row).is_one()) throw AssertionFailure("relation lattice row is not a relation");
    }

    // Gamma = { (zeta_1^i_1, ..., zeta_r^i_r) } for a group with declared roots.
    static ActionContext from_roots(const FieldSpec& field, const std::vector<F>& zetas) {
        std::size_t r = zetas.size();
        if (r == 0) return ActionContext(field, CharacterGroup<F>(1, {}));
        std::vector<std::vector<F>> gens;
        for (std::size_t l = 0; l < r; ++l) {
            std::vector<F> g(r, zetas[l].context().one());
            g[l] = zetas[l];
            gens.push_back(g);
        }
        return ActionContext(field, CharacterGroup<F>(r, gens));
    }

    const FieldSpec& field() const { return field_; }
    const CharacterGroup<F>& gamma() const { return gamma_; }
    const RelationLattice& lattice() const { return lattice_; }
    const QuotientGroup& quotient() const { return quotient_; }
    std::size_t n() const { return gamma_.n; }

    GradingDegree class_of(const IntVec& exponents) const { return quotient_.project(exponents); }
    GradingDegree class_of(const Monomial& m) const {
        if (n() != 2) throw MathError("monomial grading needs a character group in (k*)^2");
        return quotient_.project({static_cast<long long>(m.e1), static_cast<long long>(m.e2)});
    }
    // a^gamma, well defined on the quotient.
    F character(const std::vector<F>& a, const GradingDegree& g) const { return character_value(a, quotient_.lift(g)); }

private:
    FieldSpec field_ = FieldSpec::rationals();
    CharacterGroup<F> gamma_;
    RelationLattice lattice_;
    QuotientGroup quotient_;
};

// G = <phi_1> x ... x <phi_r> with declared orders d_l and primitive d_l-th
// roots zeta_l. Orders and commutation are verified at construction by word
// reduction in the amalgamated product over the fraction field.
template <class C>
class FiniteAbelianSubgroup {
public:
    using F = typename C::base_field;
    using Map = PolyAutomorphism<C>;

    FiniteAbelianSubgroup(FieldSpec field, std::vector<Map> gens, std::vector<std::uint64_t> orders,
                          std::vector<F> zetas)
        : field_(std::move(field)), gens_(std::move(gens)), orders_(std::move(orders)), zetas_(std::move(zetas)) {
        if (gens_.size() != orders_.size() || gens_.size() != zetas_.size())
            throw MathError("generators, orders and roots must have equal length");
        if (!gens_.empty()) ctx_ = gens_[0].context();
        for (std::size_t l = 0; l < gens_.size(); ++l) {
            if (orders_[l] == 0) throw MathError("order must be positive");
            auto ord = multiplicative_order(zetas_[l]);
            if (!ord || *ord != orders_[l])
                throw MathError("zeta " + zetas_[l].to_string() + " is not a primitive " + std::to_string(orders_[l]) +
                                "-th root of unity");
            if (field_.is_prime_field() && orders_[l] % field_.p() == 0)
                throw MathError("non-modular case required");
        }
        verify();
    }

    const FieldSpec& field() const { return field_; }
    const std::vector<Map>& generators() const { return gens_; }
    const std::vector<std::uint64_t>& orders() const { return orders_; }
    const std::vector<F>& zetas() const { return zetas_; }
    std::size_t size() const { return gens_.size(); }
    const typename C::context_type& context() const { return ctx_; }
    const std::vector<AmalgamWord<typename FieldOf<C>::type>>& words() const { return words_; }

    std::uint64_t exponent() const {
        std::uint64_t e = 1;
        for (auto d : orders_) e = std::lcm(e, d);
        return e;
    }
    ActionContext<F> action_context() const { return ActionContext<F>::from_roots(field_, zetas_); }

private:
    void verify() {
        using K = typename FieldOf<C>::type;
        for (std::size_t l = 0; l < gens_.size(); ++l) {
            auto phi = FieldOf<C>::map(gens_[l]);
            AmalgamWord<K> w(phi.context());
            try {
                w = AmalgamWord<K>::from_automorphism(phi);
            } catch (const MathError&) {
                throw MathError("generator " + std::to_string(l + 1) + " is not an automorphism");
            }
            // a tame decomposition over K already forces det J in K*
            if (!w.pow(orders_[l]).is_identity())
                throw MathError("not diagonalizable: generator " + std::to_string(l + 1) + " does not satisfy phi^" +
                                std::to_string(orders_[l]) + " = id");
            for (std::uint64_t j = 1; j < orders_[l]; ++j)
                if (orders_[l] % j == 0 && w.pow(j).is_identity())
                    throw MathError("generator " + std::to_string(l + 1) + " has order smaller than declared");
            words_.push_back(std::move(w));
        }
        for (std::size_t a = 0; a < words_.size(); ++a)
            for (std::size_t b = a + 1; b < words_.size(); ++b)
                if (!(words_[a] * words_[b] * words_[a].inverse() * words_[b].inverse()).is_identity())
                    throw MathError("generators " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                                    " do not commute");
    }

    FieldSpec field_;
    std::vector<Map> gens_;
    std::vector<std::uint64_t> orders_;
    std::vector<F> zetas_;
    typename C::context_type ctx_{};
    std::vector<AmalgamWord<typename FieldOf<C>::type>> words_;
};

template <class C>
using HomogeneousComponentSet = std::map<GradingDegree, BiPoly<C>>;

namespace detail {

// Inverse of V[j][e] = z^(e*j), 0 <= j, e < d, by Gauss-Jordan over k.
template <class F>
std::vector<std::vector<F>> vandermonde_inverse(const F& z, std::size_t d) {
    const auto& ctx = z.context();
    std::vector<std::vector<F>> a(d, std::vector<F>(2 * d, ctx.zero()));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t e = 0; e < d; ++e) a[j][e] = power(z, e * j);
        a[j][d + j] = ctx.one();
    }
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t p = c;
        while (p < d && a[p][c].is_zero()) ++p;
        if (p == d) throw MathError("singular Vandermonde system: root of unity not of exact order");
        std::swap(a[p], a[c]);
        F inv = a[c][c].inv();
        for (auto& x : a[c]) x *= inv;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c || a[r][c].is_zero()) continue;
            F f = a[r][c];
            for (std::size_t k = 0; k < 2 * d; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<std::vector<F>> out(d);
    for (std::size_t r = 0; r < d; ++r) out[r].assign(a[r].begin() + static_cast<long>(d), a[r].end());
    return out;
}

template <class C, class F>
C lift_scalar(const typename C::context_type& ctx, const F& a) {
    return ctx.from_base(a);
}

}  // namespace detail

namespace detail {

// Splits f into simultaneous eigencomponents: for each generator of order d,
// the d x d Vandermonde system in phi^j(f) with nodes zeta^e. Keys are the
// exponent vectors (e_1, ..., e_r) with phi_l(c) = zeta_l^e_l c.
template <class C>
std::vector<std::pair<IntVec, BiPoly<C>>> eigen_split(const BiPoly<C>& f, const std::vector<PolyAutomorphism<C>>& gens,
                                                      const std::vector<std::uint64_t>& orders,
                                                      const std::vector<typename C::base_field>& zetas) {
    using F = typename C::base_field;
    std::size_t r = gens.size();
    std::vector<std::pair<IntVec, BiPoly<C>>> comps;
    if (f.is_zero()) return comps;
    comps.emplace_back(IntVec(r, 0), f);
    for (std::size_t l = 0; l < r; ++l) {
        std::size_t d = orders[l];
        auto vinv = vandermonde_inverse(zetas[l], d);
        std::vector<std::pair<IntVec, BiPoly<C>>> next;
        for (const auto& [exps, h] : comps) {
            std::vector<BiPoly<C>> images{h};
            for (std::size_t j = 1; j <= d; ++j) images.push_back(gens[l].apply(images.back()));
            if (images[d] != h) throw MathError("generator order mismatch while splitting into eigencomponents");
            for (std::size_t e = 0; e < d; ++e) {
                BiPoly<C> c(h.context());
                for (std::size_t j = 0; j < d; ++j)
                    if (!vinv[e][j].is_zero()) c += images[j] * lift_scalar<C, F>(h.context(), vinv[e][j]);
                if (c.is_zero()) continue;
                IntVec ne = exps;
                ne[l] = static_cast<long long>(e);
                next.emplace_back(ne, c);
            }
        }
        comps = std::move(next);
    }
    return comps;
}

}  // namespace detail

// Eigencomponents of f keyed by their class in the grading group of G.
template <class C>
HomogeneousComponentSet<C> kspan_decompose(const BiPoly<C>& f, const FiniteAbelianSubgroup<C>& g,
                                           const ActionContext<typename C::base_field>& ctx) {
    HomogeneousComponentSet<C> out;
    std::size_t r = g.size();
    auto comps = detail::eigen_split(f, g.generators(), g.orders(), g.zetas());
    for (auto& [exps, c] : comps) {
        auto key = r == 0 ? ctx.quotient().zero() : ctx.class_of(exps);
        auto it = out.find(key);
        if (it == out.end())
            out.emplace(key, c);
        else
            it->second += c;
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

// Product of the per-generator averaging projectors (1/d) sum_j zeta^(-i j) phi^j.
template <class C>
BiPoly<C> reynolds_component(const BiPoly<C>& f, const FiniteAbelianSubgroup<C>& g,
                             const ActionContext<typename C::base_field>& ctx, const GradingDegree& gamma) {
    using F = typename C::base_field;
    std::size_t r = g.size();
    if (r == 0) return gamma.is_zero() ? f : BiPoly<C>(f.context());
    IntVec exps = ctx.quotient().lift(ctx.quotient().normalize(gamma));
    BiPoly<C> cur = f;
    for (std::size_t l = 0; l < r; ++l) {
        std::uint64_t d = g.orders()[l];
        const F& z = g.zetas()[l];
        F dk = z.context().from_int(static_cast<long long>(d));
        if (dk.is_zero()) throw MathError("non-modular case required");
        long long e = ((exps[l] % static_cast<long long>(d)) + static_cast<long long>(d)) % static_cast<long long>(d);
        F zinv = power(z.inv(), static_cast<unsigned long long>(e));
        BiPoly<C> acc(f.context()), img = cur;
        F w = z.context().one();
        for (std::uint64_t j = 0; j < d; ++j) {
            acc += img * detail::lift_scalar<C, F>(f.context(), w);
            img = g.generators()[l].apply(img);
            w *= zinv;
        }
        cur = acc * detail::lift_scalar<C, F>(f.context(), dk.inv());
    }
    return cur;
}

// Class of f under the diagonal (monomial) grading, if homogeneous.
template <class C>
std::optional<GradingDegree> is_homogeneous(const BiPoly<C>& f, const ActionContext<typename C::base_field>& ctx) {
    if (f.is_zero()) return ctx.quotient().zero();
    std::optional<GradingDegree> cls;
    for (const auto& [m, c] : f.terms()) {
        auto g = ctx.class_of(m);
        if (!cls)
            cls = g;
        else if (*cls != g)
            return std::nullopt;
    }
    return cls;
}

// Homogeneity for the conjugated action: phi_l(f) = zeta_l^(e_l) f for all l.
template <class C>
std::optional<GradingDegree> is_homogeneous(const BiPoly<C>& f, const FiniteAbelianSubgroup<C>& g,
                                            const ActionContext<typename C::base_field>& ctx) {
    using F = typename C::base_field;
    if (f.is_zero()) return ctx.quotient().zero();
    IntVec exps(g.size(), 0);
    for (std::size_t l = 0; l < g.size(); ++l) {
        auto img = g.generators()[l].apply(f);
        F z = g.zetas()[l].context().one();
        bool found = false;
        for (std::uint64_t e = 0; e < g.orders()[l]; ++e, z *= g.zetas()[l]) {
            if (img == f * detail::lift_scalar<C, F>(f.context(), z)) {
                exps[l] = static_cast<long long>(e);
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    return g.size() == 0 ? ctx.quotient().zero() : ctx.class_of(exps);
}

// Default degree bound: largest total degree in psi and the generators, plus 2.
template <class C, class D>
int default_degree_bound(const PolyAutomorphism<C>& psi, const std::vector<PolyAutomorphism<D>>& gens) {
    int b = std::max(psi.f1().total_degree(), psi.f2().total_degree());
    for (const auto& g : gens) b = std::max({b, g.f1().total_degree(), g.f2().total_degree()});
    return b + 2;
}

// Bounded R-module generators of V_gamma = psi(K[x]_gamma) n R[x] via
// V_gamma = V_lambda f^i. psi's images must be primitive.
template <class F>
std::vector<RPoly<F>> v_gamma_generators(const PolyAutomorphism<UniPoly<F>>& psi, const ActionContext<F>& ctx,
                                         const GradingDegree& gamma, int bound) {
    for (int i = 1; i <= 2; ++i)
        if (psi.image(i).is_zero() || !content_primitive(psi.image(i)).first.is_one())
            throw MathError("images of psi must be primitive; normalize with content_primitive first");
    const auto& q = ctx.quotient();
    auto ce = canonical_expression(q, q.normalize(gamma));
    std::vector<RPoly<F>> out;
    IntVec fixed(2, 0);  // exponents of f^i, original index order
    for (std::size_t l = 0; l < ce.s; ++l) {
        if (l < ce.r && ce.i[l] < 0) return out;  // K[x]_gamma = 0
        fixed[ce.permutation[l] - 1] = ce.i[l];
    }
    RPoly<F> fi = psi.f1().pow(static_cast<unsigned>(fixed[0])) * psi.f2().pow(static_cast<unsigned>(fixed[1]));
    int used = static_cast<int>(fixed[0] + fixed[1]);
    for (int d = 0; d + used <= bound; ++d) {
        for (int a = d; a >= 0; --a) {
            Monomial m{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(d - a)};
            if (ctx.class_of(m) != ce.lambda) continue;
            auto img = psi.apply(RPoly<F>::monomial(psi.context().one(), m.e1, m.e2));
            out.push_back(content_primitive(img).second * fi);
        }
    }
    return out;
}

struct DegenerationVerdict {
    GradingDegree gamma;
    std::size_t generators = 0;
    bool degenerates = false;
};

// Explicit generator lists per class, reduced at pi.
template <class F>
std::vector<DegenerationVerdict> degeneration_check(const std::map<GradingDegree, std::vector<RPoly<F>>>& gens,
                                                    const UniPoly<F>& pi) {
    auto kappa = ExtField<F>::make(pi);
    std::vector<DegenerationVerdict> out;
    for (const auto& [g, list] : gens) {
        bool any_nonzero = false, all_vanish = true;
        for (const auto& f : list) {
            if (f.is_zero()) continue;
            any_nonzero = true;
            if (!residue_map(f, kappa).is_zero()) all_vanish = false;
        }
        if (any_nonzero) out.push_back({g, list.size(), all_vanish});
    }
    return out;
}

template <class F>
std::vector<DegenerationVerdict> degeneration_check(const PolyAutomorphism<UniPoly<F>>& psi,
                                                    const ActionContext<F>& ctx, const UniPoly<F>& pi, int bound) {
    std::map<GradingDegree, std::vector<RPoly<F>>> gens;
    for (int d = 0; d <= bound; ++d)
        for (int a = d; a >= 0; --a) {
            auto g = ctx.class_of(Monomial{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(d - a)});
            if (!gens.count(g)) gens[g] = v_gamma_generators(psi, ctx, g, bound);
        }
    return degeneration_check(gens, pi);
}

}  // namespace planediag
