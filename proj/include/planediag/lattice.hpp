#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "field.hpp"

namespace planediag {

using IntVec = std::vector<long long>;
using IntMat = std::vector<IntVec>;

namespace lat {

using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<ZVec>;

inline ZVec zvec(const IntVec& v) {
    ZVec out;
    out.reserve(v.size());
    for (long long x : v) out.emplace_back(static_cast<long>(x));
    return out;
}

inline ZMat to_z(const IntMat& a) {
    ZMat out;
    for (const auto& r : a) out.push_back(zvec(r));
    return out;
}

inline long long to_ll(const mpz_class& z) {
    if (!z.fits_slong_p()) throw MathError("integer overflow in lattice computation");
    return z.get_si();
}

inline IntMat to_ll(const ZMat& a) {
    IntMat out;
    for (const auto& r : a) {
        IntVec row;
        for (const auto& z : r) row.push_back(to_ll(z));
        out.push_back(std::move(row));
    }
    return out;
}

inline ZMat identity(std::size_t n) {
    ZMat m(n, ZVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline ZMat multiply(const ZMat& a, const ZMat& b) {
    std::size_t m = a.size(), k = b.size(), n = k ? b[0].size() : 0;
    ZMat c(m, ZVec(n, 0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

// Fraction-free determinant.
inline mpz_class determinant(ZMat a) {
    std::size_t n = a.size();
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && a[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(a[k], a[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

// Row-style Hermite form: H = U * A with H in echelon form, positive pivots,
// entries above pivots reduced into [0, pivot).
struct Hermite {
    ZMat h;
    ZMat u;
    std::size_t rank = 0;
};

inline Hermite hermite(ZMat a) {
    std::size_t m = a.size(), n = m ? a[0].size() : 0;
    ZMat u = identity(m);
    std::size_t r = 0;
    auto combine = [&](std::size_t i, std::size_t j, const mpz_class& s, const mpz_class& t, const mpz_class& p,
                       const mpz_class& q) {
        // row_i <- s row_i + t row_j ; row_j <- p row_i + q row_j
        for (auto* mat : {&a, &u}) {
            auto& M = *mat;
            for (std::size_t c = 0; c < M[i].size(); ++c) {
                mpz_class x = M[i][c], y = M[j][c];
                M[i][c] = s * x + t * y;
                M[j][c] = p * x + q * y;
            }
        }
    };
    for (std::size_t c = 0; c < n && r < m; ++c) {
        for (std::size_t i = r + 1; i < m; ++i) {
            if (a[i][c] == 0) continue;
            mpz_class g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[r][c].get_mpz_t(), a[i][c].get_mpz_t());
            mpz_class ar = a[r][c] / g, ai = a[i][c] / g;
            combine(r, i, s, t, -ai, ar);
        }
        if (a[r][c] == 0) continue;
        if (a[r][c] < 0) {
            for (auto& x : a[r]) x = -x;
            for (auto& x : u[r]) x = -x;
        }
        for (std::size_t i = 0; i < r; ++i) {
            mpz_class q = floor_div(a[i][c], a[r][c]);
            if (q == 0) continue;
            for (std::size_t k = 0; k < n; ++k) a[i][k] -= q * a[r][k];
            for (std::size_t k = 0; k < m; ++k) u[i][k] -= q * u[r][k];
        }
        ++r;
    }
    return {a, u, r};
}

// Left kernel basis: rows x with x * A = 0.
inline ZMat left_kernel(const ZMat& a) {
    auto h = hermite(a);
    ZMat out;
    for (std::size_t i = h.rank; i < h.h.size(); ++i) out.push_back(h.u[i]);
    return out;
}

// Echelon basis of the row space (nonzero rows of the Hermite form).
inline ZMat row_basis(const ZMat& a) {
    auto h = hermite(a);
    h.h.resize(h.rank);
    return h.h;
}

// Membership of x in the row space of an echelon basis.
inline bool in_row_space(const ZMat& echelon, ZVec x) {
    for (const auto& row : echelon) {
        std::size_t c = 0;
        while (c < row.size() && row[c] == 0) ++c;
        if (c == row.size()) continue;
        for (std::size_t k = 0; k < c; ++k)
            if (x[k] != 0) return false;
        if (x[c] % row[c] != 0) return false;
        mpz_class q = x[c] / row[c];
        for (std::size_t k = 0; k < x.size(); ++k) x[k] -= q * row[k];
    }
    return std::all_of(x.begin(), x.end(), [](const mpz_class& z) { return z == 0; });
}

struct Smith {
    ZMat d, u, v, v_inv;
};

// U * A * V = D, D diagonal with d_1 | d_2 | ..., U and V unimodular.
inline Smith smith(ZMat a) {
    std::size_t m = a.size(), n = m ? a[0].size() : 0;
    ZMat u = identity(m), v = identity(n), vi = identity(n);
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        std::swap(u[i], u[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (auto& r : a) std::swap(r[i], r[j]);
        for (auto& r : v) std::swap(r[i], r[j]);
        std::swap(vi[i], vi[j]);
    };
    for (std::size_t k = 0; k < std::min(m, n); ++k) {
        for (;;) {
            std::size_t bi = m, bj = n;
            for (std::size_t i = k; i < m; ++i)
                for (std::size_t j = k; j < n; ++j)
                    if (a[i][j] != 0 && (bi == m || abs(a[i][j]) < abs(a[bi][bj]))) bi = i, bj = j;
            if (bi == m) goto done;
            swap_rows(k, bi);
            swap_cols(k, bj);
            bool clean = true;
            for (std::size_t i = k + 1; i < m; ++i) {
                if (a[i][k] == 0) continue;
                mpz_class q = floor_div(a[i][k], a[k][k]);
                for (std::size_t c = 0; c < n; ++c) a[i][c] -= q * a[k][c];
                for (std::size_t c = 0; c < m; ++c) u[i][c] -= q * u[k][c];
                if (a[i][k] != 0) clean = false;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                if (a[k][j] == 0) continue;
                mpz_class q = floor_div(a[k][j], a[k][k]);
                for (std::size_t r = 0; r < m; ++r) a[r][j] -= q * a[r][k];
                for (std::size_t r = 0; r < n; ++r) v[r][j] -= q * v[r][k];
                for (std::size_t c = 0; c < n; ++c) vi[k][c] += q * vi[j][c];
                if (a[k][j] != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad = m;
            for (std::size_t i = k + 1; i < m && bad == m; ++i)
                for (std::size_t j = k + 1; j < n; ++j)
                    if (a[i][j] % a[k][k] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            for (std::size_t c = 0; c < n; ++c) a[k][c] += a[bad][c];
            for (std::size_t c = 0; c < m; ++c) u[k][c] += u[bad][c];
        }
        if (a[k][k] < 0) {
            for (auto& x : a[k]) x = -x;
            for (auto& x : u[k]) x = -x;
        }
    }
done:
    return {a, u, v, vi};
}

}  // namespace lat

// Subgroup of (k*)^n given by generators; entries are units of k.
template <class F>
struct CharacterGroup {
    std::size_t n = 0;
    std::vector<std::vector<F>> generators;

    CharacterGroup() = default;
    CharacterGroup(std::size_t arity, std::vector<std::vector<F>> gens) : n(arity), generators(std::move(gens)) {
        if (n < 1) throw MathError("character group arity must be positive");
        for (const auto& g : generators) {
            if (g.size() != n) throw MathError("generator arity mismatch");
            for (const auto& a : g)
                if (a.is_zero()) throw MathError("character group entries must be units");
        }
    }
};

// Discrete logarithms w.r.t. the fixed generator of GF(p)*, or the sign
// character on {1, -1} over QQ.
class DiscreteLog {
public:
    explicit DiscreteLog(const FieldSpec& field) : field_(field) {
        if (!field.is_prime_field()) return;
        std::uint64_t p = field.p(), n = p - 1;
        m_ = 1;
        while (m_ * m_ < n) ++m_;
        std::uint64_t x = 1;
        for (std::uint64_t j = 0; j < m_; ++j) {
            baby_.emplace(x, j);
            x = detail::mulmod(x, field.generator(), p);
        }
        giant_ = detail::powmod(detail::powmod(field.generator(), m_, p), p - 2, p);
    }

    std::uint64_t order() const { return field_.unit_group_exponent(); }

    std::uint64_t operator()(const Fp& a) const {
        if (a.is_zero()) throw MathError("discrete log of zero");
        std::uint64_t p = field_.p(), y = a.value();
        for (std::uint64_t i = 0; i <= m_; ++i) {
            auto it = baby_.find(y);
            if (it != baby_.end()) return (i * m_ + it->second) % (p - 1);
            y = detail::mulmod(y, giant_, p);
        }
        throw AssertionFailure("discrete log not found");
    }
    std::uint64_t operator()(const Rational& a) const {
        if (a.is_one()) return 0;
        if (a == -a.context().one()) return 1;
        throw MathError("only +-1 are roots of unity in QQ, got " + a.to_string());
    }

private:
    FieldSpec field_;
    std::uint64_t m_ = 0;
    std::uint64_t giant_ = 0;
    std::unordered_map<std::uint64_t, std::uint64_t> baby_;
};

// Rows generate M = { i in Z^n : a^i = 1 for all a }.
struct RelationLattice {
    IntMat basis;
    std::size_t n() const { return basis.empty() ? 0 : basis[0].size(); }
};

template <class F>
RelationLattice relation_lattice(const CharacterGroup<F>& gamma, const FieldSpec& field) {
    std::size_t n = gamma.n, r = gamma.generators.size();
    if (r == 0) return {lat::to_ll(lat::identity(n))};
    DiscreteLog dlog(field);
    mpz_class N = static_cast<unsigned long>(dlog.order());
    // x * [E ; N I] = 0, x = (i, y)
    lat::ZMat m(n + r, lat::ZVec(r, 0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < r; ++l)
            m[j][l] = static_cast<unsigned long>(dlog(gamma.generators[l][j]));
    for (std::size_t l = 0; l < r; ++l) m[n + l][l] = N;
    lat::ZMat proj;
    for (auto& row : lat::left_kernel(m)) proj.emplace_back(row.begin(), row.begin() + static_cast<long>(n));
    return {lat::to_ll(lat::row_basis(proj))};
}

// a^i for an exponent vector i (negative entries allowed).
template <class F>
F character_value(const std::vector<F>& a, const IntVec& i) {
    F r = a.at(0).context().one();
    for (std::size_t j = 0; j < a.size(); ++j) {
        long long e = i[j];
        r *= e >= 0 ? power(a[j], static_cast<unsigned long long>(e))
                    : power(a[j].inv(), static_cast<unsigned long long>(-e));
    }
    return r;
}

// Element of Gamma_Gamma in invariant-factor coordinates.
struct GradingDegree {
    IntVec coords;
    friend bool operator==(const GradingDegree& a, const GradingDegree& b) { return a.coords == b.coords; }
    friend bool operator!=(const GradingDegree& a, const GradingDegree& b) { return !(a == b); }
    friend bool operator<(const GradingDegree& a, const GradingDegree& b) { return a.coords < b.coords; }
    bool is_zero() const {
        return std::all_of(coords.begin(), coords.end(), [](long long c) { return c == 0; });
    }
    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < coords.size(); ++i) s += (i ? "," : "") + std::to_string(coords[i]);
        return s + ")";
    }
};

// Z^n / M in Smith form. factors[j] == 0 means a free coordinate.
class QuotientGroup {
public:
    QuotientGroup() = default;

    static QuotientGroup from_lattice(const RelationLattice& m, std::size_t n) {
        QuotientGroup q;
        q.n_ = n;
        lat::ZMat a = m.basis.empty() ? lat::ZMat() : lat::to_z(m.basis);
        if (a.empty()) a.assign(1, lat::ZVec(n, 0));
        auto s = lat::smith(a);
        q.check_certificate(a, s);
        std::size_t diag = std::min(a.size(), n);
        for (std::size_t j = 0; j < n; ++j) {
            mpz_class d = j < diag ? s.d[j][j] : mpz_class(0);
            if (d == 1) continue;
            q.keep_.push_back(j);
            q.factors_.push_back(lat::to_ll(d));
        }
        q.v_ = lat::to_ll(s.v);
        q.v_inv_ = lat::to_ll(s.v_inv);
        for (std::size_t i = 0; i < n; ++i) {
            IntVec e(n, 0);
            e[i] = 1;
            q.gammas_.push_back(q.project(e));
        }
        for (const auto& row : m.basis)
            if (!q.project(row).is_zero()) throw AssertionFailure("relation does not vanish in quotient");
        return q;
    }

    std::size_t n() const { return n_; }
    const IntVec& factors() const { return factors_; }
    std::size_t rank() const { return factors_.size(); }
    const IntMat& projection_matrix() const { return v_; }
    const std::vector<GradingDegree>& gammas() const { return gammas_; }
    const GradingDegree& gamma(std::size_t i) const { return gammas_.at(i - 1); }
    bool is_trivial() const { return factors_.empty(); }

    GradingDegree project(const IntVec& x) const {
        GradingDegree g;
        for (std::size_t k = 0; k < keep_.size(); ++k) {
            long long s = 0;
            for (std::size_t i = 0; i < n_; ++i) s += x[i] * v_[i][keep_[k]];
            g.coords.push_back(reduce(s, factors_[k]));
        }
        return g;
    }
    GradingDegree zero() const { return GradingDegree{IntVec(factors_.size(), 0)}; }
    GradingDegree add(const GradingDegree& a, const GradingDegree& b) const {
        GradingDegree g;
        for (std::size_t k = 0; k < factors_.size(); ++k) g.coords.push_back(reduce(a.coords[k] + b.coords[k], factors_[k]));
        return g;
    }
    GradingDegree scale(const GradingDegree& a, long long s) const {
        GradingDegree g;
        for (std::size_t k = 0; k < factors_.size(); ++k) g.coords.push_back(reduce(a.coords[k] * s, factors_[k]));
        return g;
    }
    GradingDegree sub(const GradingDegree& a, const GradingDegree& b) const { return add(a, scale(b, -1)); }
    GradingDegree normalize(GradingDegree g) const {
        if (g.coords.size() != factors_.size()) throw MathError("grading degree has wrong length");
        for (std::size_t k = 0; k < factors_.size(); ++k) g.coords[k] = reduce(g.coords[k], factors_[k]);
        return g;
    }
    // Some x in Z^n projecting to g.
    IntVec lift(const GradingDegree& g) const {
        IntVec y(n_, 0);
        for (std::size_t k = 0; k < keep_.size(); ++k) y[keep_[k]] = g.coords[k];
        IntVec x(n_, 0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) x[i] += y[j] * v_inv_[j][i];
        return x;
    }

private:
    static long long reduce(long long s, long long d) {
        if (d == 0) return s;
        s %= d;
        return s < 0 ? s + d : s;
    }
    void check_certificate(const lat::ZMat& a, const lat::Smith& s) const {
        auto uav = lat::multiply(lat::multiply(s.u, a), s.v);
        if (uav != s.d) throw AssertionFailure("Smith form certificate U*A*V = D failed");
        auto du = lat::determinant(s.u), dv = lat::determinant(s.v);
        if (abs(du) != 1 || abs(dv) != 1) throw AssertionFailure("Smith form transforms not unimodular");
        if (lat::multiply(s.v, s.v_inv) != lat::identity(s.v.size()))
            throw AssertionFailure("Smith form inverse transform mismatch");
        for (std::size_t i = 0; i < s.d.size(); ++i)
            for (std::size_t j = 0; j < s.d[i].size(); ++j)
                if (i != j && s.d[i][j] != 0) throw AssertionFailure("Smith form not diagonal");
        std::size_t diag = std::min(s.d.size(), n_);
        for (std::size_t j = 0; j + 1 < diag; ++j) {
            const auto &x = s.d[j][j], &y = s.d[j + 1][j + 1];
            if (x == 0 ? y != 0 : y % x != 0) throw AssertionFailure("invariant factors do not divide in sequence");
        }
    }

    std::size_t n_ = 0;
    std::vector<std::size_t> keep_;
    IntVec factors_;
    IntMat v_, v_inv_;
    std::vector<GradingDegree> gammas_;
};

inline QuotientGroup quotient_structure(const RelationLattice& m, std::size_t n) {
    return QuotientGroup::from_lattice(m, n);
}
inline QuotientGroup quotient_structure(const RelationLattice& m) { return QuotientGroup::from_lattice(m, m.n()); }

// Subgroup of Gamma_Gamma generated by the given elements, with a membership
// solver over the integers modulo the invariant factors.
class SubgroupDescription {
public:
    SubgroupDescription(const QuotientGroup& q, std::vector<GradingDegree> gens) : gens_(std::move(gens)) {
        std::size_t s = q.rank();
        lat::ZMat rows;
        for (const auto& g : gens_) rows.push_back(lat::zvec(g.coords));
        for (std::size_t k = 0; k < s; ++k) {
            if (q.factors()[k] == 0) continue;
            lat::ZVec e(s, 0);
            e[k] = static_cast<long>(q.factors()[k]);
            rows.push_back(e);
        }
        if (s > 0 && !rows.empty()) echelon_ = lat::row_basis(rows);
        s_ = s;
    }
    const std::vector<GradingDegree>& generators() const { return gens_; }
    bool contains(const GradingDegree& x) const {
        if (s_ == 0) return true;
        return lat::in_row_space(echelon_, lat::zvec(x.coords));
    }

private:
    std::vector<GradingDegree> gens_;
    lat::ZMat echelon_;
    std::size_t s_ = 0;
};

// Gamma^(i): generated by gamma_j, j != i (1-based i).
inline SubgroupDescription subgroup_gamma_i(const QuotientGroup& q, std::size_t i) {
    if (i < 1 || i > q.n()) throw MathError("index out of range");
    std::vector<GradingDegree> gens;
    for (std::size_t j = 1; j <= q.n(); ++j)
        if (j != i) gens.push_back(q.gamma(j));
    return SubgroupDescription(q, gens);
}

struct TIndex {
    enum class Kind { finite, infinite };
    Kind kind = Kind::finite;
    long long value = 1;

    static TIndex infinite() { return {Kind::infinite, 0}; }
    static TIndex finite(long long t) { return {Kind::finite, t}; }
    bool is_infinite() const { return kind == Kind::infinite; }
    friend bool operator==(const TIndex& a, const TIndex& b) {
        return a.kind == b.kind && (a.kind == Kind::infinite || a.value == b.value);
    }
    std::string to_string() const { return is_infinite() ? "inf" : std::to_string(value); }
};

// Minimal t >= 1 with t*gamma_i in Gamma^(i), or infinity.
inline TIndex t_index(const QuotientGroup& q, std::size_t i) {
    if (i < 1 || i > q.n()) throw MathError("index out of range");
    std::size_t s = q.rank();
    if (s == 0) return TIndex::finite(1);
    // rows: gamma_i, gamma_j (j != i), d_k e_k; kernel's first coordinates form tZ
    lat::ZMat rows;
    rows.push_back(lat::zvec(q.gamma(i).coords));
    for (std::size_t j = 1; j <= q.n(); ++j)
        if (j != i) rows.push_back(lat::zvec(q.gamma(j).coords));
    for (std::size_t k = 0; k < s; ++k) {
        lat::ZVec e(s, 0);
        e[k] = static_cast<long>(q.factors()[k]);
        rows.push_back(e);
    }
    mpz_class g = 0;
    for (const auto& x : lat::left_kernel(rows)) g = gcd(g, x[0]);
    if (g == 0) return TIndex::infinite();
    return TIndex::finite(lat::to_ll(abs(g)));
}

struct CanonicalExpression {
    std::vector<std::size_t> permutation;  // permutation[l] = original 1-based index at position l
    std::vector<TIndex> t;                  // t-indices in permuted order
    std::size_t r = 0, s = 0;
    IntVec i;  // i_1..i_s in permuted order
    GradingDegree lambda;
};

// The unique expression gamma = sum_{l<=s} i_l gamma_l + lambda after
// reordering indices (infinite first, then 2 <= t < inf, then t = 1).
inline CanonicalExpression canonical_expression(const QuotientGroup& q, const GradingDegree& gamma) {
    std::size_t n = q.n();
    if (gamma.coords.size() != q.rank()) throw MathError("grading degree not in the group");
    for (std::size_t k = 0; k < q.rank(); ++k)
        if (q.factors()[k] != 0 && (gamma.coords[k] < 0 || gamma.coords[k] >= q.factors()[k]))
            throw MathError("grading degree not reduced");
    CanonicalExpression out;
    std::vector<TIndex> t(n);
    for (std::size_t i = 1; i <= n; ++i) t[i - 1] = t_index(q, i);
    auto rank_of = [](const TIndex& x) { return x.is_infinite() ? 0 : (x.value >= 2 ? 1 : 2); };
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return rank_of(t[a - 1]) < rank_of(t[b - 1]); });
    out.permutation = perm;
    for (auto p : perm) out.t.push_back(t[p - 1]);
    while (out.r < n && out.t[out.r].is_infinite()) ++out.r;
    out.s = out.r;
    while (out.s < n && out.t[out.s].value >= 2) ++out.s;
    IntVec j_orig = q.lift(gamma);  // sum_l j_l e_l projects to gamma
    out.lambda = q.zero();
    for (std::size_t l = 0; l < n; ++l) {
        long long j = j_orig[perm[l] - 1];
        if (l < out.r) {
            out.i.push_back(j);
            continue;
        }
        long long tl = out.t[l].value;
        long long rem = ((j % tl) + tl) % tl;
        long long quo = (j - rem) / tl;
        if (l < out.s) out.i.push_back(rem);
        out.lambda = q.add(out.lambda, q.scale(q.gamma(perm[l]), quo * tl));
    }
    // recombination check
    GradingDegree back = out.lambda;
    for (std::size_t l = 0; l < out.s; ++l) back = q.add(back, q.scale(q.gamma(perm[l]), out.i[l]));
    if (back != gamma) throw AssertionFailure("canonical expression does not recombine");
    return out;
}

}  // namespace planediag
