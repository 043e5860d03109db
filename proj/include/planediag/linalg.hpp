#pragma once

#include <optional>
#include <random>
#include <vector>

#include "extfield.hpp"
#include "field.hpp"
#include "ratfunc.hpp"

namespace planediag {

template <class E>
using Matrix = std::vector<std::vector<E>>;

template <class E>
struct LinearSolution {
    std::optional<std::vector<E>> particular;
    // Reduced row echelon basis; pivot of basis[j] is pivots[j], with 1 there
    // and 0 in the other basis vectors' pivots.
    std::vector<std::vector<E>> nullspace;
    std::vector<std::size_t> pivots;
};

// Solves a x = b over a field (b may be empty for the homogeneous system).
// Earlier columns are preferred as pivots of the nullspace basis, so reducing
// a solution by it minimizes the earliest nonzero column.
template <class E>
LinearSolution<E> solve_linear(Matrix<E> a, std::vector<E> b, std::size_t cols, const E& zero) {
    std::size_t rows = a.size();
    bool homogeneous = b.empty();
    if (homogeneous) b.assign(rows, zero);
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        E inv = a[r][c].inv();
        for (std::size_t k = c; k < cols; ++k) a[r][k] *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            E f = a[i][c];
            for (std::size_t k = c; k < cols; ++k)
                if (!a[r][k].is_zero()) a[i][k] -= f * a[r][k];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    LinearSolution<E> out;
    bool consistent = true;
    for (std::size_t i = r; i < rows; ++i)
        if (!b[i].is_zero()) consistent = false;
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    if (consistent) {
        std::vector<E> x(cols, zero);
        for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
        out.particular = std::move(x);
    }
    // Nullspace in terms of free columns, then brought to echelon form with
    // respect to the column order.
    Matrix<E> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<E> v(cols, zero);
        v[f] = zero.context().one();
        for (std::size_t i = 0; i < r; ++i) v[pivot_col[i]] = -a[i][f];
        basis.push_back(std::move(v));
    }
    std::size_t br = 0;
    for (std::size_t c = 0; c < cols && br < basis.size(); ++c) {
        std::size_t p = br;
        while (p < basis.size() && basis[p][c].is_zero()) ++p;
        if (p == basis.size()) continue;
        std::swap(basis[p], basis[br]);
        E inv = basis[br][c].inv();
        for (auto& x : basis[br]) x *= inv;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (i == br || basis[i][c].is_zero()) continue;
            E f = basis[i][c];
            for (std::size_t k = 0; k < cols; ++k) basis[i][k] -= f * basis[br][k];
        }
        out.pivots.push_back(c);
        ++br;
    }
    out.nullspace = std::move(basis);
    return out;
}

// Reduces x modulo the echelon nullspace basis, clearing every pivot entry.
template <class E>
void reduce_by_nullspace(std::vector<E>& x, const LinearSolution<E>& s) {
    for (std::size_t j = 0; j < s.nullspace.size(); ++j) {
        E f = x[s.pivots[j]];
        if (f.is_zero()) continue;
        for (std::size_t k = 0; k < x.size(); ++k) x[k] -= f * s.nullspace[j][k];
    }
}

// Random field elements for randomized (always re-verified) linear algebra.
template <class E>
struct RandomElement;

template <>
struct RandomElement<Fp> {
    template <class Rng>
    static Fp draw(const PrimeField& k, Rng& rng) {
        return Fp(std::uniform_int_distribution<std::uint64_t>(0, k.modulus() - 1)(rng), k.modulus());
    }
};

template <>
struct RandomElement<Rational> {
    template <class Rng>
    static Rational draw(const RationalField&, Rng& rng) {
        return Rational(std::uniform_int_distribution<long>(-60, 60)(rng), 1);
    }
};

template <class F>
struct RandomElement<ExtElem<F>> {
    template <class Rng>
    static ExtElem<F> draw(const ExtField<F>& kappa, Rng& rng) {
        ExtElem<F> r = kappa.zero();
        auto t = kappa.reduce(UniPoly<F>::monomial(kappa.base().one(), 1));
        ExtElem<F> tp = kappa.one();
        for (int i = 0; i < kappa.degree(); ++i, tp *= t) r += tp * kappa.from_base(RandomElement<F>::draw(kappa.base(), rng));
        return r;
    }
};

template <class F>
struct RandomElement<RatFunc<F>> {
    template <class Rng>
    static RatFunc<F> draw(const FracField<F>& K, Rng& rng) {
        auto t = K.t();
        return K.from_base(RandomElement<F>::draw(K.base(), rng)) + t * K.from_base(RandomElement<F>::draw(K.base(), rng));
    }
};

}  // namespace planediag
