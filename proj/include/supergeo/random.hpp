#pragma once

// Seeded generators of random algebra elements, substitutions and supermatrices.

#include <cstdint>
#include <random>
#include <vector>

#include "superalg.hpp"
#include "supermat.hpp"

namespace supergeo {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return uniform(0, 1) == 1; }

    /// Small nonzero rational p/q with |p| <= 5, 1 <= q <= 4.
    Rational rational()
    {
        int p = 0;
        while (p == 0) p = uniform(-5, 5);
        Rational r(p, uniform(1, 4));
        r.canonicalize();
        return r;
    }

    std::vector<int> exponents(std::size_t n, int range)
    {
        std::vector<int> e(n);
        for (auto& x : e) x = uniform(-range, range);
        return e;
    }

    /// Random subset of the odd variables whose size has the requested parity (any if unset).
    OddSet odd_subset(std::size_t q, std::optional<Parity> parity = std::nullopt, int min_size = 0)
    {
        for (;;) {
            OddSet s = 0;
            for (std::size_t i = 0; i < q; ++i) {
                if (coin()) s |= OddSet{1} << i;
            }
            if (std::popcount(s) < min_size) continue;
            if (!parity || parity_of(s) == *parity) return s;
        }
    }

    /// Up to `max_terms` random terms; homogeneous of the given parity when requested.
    SuperElem elem(const TablePtr& t, int max_terms = 4, std::optional<Parity> parity = std::nullopt, int range = 2,
                   int min_j = 0)
    {
        SuperElem r = SuperElem::zero(t);
        const int count = uniform(0, max_terms);
        for (int i = 0; i < count; ++i) {
            r += SuperElem::monomial(t, rational(), exponents(t->num_even(), range), odd_subset(t->num_odd(), parity, min_j));
        }
        return r;
    }

    SuperElem nonzero_elem(const TablePtr& t, int max_terms = 4, std::optional<Parity> parity = std::nullopt)
    {
        for (;;) {
            SuperElem r = elem(t, max_terms, parity);
            if (!r.is_zero()) return r;
        }
    }

    /// Laurent monomial body plus an even nilpotent part.
    SuperElem even_unit(const TablePtr& t, int range = 2)
    {
        SuperElem r = SuperElem::monomial(t, rational(), exponents(t->num_even(), range));
        return r + elem(t, 3, Parity::even, range, 2);
    }

    /// Even images with unit bodies and odd images of odd parity, between the given tables.
    Substitution substitution(const TablePtr& src, const TablePtr& tgt)
    {
        Substitution s(src, tgt);
        for (std::size_t i = 0; i < src->num_even(); ++i) s.even_images.push_back(even_unit(tgt, 1));
        for (std::size_t i = 0; i < src->num_odd(); ++i) s.odd_images.push_back(elem(tgt, 3, Parity::odd, 1));
        return s;
    }

    /// Square even grid whose body is upper triangular with monomial diagonal, so it is invertible.
    ElemGrid invertible_even_grid(const TablePtr& t, std::size_t n)
    {
        ElemGrid g(t, n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) {
                    g(i, j) = even_unit(t, 1);
                } else {
                    g(i, j) = elem(t, 2, Parity::even, 1, i < j ? 0 : 2);
                }
            }
        }
        return g;
    }

    /// Parity-consistent p|q square supermatrix with invertible A and D.
    SuperMatrix invertible_supermatrix(const TablePtr& t, std::size_t p, std::size_t q)
    {
        ElemGrid b(t, p, q);
        ElemGrid c(t, q, p);
        for (auto* g : {&b, &c}) {
            for (std::size_t i = 0; i < g->rows(); ++i) {
                for (std::size_t j = 0; j < g->cols(); ++j) (*g)(i, j) = elem(t, 2, Parity::odd, 1);
            }
        }
        return SuperMatrix::from_blocks(invertible_even_grid(t, p), b, c, invertible_even_grid(t, q));
    }

    std::mt19937_64& engine() noexcept { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace supergeo
