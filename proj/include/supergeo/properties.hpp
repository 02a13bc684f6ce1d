#pragma once

// Randomized algebraic laws, shared by the unit tests, the acceptance run and `supergeo selftest`.
// Each check draws its own cases from a generator seeded with (seed, check index), so results do
// not depend on which other checks ran.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cech.hpp"
#include "random.hpp"
#include "superalg.hpp"
#include "supermat.hpp"
#include "text.hpp"

namespace supergeo {

inline constexpr std::uint64_t default_seed = 20240611;

struct PropertyResult {
    std::string name;
    long cases = 0;
    long failures = 0;
    std::string first_failure;

    bool ok() const noexcept { return failures == 0 && cases > 0; }
};

namespace props {

inline TablePtr scratch_table()
{
    static const TablePtr t = make_table({"x", "y"}, {"a", "b", "c", "d"});
    return t;
}

inline TablePtr scratch_target()
{
    static const TablePtr t = make_table({"u", "v", "w"}, {"e", "f", "g"});
    return t;
}

inline int sign_of(Parity a, Parity b)
{
    return (a == Parity::odd && b == Parity::odd) ? -1 : 1;
}

inline Parity random_parity(Gen& g)
{
    return g.coin() ? Parity::odd : Parity::even;
}

using CaseFn = std::function<std::string(Gen&)>;

/// Runs `cases` draws; a case fails when it returns a non-empty message.
inline PropertyResult run(const std::string& name, std::uint64_t seed, long cases, const CaseFn& fn)
{
    PropertyResult r{name, cases, 0, {}};
    Gen gen(seed);
    for (long i = 0; i < cases; ++i) {
        std::string msg;
        try {
            msg = fn(gen);
        } catch (const std::exception& e) {
            msg = std::string("exception: ") + e.what();
        }
        if (!msg.empty()) {
            if (r.failures == 0) r.first_failure = "case " + std::to_string(i) + ": " + msg;
            ++r.failures;
        }
    }
    return r;
}

inline std::string canonical_idempotence(Gen& g)
{
    const SuperElem x = g.elem(scratch_table(), 6);
    const SuperElem once = canonicalize(x);
    if (!(canonicalize(once) == once) || !(once == x)) return "canonicalize not idempotent on " + format(x);
    return {};
}

inline std::string supercommutativity(Gen& g)
{
    const Parity pa = random_parity(g);
    const Parity pb = random_parity(g);
    const SuperElem a = g.elem(scratch_table(), 4, pa);
    const SuperElem b = g.elem(scratch_table(), 4, pb);
    SuperElem ba = b * a;
    if (sign_of(pa, pb) < 0) ba = -ba;
    if (!(a * b == ba)) return "ab != (-1)^{|a||b|} ba for a = " + format(a) + ", b = " + format(b);
    return {};
}

inline std::string associativity_distributivity(Gen& g)
{
    const SuperElem a = g.elem(scratch_table(), 3);
    const SuperElem b = g.elem(scratch_table(), 3);
    const SuperElem c = g.elem(scratch_table(), 3);
    if (!((a * b) * c == a * (b * c))) return "associativity fails";
    if (!(a * (b + c) == a * b + a * c)) return "left distributivity fails";
    if (!((a + b) * c == a * c + b * c)) return "right distributivity fails";
    return {};
}

inline std::string leibniz(Gen& g)
{
    const TablePtr t = scratch_table();
    const Parity pa = random_parity(g);
    const SuperElem a = g.elem(t, 4, pa);
    const SuperElem b = g.elem(t, 4);
    const Var odd{Parity::odd, static_cast<std::size_t>(g.uniform(0, static_cast<int>(t->num_odd()) - 1))};
    SuperElem rhs = deriv_odd_left(a, odd) * b;
    const SuperElem second = a * deriv_odd_left(b, odd);
    rhs += pa == Parity::odd ? -second : second;
    if (!(deriv_odd_left(a * b, odd) == rhs)) return "odd Leibniz rule fails for a = " + format(a) + ", b = " + format(b);
    const Var even{Parity::even, static_cast<std::size_t>(g.uniform(0, static_cast<int>(t->num_even()) - 1))};
    if (!(deriv_even(a * b, even) == deriv_even(a, even) * b + a * deriv_even(b, even))) return "even Leibniz rule fails";
    return {};
}

inline std::string invert_round_trip(Gen& g)
{
    const SuperElem u = g.even_unit(scratch_table());
    const SuperElem one = SuperElem::one(scratch_table());
    const SuperElem inv = invert_unit(u);
    if (!(u * inv == one) || !(inv * u == one)) return "u * invert_unit(u) != 1 for u = " + format(u);
    return {};
}

inline std::string substitution_homomorphism(Gen& g)
{
    const Substitution s = g.substitution(scratch_table(), scratch_target());
    const SuperElem a = g.elem(scratch_table(), 3, std::nullopt, 2);
    const SuperElem b = g.elem(scratch_table(), 3, std::nullopt, 2);
    const SuperElem sa = substitute(a, s);
    const SuperElem sb = substitute(b, s);
    if (!(substitute(a * b, s) == sa * sb)) return "substitute(ab) != substitute(a) substitute(b)";
    if (!(substitute(a + b, s) == sa + sb)) return "substitute is not additive";
    if (a.is_homogeneous() && !(sa.parity() == a.parity() || sa.is_zero())) return "substitute changed parity";
    return {};
}

inline std::string parse_format_round_trip(Gen& g)
{
    const SuperElem x = g.elem(scratch_table(), 5);
    const SuperElem y = parse(format(x), scratch_table());
    if (!(x == y)) return "parse(format(x)) != x for " + format(x);
    return {};
}

inline std::string berezinian_multiplicative(Gen& g)
{
    const TablePtr t = scratch_table();
    const std::size_t p = static_cast<std::size_t>(g.uniform(1, 2));
    const std::size_t q = static_cast<std::size_t>(g.uniform(1, 2));
    const SuperMatrix x = g.invertible_supermatrix(t, p, q);
    const SuperMatrix y = g.invertible_supermatrix(t, p, q);
    const SuperElem bx = berezinian(x);
    if (!(berezinian(matmul(x, y)) == bx * berezinian(y))) return "Ber(XY) != Ber(X) Ber(Y)";
    if (!(bx == berezinian_via_a(x))) return "the two Berezinian factorizations disagree";
    const SuperMatrix xi = inverse(x);
    if (!(matmul(x, xi) == SuperMatrix::identity(t, x.row_grading()))) return "X * inverse(X) != 1";
    if (!(bx * berezinian(xi) == SuperElem::one(t))) return "Ber(X) Ber(X^-1) != 1";
    return {};
}

inline std::string det_multiplicative(Gen& g)
{
    const TablePtr t = scratch_table();
    const std::size_t n = static_cast<std::size_t>(g.uniform(1, 3));
    ElemGrid a(t, n, n);
    ElemGrid b(t, n, n);
    for (auto* m : {&a, &b}) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) (*m)(i, j) = g.elem(t, 2, Parity::even, 1);
        }
    }
    if (!(det_even(a * b) == det_even(a) * det_even(b))) return "det(AB) != det(A) det(B)";
    return {};
}

inline std::string standard_form_idempotent(Gen& g)
{
    const TablePtr t = scratch_table();
    // 1|1 x 3|3 cell with the identity in even column 0 and odd column 3.
    ElemGrid cell(t, 2, 6);
    cell(0, 0) = SuperElem::one(t);
    cell(1, 3) = SuperElem::one(t);
    for (std::size_t j : {1u, 2u}) {
        cell(0, j) = g.elem(t, 2, Parity::even, 1);
        cell(1, j) = g.elem(t, 2, Parity::odd, 1);
        cell(0, j + 3) = g.elem(t, 2, Parity::odd, 1);
        cell(1, j + 3) = g.elem(t, 2, Parity::even, 1);
    }
    const SuperMatrix z(Grading{1, 1}, Grading{3, 3}, std::move(cell));
    if (!(standard_form(z, PivotColumns{{0}, {3}}) == z)) return "standard_form changed an already reduced cell";
    return {};
}

inline std::string serre_and_euler(Gen& g)
{
    const int n = g.uniform(1, 3);
    const int k = g.uniform(-12, 12);
    const int q = g.uniform(0, n);
    if (h_line(n, k, q) != h_line(n, -k - n - 1, n - q)) return "Serre duality fails at n=" + std::to_string(n) + " k=" + std::to_string(k);
    long chi = 0;
    for (int i = 0; i <= n; ++i) chi += (i % 2 == 0 ? 1 : -1) * h_line(n, k, i);
    if (mpz_class(chi) != binomial_poly(n + k, n)) return "Euler characteristic fails at n=" + std::to_string(n) + " k=" + std::to_string(k);
    if (static_cast<long>(basis_top(n, k).size()) != h_line(n, k, n)) return "basis_top length differs from h^n";
    return {};
}

} // namespace props

struct PropertySpec {
    const char* name;
    long weight;
    std::string (*fn)(Gen&);
};

inline const std::vector<PropertySpec>& property_specs()
{
    static const std::vector<PropertySpec> specs{
        {"canonical-idempotence", 1, props::canonical_idempotence},
        {"supercommutativity", 2, props::supercommutativity},
        {"associativity-distributivity", 2, props::associativity_distributivity},
        {"leibniz", 2, props::leibniz},
        {"invert-unit-round-trip", 2, props::invert_round_trip},
        {"substitute-homomorphism", 1, props::substitution_homomorphism},
        {"parse-format-round-trip", 1, props::parse_format_round_trip},
        {"berezinian-multiplicative", 1, props::berezinian_multiplicative},
        {"det-even-multiplicative", 1, props::det_multiplicative},
        {"standard-form-idempotent", 1, props::standard_form_idempotent},
        {"serre-duality-euler-characteristic", 2, props::serre_and_euler},
    };
    return specs;
}

/// Runs every property; `cases` is the total budget, split by weight (each gets at least one).
inline std::vector<PropertyResult> run_properties(std::uint64_t seed, long cases)
{
    long total_weight = 0;
    for (const auto& s : property_specs()) total_weight += s.weight;
    std::vector<PropertyResult> out;
    std::uint64_t index = 0;
    for (const auto& s : property_specs()) {
        const long n = std::max<long>(1, cases * s.weight / total_weight);
        out.push_back(props::run(s.name, seed * 1000003ULL + index++, n, s.fn));
    }
    return out;
}

} // namespace supergeo
