#pragma once

// Cech cohomology of O(k), Omega^p(k) and T(k) on P^n for the standard cover by the n+1 charts
// {X_i != 0}, plus the two connecting-map computations on 2|2 supermanifolds over P^2.
//
// H^n(O(k)) has the totally negative degree-k monomials as a basis; every other Laurent monomial on
// the full intersection is a coboundary. Classes are therefore stored as coefficient maps on those.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "atlas.hpp"
#include "families.hpp"
#include "superalg.hpp"

namespace supergeo {

/// Exponent vector (e_0, ..., e_n) of X_0^e_0 ... X_n^e_n.
using HomMonomial = std::vector<int>;

/// Homogeneous Laurent polynomial in X_0..X_n.
using HomPoly = std::map<HomMonomial, Rational>;

inline std::string format_monomial(const HomMonomial& m)
{
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!out.empty()) out += '*';
        out += "X" + std::to_string(i);
        if (m[i] != 1) out += "^" + std::to_string(m[i]);
    }
    return out.empty() ? "1" : out;
}

/// Inverse of format_monomial for n+1 variables.
inline HomMonomial parse_monomial(const std::string& text, int n)
{
    HomMonomial m(static_cast<std::size_t>(n + 1), 0);
    if (text == "1") return m;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] != 'X') throw parse_error("monomial: expected 'X'", pos);
        ++pos;
        std::size_t used = 0;
        int idx = 0;
        int e = 1;
        try {
            idx = std::stoi(text.substr(pos), &used);
        } catch (const std::exception&) {
            throw parse_error("monomial: expected variable index", pos);
        }
        pos += used;
        if (idx < 0 || idx > n) throw parse_error("monomial: variable index out of range", pos);
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            try {
                e = std::stoi(text.substr(pos), &used);
            } catch (const std::exception&) {
                throw parse_error("monomial: expected exponent", pos);
            }
            pos += used;
        }
        m[static_cast<std::size_t>(idx)] += e;
        if (pos < text.size()) {
            if (text[pos] != '*') throw parse_error("monomial: expected '*'", pos);
            ++pos;
        }
    }
    return m;
}

/// x (x-1) ... (x-r+1) / r! for any integer x; this is C(x, r) for x >= 0 and the polynomial
/// continuation otherwise.
inline mpz_class binomial_poly(long x, long r)
{
    if (r < 0) return 0;
    mpz_class num = 1;
    mpz_class den = 1;
    for (long i = 0; i < r; ++i) {
        num *= x - i;
        den *= i + 1;
    }
    return num / den;
}

/// Ordinary binomial, zero outside 0 <= r <= x.
inline long binomial(long x, long r)
{
    if (r < 0 || x < 0 || r > x) return 0;
    return binomial_poly(x, r).get_si();
}

inline void check_degree(int n, int q)
{
    if (n < 1) throw domain_error("projective dimension must be at least 1");
    if (q < 0 || q > n) throw domain_error("cohomological degree must lie in [0, n]");
}

/// dim H^q(P^n, O(k)).
inline long h_line(int n, int k, int q)
{
    check_degree(n, q);
    if (q == 0) return k >= 0 ? binomial(n + k, n) : 0;
    if (q == n) return k <= -n - 1 ? binomial(-k - 1, n) : 0;
    return 0;
}

namespace detail {

/// Every length-`len` vector of nonnegative integers summing to `total`, in lexicographic order.
inline void compositions(std::size_t len, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (cur.size() + 1 == len) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= total; ++v) {
        cur.push_back(v);
        compositions(len, total - v, cur, out);
        cur.pop_back();
    }
}

} // namespace detail

/// Degree-k monomials with every exponent <= -1, ascending lexicographically.
inline std::vector<HomMonomial> basis_top(int n, int k)
{
    if (n < 1) throw domain_error("projective dimension must be at least 1");
    std::vector<HomMonomial> out;
    const int slack = -k - n - 1;
    if (slack < 0) return out;
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    detail::compositions(static_cast<std::size_t>(n + 1), slack, cur, comps);
    for (const auto& c : comps) {
        HomMonomial m;
        for (int a : c) m.push_back(-1 - a);
        out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Degree-k monomials with nonnegative exponents (a basis of H^0(O(k))), ascending.
inline std::vector<HomMonomial> basis_global(int n, int k)
{
    if (n < 1) throw domain_error("projective dimension must be at least 1");
    std::vector<HomMonomial> out;
    if (k < 0) return out;
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    detail::compositions(static_cast<std::size_t>(n + 1), k, cur, comps);
    out.assign(comps.begin(), comps.end());
    std::sort(out.begin(), out.end());
    return out;
}

/// Monomial basis of H^q(O(k)) on the standard cover.
inline std::vector<HomMonomial> cohomology_basis(int n, int k, int q)
{
    check_degree(n, q);
    if (q == 0) return basis_global(n, k);
    if (q == n) return basis_top(n, k);
    return {};
}

inline bool totally_negative(const HomMonomial& m)
{
    for (int e : m) {
        if (e >= 0) return false;
    }
    return true;
}

/// Rank of a rational matrix (row-major) by fraction-based Gaussian elimination.
inline std::size_t rational_rank(std::vector<std::vector<Rational>> rows)
{
    if (rows.empty()) return 0;
    const std::size_t ncols = rows.front().size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][col] == 0) continue;
            const Rational f = rows[r][col] / rows[rank][col];
            for (std::size_t c = col; c < ncols; ++c) rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

/// Kernel dimension of H^2(O(k)) -> H^2(O(k+1))^3, f -> (X_0 f, X_1 f, X_2 f), on monomial bases.
inline long euler_kernel_dim(int k)
{
    const auto src = basis_top(2, k);
    const auto dst = basis_top(2, k + 1);
    if (src.empty()) return 0;
    std::map<HomMonomial, std::size_t> index;
    for (std::size_t i = 0; i < dst.size(); ++i) index.emplace(dst[i], i);
    std::vector<std::vector<Rational>> rows(3 * dst.size(), std::vector<Rational>(src.size(), 0));
    for (std::size_t c = 0; c < src.size(); ++c) {
        for (std::size_t v = 0; v < 3; ++v) {
            HomMonomial m = src[c];
            m[v] += 1;
            if (auto it = index.find(m); it != index.end()) rows[v * dst.size() + it->second][c] = 1;
        }
    }
    return static_cast<long>(src.size() - rational_rank(std::move(rows)));
}

/// dim H^1(P^n, T(k)).
inline long h1_tangent(int n, int k)
{
    if (n < 1) throw domain_error("projective dimension must be at least 1");
    if (n == 1) return h_line(1, k + 2, 1);
    if (n == 2) return euler_kernel_dim(k);
    return 0;
}

/// dim H^q(P^n, Omega^p(k)).
inline long bott(int n, int p, int k, int q)
{
    if (n < 1) throw domain_error("projective dimension must be at least 1");
    if (p < 0 || p > n) throw domain_error("form degree must lie in [0, n]");
    check_degree(n, q);
    if (q == 0) {
        if (k == 0 && p == 0) return 1;
        if (k > p) return binomial(k + n - p, k) * binomial(k - 1, p);
        return 0;
    }
    if (q == n) {
        if (k == 0 && p == n) return 1;
        if (k < p - n) return binomial(-k + p, -k) * binomial(-k - 1, n - p);
        return 0;
    }
    return (k == 0 && p == q) ? 1 : 0;
}

/// h^1(T(k)) on P^2 through Serre duality and Bott: H^1(T(k)) = H^1(Omega^1(-k-3))^*.
inline long h1_tangent_bott(int k)
{
    return bott(2, 1, -k - 3, 1);
}

/// Class in H^q(P^n, O(k)) as coefficients on the monomial basis; zero coefficients are absent.
struct CohClass {
    int n = 2;
    int k = -3;
    int q = 2;
    std::map<HomMonomial, Rational> coeffs;

    bool is_zero() const noexcept { return coeffs.empty(); }

    Rational coefficient(const HomMonomial& m) const
    {
        auto it = coeffs.find(m);
        return it == coeffs.end() ? Rational(0) : it->second;
    }

    void add(const HomMonomial& m, const Rational& c)
    {
        if (c == 0) return;
        auto [it, inserted] = coeffs.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) coeffs.erase(it);
        }
    }

    friend bool operator==(const CohClass&, const CohClass&) = default;
};

/// Projects a degree-k homogeneous polynomial on the full intersection to its H^n class.
inline CohClass project_top(int n, int k, const HomPoly& h)
{
    CohClass cls{n, k, n, {}};
    for (const auto& [m, c] : h) {
        if (static_cast<int>(m.size()) != n + 1) throw dimension_error("project_top: wrong number of variables");
        int deg = 0;
        for (int e : m) deg += e;
        if (deg != k) throw domain_error("project_top: polynomial is not of degree " + std::to_string(k));
        if (totally_negative(m)) cls.add(m, c);
    }
    return cls;
}

/// Homogenizes an element of chart `chart` on P^n whose terms all carry the full odd monomial,
/// identified with `trivialization` * X_chart^k. The chart's even variables are X_m / X_chart for
/// m != chart in ascending order.
inline HomPoly homogenize_top(int n, int k, int chart, const SuperElem& section, const Rational& trivialization)
{
    const VarTable& t = *section.table();
    if (static_cast<int>(t.num_even()) != n) throw dimension_error("homogenize: chart must have n even variables");
    const OddSet top = t.num_odd() == 64 ? ~OddSet{0} : (OddSet{1} << t.num_odd()) - 1;
    HomPoly out;
    for (const auto& [key, c] : section.terms()) {
        if (key.odd != top) throw domain_error("homogenize: term is not a multiple of the top odd monomial");
        HomMonomial m(static_cast<std::size_t>(n + 1), 0);
        int shift = k;
        for (std::size_t a = 0; a < key.exps.size(); ++a) {
            m[static_cast<std::size_t>(p2_homogeneous_index(chart, a))] += key.exps[a];
            shift -= key.exps[a];
        }
        m[static_cast<std::size_t>(chart)] += shift;
        out[m] += c * trivialization;
        if (out[m] == 0) out.erase(m);
    }
    return out;
}

/// Class in H^n(O(k)) of a chart-0 section sum c * z^e * (top odd monomial), the top odd monomial
/// standing for trivialization * X_0^k.
inline CohClass class_in_top(int n, int k, const SuperElem& section, const Rational& trivialization = 1)
{
    return project_top(n, k, homogenize_top(n, k, 0, section, trivialization));
}

/// Lift of the O(d) cocycle {X0/X1, X1/X2, X2/X0} to even units on the three overlaps.
struct PicardLift {
    SuperElem s01;  // over chart 1
    SuperElem s12;  // over chart 2
    SuperElem s20;  // over chart 0
    int degree = 1;
};

/// The lift {z11, z22, z20} of O(1).
inline PicardLift standard_picard_lift()
{
    const auto charts = p2_charts();
    return PicardLift{SuperElem::variable(charts[1].table, "z11"), SuperElem::variable(charts[2].table, "z22"),
                      SuperElem::variable(charts[0].table, "z20"), 1};
}

inline PicardLift trivial_picard_lift()
{
    const auto charts = p2_charts();
    return PicardLift{SuperElem::one(charts[1].table), SuperElem::one(charts[2].table), SuperElem::one(charts[0].table), 0};
}

struct PicardReport {
    SuperElem coboundary;  // s01 * s12 * s20 in chart 0
    CohClass cls;
};

/// Cech coboundary of the lift, as an element 1 + (nilpotent) on the triple overlap, and the class
/// of the nilpotent part in H^2(O(-3)).
inline PicardReport picard_delta(const Atlas& atlas, const PicardLift& lift)
{
    atlas.validate_structure();
    if (atlas.size() != 3) throw domain_error("picard_delta: atlas must have the three charts of P^2");
    if (atlas.trivialization.size() != 3) throw domain_error("picard_delta: atlas has no Sym^2 F trivialization");
    const std::array<const SuperElem*, 3> s{&lift.s01, &lift.s12, &lift.s20};
    const std::array<std::pair<int, int>, 3> overlaps{{{0, 1}, {1, 2}, {2, 0}}};
    for (std::size_t idx = 0; idx < 3; ++idx) {
        const auto [i, j] = overlaps[idx];
        const Chart& cj = atlas.chart(j);
        const std::string where = overlap_label(i, j);
        if (!same_table(s[idx]->table(), cj.table)) throw domain_error("picard_delta: lift on " + where + " is not over chart " + std::to_string(j));
        if (!s[idx]->is_even()) throw domain_error("picard_delta: lift on " + where + " is not even");
        const SuperElem expected = pow(p2_affine_ratio(cj, i, j), lift.degree);
        if (!(body(*s[idx]) == expected)) {
            throw domain_error("picard_delta: lift on " + where + " does not reduce to the O(" + std::to_string(lift.degree) + ") cocycle");
        }
    }
    const SuperElem a = substitute(lift.s01, atlas.transition(1, 0).pullback());
    const SuperElem b = substitute(lift.s12, atlas.transition(2, 0).pullback());
    const SuperElem product = a * b * lift.s20;
    const SuperElem rest = product - SuperElem::one(atlas.chart(0).table);
    if (!body(rest).is_zero()) throw domain_error("picard_delta: lift bodies do not multiply to 1");
    return PicardReport{product, class_in_top(2, -3, rest, atlas.trivialization[0])};
}

struct ObstructionReport {
    std::array<HomPoly, 3> coboundary;  // components along d/dX_0, d/dX_1, d/dX_2
    HomPoly h;                          // coboundary = h * (X_0 d/dX_0 + X_1 d/dX_1 + X_2 d/dX_2)
    CohClass cls;
};

/// Connecting map of the twisted Euler sequence applied to the atlas's own obstruction cocycle (the
/// J^2 parts of the even transition images, i.e. lambda * omega). Each overlap field is lifted
/// through d/d(X_m/X_i) = X_i d/dX_m with the top odd monomial of chart j read as c_j / X_j^3; the
/// Cech coboundary of the lifts is Euler-proportional, and its factor is projected to H^2(O(-3)).
inline ObstructionReport obstruction_delta(const Atlas& atlas)
{
    atlas.validate_structure();
    if (atlas.size() != 3) throw domain_error("obstruction_delta: atlas must have the three charts of P^2");
    if (atlas.trivialization.size() != 3) throw domain_error("obstruction_delta: atlas has no Sym^2 F trivialization");
    ObstructionReport r;
    for (const auto& m : atlas.maps) {
        const OverlapField w = overlap_field(m);
        const Rational& c = atlas.trivialization[static_cast<std::size_t>(w.source)];
        for (std::size_t a = 0; a < w.coeffs.size(); ++a) {
            const int target = p2_homogeneous_index(w.target, a);
            for (const auto& [hom, coeff] : homogenize_top(2, -3, w.source, w.coeffs[a], c)) {
                HomMonomial mono = hom;
                mono[static_cast<std::size_t>(w.target)] += 1;
                auto& slot = r.coboundary[static_cast<std::size_t>(target)];
                slot[mono] += coeff;
                if (slot[mono] == 0) slot.erase(mono);
            }
        }
    }
    for (const auto& [mono, coeff] : r.coboundary[0]) {
        HomMonomial m = mono;
        m[0] -= 1;
        r.h[m] = coeff;
    }
    for (std::size_t v = 0; v < 3; ++v) {
        HomPoly expected;
        for (const auto& [mono, coeff] : r.h) {
            HomMonomial m = mono;
            m[v] += 1;
            expected[m] = coeff;
        }
        if (expected != r.coboundary[v]) {
            throw domain_error("obstruction_delta: coboundary of the lifted cocycle is not in the Euler image");
        }
    }
    r.cls = project_top(2, -3, r.h);
    return r;
}

} // namespace supergeo
