#pragma once

// The supermanifolds of dimension 2|2 over P^2 built from a rank-2 fermionic cocycle and a scalar
// lambda, the super big-cell charts of the Pi-projective plane, and a few deliberately broken
// atlases used as negative controls.
//
// Chart i has even coordinates z1i, z2i and odd coordinates t1i, t2i (display names). The even
// coordinates are the affine ratios X_m / X_i for m != i in ascending order.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atlas.hpp"
#include "superalg.hpp"
#include "supermat.hpp"
#include "text.hpp"

namespace supergeo {

inline constexpr int p2_charts_count = 3;

/// Homogeneous index m of the a-th even coordinate X_m / X_i of chart i.
inline int p2_homogeneous_index(int chart, std::size_t a)
{
    int m = static_cast<int>(a);
    if (m >= chart) ++m;
    return m;
}

/// Position of X_m / X_i among chart i's coordinates (m != i).
inline std::size_t p2_coordinate_index(int chart, int m)
{
    return static_cast<std::size_t>(m < chart ? m : m - 1);
}

inline Chart p2_chart(int i)
{
    const std::string s = std::to_string(i);
    return Chart{i, make_table({"z1" + s, "z2" + s}, {"t1" + s, "t2" + s})};
}

inline std::vector<Chart> p2_charts()
{
    return {p2_chart(0), p2_chart(1), p2_chart(2)};
}

/// X_m / X_i written in the coordinates of chart j (a Laurent monomial).
inline SuperElem p2_affine_ratio(const Chart& j, int m, int i)
{
    std::vector<int> e(2, 0);
    if (m != j.id) e[p2_coordinate_index(j.id, m)] += 1;
    if (i != j.id) e[p2_coordinate_index(j.id, i)] -= 1;
    return SuperElem::monomial(j.table, 1, std::move(e));
}

/// Chart-i coordinates in terms of chart j on P^2 itself (odd images zero).
inline Substitution p2_reduced_pullback(const Chart& i, const Chart& j)
{
    std::vector<SuperElem> even;
    for (std::size_t a = 0; a < 2; ++a) even.push_back(p2_affine_ratio(j, p2_homogeneous_index(i.id, a), i.id));
    return Substitution(i.table, j.table, std::move(even), std::vector<SuperElem>(2, SuperElem::zero(j.table)));
}

/// Fermionic transition matrices M_{i<-i+1} for the three cyclic overlaps, each over the source
/// chart: (t1i, t2i)^T = M (t1j, t2j)^T.
struct MatrixCocycle {
    std::vector<ElemGrid> matrices;
};

struct CocycleCheck {
    bool ok = true;
    std::string message;
};

inline std::string overlap_label(int i, int j)
{
    return "(" + std::to_string(i) + "<-" + std::to_string(j) + ")";
}

/// Entries must be even functions on P^2 over the right chart, and M01 M12 M20 = 1 in chart 0.
inline CocycleCheck check_matrix_cocycle(const MatrixCocycle& mc)
{
    const auto charts = p2_charts();
    if (mc.matrices.size() != 3) return {false, "matrix cocycle needs exactly three matrices"};
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const ElemGrid& m = mc.matrices[static_cast<std::size_t>(i)];
        const std::string where = overlap_label(i, j);
        if (m.rows() != 2 || m.cols() != 2) return {false, where + ": matrix must be 2x2"};
        if (!same_table(m.table(), charts[static_cast<std::size_t>(j)].table)) {
            return {false, where + ": entries must be over the source chart"};
        }
        for (const auto& e : m.cells()) {
            if (!e.is_even() || !(truncate_j(e, 1) == e)) return {false, where + ": entries must be even functions on P^2"};
        }
    }
    std::vector<SuperElem> a;
    std::vector<SuperElem> b;
    try {
        for (const auto& c : mc.matrices[0].cells()) a.push_back(substitute(c, p2_reduced_pullback(charts[1], charts[0])));
        for (const auto& c : mc.matrices[1].cells()) b.push_back(substitute(c, p2_reduced_pullback(charts[2], charts[0])));
    } catch (const error& e) {
        return {false, std::string("cocycle: cannot move matrices to chart 0: ") + e.what()};
    }
    const ElemGrid product = ElemGrid(charts[0].table, 2, 2, std::move(a)) * ElemGrid(charts[0].table, 2, 2, std::move(b)) *
                             mc.matrices[2];
    if (!(product == ElemGrid::identity(charts[0].table, 2))) {
        return {false, "cocycle condition M01*M12*M20 = 1 fails on the triple overlap"};
    }
    return {true, ""};
}

/// Line-bundle identification of det M: on (i<-j), det M = r_ij (X_i/X_j)^k with one k for all
/// overlaps. The constants c_i with r_ij = c_i / c_j (normalized c_1 = 1) say which multiple of the
/// standard generator of O(k) the top odd monomial of chart i represents.
struct DetCocycle {
    int k = 0;
    std::vector<Rational> ratios;
    std::vector<Rational> trivialization;
};

inline DetCocycle det_cocycle(const MatrixCocycle& mc)
{
    if (auto chk = check_matrix_cocycle(mc); !chk.ok) throw domain_error(chk.message);
    const auto charts = p2_charts();
    DetCocycle out;
    std::optional<int> k;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const std::string where = overlap_label(i, j);
        const SuperElem d = det_even(mc.matrices[static_cast<std::size_t>(i)]);
        if (d.size() != 1) throw domain_error(where + ": det M is not a monomial, so not an O(k) cocycle");
        const auto& [key, c] = *d.terms().begin();
        const std::size_t u = p2_coordinate_index(j, i);
        for (std::size_t a = 0; a < key.exps.size(); ++a) {
            if (a != u && key.exps[a] != 0) throw domain_error(where + ": det M does not match any O(k) cocycle");
        }
        const int kij = key.exps[u];
        if (k && *k != kij) throw domain_error(where + ": det M has a different twist than the other overlaps");
        k = kij;
        out.ratios.push_back(c);
    }
    out.k = *k;
    const Rational c1 = 1;
    const Rational c0 = out.ratios[0] * c1;
    const Rational c2 = c1 / out.ratios[1];
    if (out.ratios[2] != c2 / c0) throw domain_error("det cocycle constants are inconsistent");
    out.trivialization = {c0, c1, c2};
    return out;
}

/// The fermionic cocycle of an atlas (odd linear parts of the cyclic maps).
inline MatrixCocycle matrix_cocycle_of(const Atlas& atlas)
{
    MatrixCocycle mc;
    for (const auto& m : atlas.maps) mc.matrices.push_back(odd_matrix(m));
    return mc;
}

/// PiO(-1) + PiO(-2): M = diag(X_j/X_i, (X_j/X_i)^2).
inline MatrixCocycle decomposable_cocycle()
{
    const auto charts = p2_charts();
    MatrixCocycle mc;
    for (int i = 0; i < 3; ++i) {
        const Chart& j = charts[static_cast<std::size_t>((i + 1) % 3)];
        const SuperElem r = p2_affine_ratio(j, j.id, i);
        ElemGrid m(j.table, 2, 2);
        m(0, 0) = r;
        m(1, 1) = r * r;
        mc.matrices.push_back(std::move(m));
    }
    return mc;
}

/// PiOmega^1: the odd coordinates transform like dz, so M is the Jacobian of the reduced map.
inline MatrixCocycle cotangent_cocycle()
{
    const auto charts = p2_charts();
    MatrixCocycle mc;
    for (int i = 0; i < 3; ++i) {
        const Chart& ci = charts[static_cast<std::size_t>(i)];
        const Chart& j = charts[static_cast<std::size_t>((i + 1) % 3)];
        const Substitution red = p2_reduced_pullback(ci, j);
        ElemGrid m(j.table, 2, 2);
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 2; ++b) m(a, b) = deriv_even(red.even_images[a], Var{Parity::even, b});
        }
        mc.matrices.push_back(std::move(m));
    }
    return mc;
}

/// O(-1) + O(-1): both odd coordinates scale by X_j/X_i (twist -2).
inline MatrixCocycle split_minus_one_cocycle()
{
    const auto charts = p2_charts();
    MatrixCocycle mc;
    for (int i = 0; i < 3; ++i) {
        const Chart& j = charts[static_cast<std::size_t>((i + 1) % 3)];
        const SuperElem r = p2_affine_ratio(j, j.id, i);
        ElemGrid m(j.table, 2, 2);
        m(0, 0) = r;
        m(1, 1) = r;
        mc.matrices.push_back(std::move(m));
    }
    return mc;
}

inline MatrixCocycle identity_cocycle()
{
    const auto charts = p2_charts();
    MatrixCocycle mc;
    for (int i = 0; i < 3; ++i) mc.matrices.push_back(ElemGrid::identity(charts[static_cast<std::size_t>((i + 1) % 3)].table, 2));
    return mc;
}

namespace detail {

inline std::vector<SuperElem> odd_images_from(const ElemGrid& m, const Chart& j)
{
    std::vector<SuperElem> out;
    for (std::size_t a = 0; a < 2; ++a) {
        SuperElem img = SuperElem::zero(j.table);
        for (std::size_t b = 0; b < 2; ++b) img += m(a, b) * SuperElem::variable(j.table, Var{Parity::odd, b});
        out.push_back(std::move(img));
    }
    return out;
}

inline Atlas finish_atlas(std::string family, const Rational& lambda, std::vector<TransitionMap> maps)
{
    Atlas atlas;
    atlas.family = std::move(family);
    atlas.lambda = lambda;
    atlas.charts = p2_charts();
    atlas.maps = std::move(maps);
    atlas.validate_structure();
    atlas.trivialization = det_cocycle(matrix_cocycle_of(atlas)).trivialization;
    return atlas;
}

/// M_{2<-0} = (M01 M12)^-1 with both factors moved to chart 0.
inline ElemGrid close_cocycle(const ElemGrid& m01, const ElemGrid& m12)
{
    const auto charts = p2_charts();
    std::vector<SuperElem> a;
    std::vector<SuperElem> b;
    for (const auto& c : m01.cells()) a.push_back(substitute(c, p2_reduced_pullback(charts[1], charts[0])));
    for (const auto& c : m12.cells()) b.push_back(substitute(c, p2_reduced_pullback(charts[2], charts[0])));
    return inverse_even(ElemGrid(charts[0].table, 2, 2, a) * ElemGrid(charts[0].table, 2, 2, b));
}

/// Builds a map from text images (even then odd), with `l` bound to lambda.
inline TransitionMap parse_map(int i, int j, const std::array<std::string, 4>& images, const Rational& lambda)
{
    const Chart ci = p2_chart(i);
    const Chart cj = p2_chart(j);
    const ParamMap params{{"l", lambda}};
    std::vector<SuperElem> out;
    for (const auto& s : images) out.push_back(parse(s, cj.table, params));
    return TransitionMap(ci, cj, std::move(out));
}

inline TransitionMap with_odd_block(const TransitionMap& f, const ElemGrid& m)
{
    std::vector<SuperElem> images(f.images().begin(), f.images().begin() + 2);
    for (auto& e : odd_images_from(m, f.source())) images.push_back(std::move(e));
    return TransitionMap(f.target(), f.source(), std::move(images));
}

// Text of the three cyclic maps. The (2<-0) odd images are the literal ones; the builders replace
// them by the block forced by the cocycle condition.
inline const std::array<std::array<std::string, 4>, 3>& decomposable_text()
{
    static const std::array<std::array<std::string, 4>, 3> text{{
        {"1/z11", "z21/z11 + l*t11*t21/z11^2", "t11/z11", "t21/z11^2"},
        {"z12/z22 + l*t12*t22/z22^2", "1/z22", "t12/z22", "t22/z22^2"},
        {"1/z20", "z10/z20 + l*t10*t20/z20^2", "t10/z10", "t20/z10^2"},
    }};
    return text;
}

inline const std::array<std::array<std::string, 4>, 3>& omega1_text()
{
    static const std::array<std::array<std::string, 4>, 3> text{{
        {"1/z11", "z21/z11 + l*t11*t21/z11^2", "-t11/z11^2", "-z21/z11^2*t11 + t21/z11"},
        {"z12/z22 - l*t12*t22/z22^2", "1/z22", "-z12/z22^2*t22 + t12/z22", "-t22/z22^2"},
        {"1/z20", "z10/z20 - l*t10*t20/z20^2", "-t20/z20^2", "t10/z10 - z10/z20^2*t20"},
    }};
    return text;
}

inline Atlas build_from_text(const std::string& family, const std::array<std::array<std::string, 4>, 3>& text,
                             const Rational& lambda, bool literal)
{
    std::vector<TransitionMap> maps;
    for (int i = 0; i < 3; ++i) maps.push_back(parse_map(i, (i + 1) % 3, text[static_cast<std::size_t>(i)], lambda));
    if (!literal) maps[2] = with_odd_block(maps[2], close_cocycle(odd_matrix(maps[0]), odd_matrix(maps[1])));
    if (literal) {
        // The literal (2<-0) block does not close the cocycle, so no trivialization is derived.
        Atlas atlas;
        atlas.family = family + "-literal";
        atlas.lambda = lambda;
        atlas.charts = p2_charts();
        atlas.maps = std::move(maps);
        atlas.validate_structure();
        return atlas;
    }
    return finish_atlas(family, lambda, std::move(maps));
}

} // namespace detail

/// Even part: reduced P^2 transitions plus, on (i<-j), the term (lambda / c_j) t1j t2j / u^2 on the
/// chart-i coordinate X_l / X_i (l the third index), u = X_i / X_j in chart j. Odd part: M.
/// Rejects M unless it is a cocycle whose determinant is an O(-3) cocycle.
inline Atlas build_generic(const MatrixCocycle& mc, const Rational& lambda, const std::string& family = "generic")
{
    if (auto chk = check_matrix_cocycle(mc); !chk.ok) throw domain_error("generic family rejected: " + chk.message);
    DetCocycle det;
    try {
        det = det_cocycle(mc);
    } catch (const domain_error& e) {
        throw domain_error(std::string("generic family rejected: ") + e.what());
    }
    if (det.k != -3) {
        throw domain_error("generic family rejected: " + overlap_label(0, 1) + ": det M gives O(" + std::to_string(det.k) +
                           "), but Sym^2 F must be O(-3)");
    }
    const auto charts = p2_charts();
    std::vector<TransitionMap> maps;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int l = 3 - i - j;
        const Chart& ci = charts[static_cast<std::size_t>(i)];
        const Chart& cj = charts[static_cast<std::size_t>(j)];
        const Substitution red = p2_reduced_pullback(ci, cj);
        std::vector<SuperElem> images(red.even_images);
        const SuperElem u = p2_affine_ratio(cj, i, j);
        const SuperElem tt = SuperElem::variable(cj.table, Var{Parity::odd, 0}) * SuperElem::variable(cj.table, Var{Parity::odd, 1});
        const Rational scale = lambda / det.trivialization[static_cast<std::size_t>(j)];
        images[p2_coordinate_index(i, l)] += tt * pow(u, -2) * scale;
        for (auto& e : detail::odd_images_from(mc.matrices[static_cast<std::size_t>(i)], cj)) images.push_back(std::move(e));
        maps.emplace_back(ci, cj, std::move(images));
    }
    return detail::finish_atlas(family, lambda, std::move(maps));
}

inline Atlas build_decomposable(const Rational& lambda)
{
    return detail::build_from_text("decomposable", detail::decomposable_text(), lambda, false);
}

inline Atlas build_omega1(const Rational& lambda)
{
    return detail::build_from_text("omega1", detail::omega1_text(), lambda, false);
}

/// The (2<-0) odd block in its literal form, kept for reporting; it does not close the loop.
inline Atlas build_decomposable_literal(const Rational& lambda)
{
    return detail::build_from_text("decomposable", detail::decomposable_text(), lambda, true);
}

inline Atlas build_omega1_literal(const Rational& lambda)
{
    return detail::build_from_text("omega1", detail::omega1_text(), lambda, true);
}

/// Big cell of chart i of the Pi-projective plane: a 1|1 x 3|3 matrix with the identity in even
/// column i and odd column 3+i.
inline SuperMatrix pi_plane_big_cell(int i)
{
    const Chart c = p2_chart(i);
    const TablePtr& t = c.table;
    ElemGrid g(t, 2, 6);
    g(0, static_cast<std::size_t>(i)) = SuperElem::one(t);
    g(1, static_cast<std::size_t>(3 + i)) = SuperElem::one(t);
    for (std::size_t a = 0; a < 2; ++a) {
        const auto m = static_cast<std::size_t>(p2_homogeneous_index(i, a));
        const SuperElem z = SuperElem::variable(t, Var{Parity::even, a});
        const SuperElem th = SuperElem::variable(t, Var{Parity::odd, a});
        g(0, m) = z;
        g(0, 3 + m) = th;
        g(1, m) = -th;
        g(1, 3 + m) = z;
    }
    return SuperMatrix(Grading{1, 1}, Grading{3, 3}, std::move(g));
}

/// (i<-j) read off by reducing chart j's big cell to chart i's pivot columns.
inline TransitionMap pi_plane_transition(int i, int j)
{
    const SuperMatrix r = standard_form(pi_plane_big_cell(j), PivotColumns{{static_cast<std::size_t>(i)}, {static_cast<std::size_t>(3 + i)}});
    std::vector<SuperElem> even;
    std::vector<SuperElem> odd;
    for (std::size_t a = 0; a < 2; ++a) {
        const auto m = static_cast<std::size_t>(p2_homogeneous_index(i, a));
        even.push_back(r(0, m));
        odd.push_back(r(0, 3 + m));
        if (!(r(1, m) == -r(0, 3 + m)) || !(r(1, 3 + m) == r(0, m))) {
            throw domain_error("pi-plane: reduced cell " + overlap_label(i, j) + " is not Pi-symmetric");
        }
    }
    even.insert(even.end(), odd.begin(), odd.end());
    return TransitionMap(p2_chart(i), p2_chart(j), std::move(even));
}

inline Atlas build_pi_plane()
{
    std::vector<TransitionMap> maps;
    for (int i = 0; i < 3; ++i) maps.push_back(pi_plane_transition(i, (i + 1) % 3));
    return detail::finish_atlas("pi-plane", 1, std::move(maps));
}

/// Same charts and identical canonical transition assignments. Metadata is not compared.
inline bool atlas_equal(const Atlas& a, const Atlas& b)
{
    if (a.charts.size() != b.charts.size()) throw dimension_error("atlas_equal: different number of charts");
    for (std::size_t i = 0; i < a.charts.size(); ++i) {
        if (!(a.charts[i] == b.charts[i])) throw dimension_error("atlas_equal: chart " + std::to_string(i) + " differs");
    }
    if (a.maps.size() != b.maps.size()) return false;
    for (std::size_t i = 0; i < a.maps.size(); ++i) {
        if (!(a.maps[i] == b.maps[i])) return false;
    }
    return true;
}

/// New odd coordinates t' = t / mu on every chart. The odd linear parts are unchanged and the
/// lambda terms pick up mu^2.
inline Atlas rescale_odd(const Atlas& atlas, const Rational& mu)
{
    if (mu == 0) throw domain_error("rescale: factor must be nonzero");
    Atlas out = atlas;
    out.lambda = atlas.lambda * mu * mu;
    out.maps.clear();
    for (const auto& f : atlas.maps) {
        const TablePtr& s = f.source().table;
        std::vector<SuperElem> even;
        std::vector<SuperElem> odd;
        for (std::size_t a = 0; a < s->num_even(); ++a) even.push_back(SuperElem::variable(s, Var{Parity::even, a}));
        for (std::size_t a = 0; a < s->num_odd(); ++a) odd.push_back(SuperElem::variable(s, Var{Parity::odd, a}) * mu);
        const Substitution sub(s, s, std::move(even), std::move(odd));
        std::vector<SuperElem> images;
        for (std::size_t a = 0; a < f.images().size(); ++a) {
            SuperElem img = substitute(f.image(a), sub);
            if (a >= f.num_even()) img *= Rational(1 / mu);
            images.push_back(std::move(img));
        }
        out.maps.emplace_back(f.target(), f.source(), std::move(images));
    }
    return out;
}

/// Flips the sign of the J^2 corrections on one cyclic overlap.
inline Atlas corrupt_lambda_sign(const Atlas& atlas, std::size_t overlap)
{
    Atlas out = atlas;
    const TransitionMap& f = atlas.maps.at(overlap);
    std::vector<SuperElem> images = f.images();
    for (std::size_t a = 0; a < f.num_even(); ++a) images[a] -= j_component(images[a], 2) * Rational(2);
    out.maps[overlap] = TransitionMap(f.target(), f.source(), std::move(images));
    out.family = atlas.family + "-corrupted";
    return out;
}

/// Split atlas of P^{2|2} with fermionic sheaf O(-1)+O(-1); its Berezinian is not constant.
inline Atlas build_split_minus_one()
{
    const MatrixCocycle mc = split_minus_one_cocycle();
    const auto charts = p2_charts();
    std::vector<TransitionMap> maps;
    for (int i = 0; i < 3; ++i) {
        const Chart& cj = charts[static_cast<std::size_t>((i + 1) % 3)];
        std::vector<SuperElem> images = p2_reduced_pullback(charts[static_cast<std::size_t>(i)], cj).even_images;
        for (auto& e : detail::odd_images_from(mc.matrices[static_cast<std::size_t>(i)], cj)) images.push_back(std::move(e));
        maps.emplace_back(charts[static_cast<std::size_t>(i)], cj, std::move(images));
    }
    Atlas atlas;
    atlas.family = "split-O(-1)+O(-1)";
    atlas.charts = charts;
    atlas.maps = std::move(maps);
    atlas.validate_structure();
    return atlas;
}

/// Ranks of Sym^k T restricted to P^2: Sym^k T + Sym^(k-1) T (x) F* + Sym^(k-2) T (x) Sym^2 F*, with
/// T of rank 2|0 and F* of rank 0|2. Sym^j of a rank-2 even bundle has rank j+1, F* (x) anything
/// flips parity, and Sym^2 F* is the even line bundle (rank 1|0).
struct SuperRank {
    long even = 0;
    long odd = 0;
    friend bool operator==(const SuperRank&, const SuperRank&) = default;
};

inline SuperRank sym_restricted_rank(long k)
{
    if (k < 1) throw domain_error("sym_restricted_rank: k must be at least 1");
    auto sym_even = [](long j) { return j < 0 ? 0L : j + 1; };
    SuperRank r;
    r.even += sym_even(k);
    r.odd += sym_even(k - 1) * 2;
    r.even += sym_even(k - 2);
    return r;
}

} // namespace supergeo
