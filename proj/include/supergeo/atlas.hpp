#pragma once

// Charts, transition maps and the checks that make a set of gluing data a supermanifold.
//
// A TransitionMap (i <- j) assigns to every coordinate of chart i an element over the variables of
// chart j. Substituting those images into an expression over chart i re-expresses it over chart j.
// Composition therefore reads right to left: compose(f: i<-j, g: j<-k) is i<-k.

#include <cstddef>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "superalg.hpp"
#include "supermat.hpp"

namespace supergeo {

struct Chart {
    int id = 0;
    TablePtr table;

    friend bool operator==(const Chart& a, const Chart& b) { return a.id == b.id && same_table(a.table, b.table); }
};

class TransitionMap {
public:
    /// `images` lists, in the target table's order (even first), one element over the source table.
    TransitionMap(Chart target, Chart source, std::vector<SuperElem> images)
        : target_(std::move(target)), source_(std::move(source)), images_(std::move(images))
    {
        const VarTable& t = *target_.table;
        if (images_.size() != t.num_even() + t.num_odd()) {
            throw dimension_error("transition map: one image per target coordinate is required");
        }
        for (std::size_t a = 0; a < images_.size(); ++a) {
            const SuperElem& img = images_[a];
            const std::string& name = a < t.num_even() ? t.even_names()[a] : t.odd_names()[a - t.num_even()];
            if (!same_table(img.table(), source_.table)) {
                throw table_mismatch("transition map: image of '" + name + "' is not over the source chart");
            }
            if (a < t.num_even()) {
                if (!img.is_even()) throw parity_error("transition map: image of even '" + name + "' is not even");
                if (body(img).size() != 1) {
                    throw domain_error("transition map: image of '" + name + "' has no unit body");
                }
            } else if (!img.is_odd()) {
                throw parity_error("transition map: image of odd '" + name + "' is not odd");
            }
        }
    }

    static TransitionMap identity(const Chart& c)
    {
        std::vector<SuperElem> images;
        for (std::size_t i = 0; i < c.table->num_even(); ++i) images.push_back(SuperElem::variable(c.table, Var{Parity::even, i}));
        for (std::size_t i = 0; i < c.table->num_odd(); ++i) images.push_back(SuperElem::variable(c.table, Var{Parity::odd, i}));
        return TransitionMap(c, c, std::move(images));
    }

    const Chart& target() const noexcept { return target_; }
    const Chart& source() const noexcept { return source_; }
    const std::vector<SuperElem>& images() const noexcept { return images_; }
    std::size_t num_even() const noexcept { return target_.table->num_even(); }
    std::size_t num_odd() const noexcept { return target_.table->num_odd(); }

    const SuperElem& image(std::size_t index) const { return images_.at(index); }
    const SuperElem& image(std::string_view name) const
    {
        const Var v = target_.table->at(name);
        return images_.at(v.parity == Parity::even ? v.index : num_even() + v.index);
    }

    /// Name of target coordinate `index` (even coordinates first).
    const std::string& coordinate_name(std::size_t index) const
    {
        return index < num_even() ? target_.table->even_names().at(index)
                                  : target_.table->odd_names().at(index - num_even());
    }

    /// Re-expresses elements over the target chart in source coordinates.
    Substitution pullback() const { return Substitution::from_images(target_.table, source_.table, images_); }

    friend bool operator==(const TransitionMap& a, const TransitionMap& b)
    {
        return a.target_ == b.target_ && a.source_ == b.source_ && a.images_ == b.images_;
    }

private:
    Chart target_;
    Chart source_;
    std::vector<SuperElem> images_;
};

/// f: i<-j after g: j<-k, giving i<-k.
inline TransitionMap compose(const TransitionMap& f, const TransitionMap& g)
{
    if (!(f.source() == g.target())) throw domain_error("compose: chart chain does not match");
    const Substitution sub = g.pullback();
    std::vector<SuperElem> images;
    images.reserve(f.images().size());
    try {
        for (const auto& img : f.images()) images.push_back(substitute(img, sub));
    } catch (const not_a_unit& e) {
        throw domain_error(std::string("compose: leaves the overlap: ") + e.what());
    }
    return TransitionMap(f.target(), g.source(), std::move(images));
}

namespace detail {

inline Rational rational_pow(const Rational& base, long e)
{
    Rational r = 1;
    Rational b = e < 0 ? Rational(1 / base) : base;
    unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
    while (n != 0) {
        if (n & 1u) r *= b;
        n >>= 1;
        if (n != 0) b *= b;
    }
    return r;
}

/// Inverse of a square rational matrix by Gauss-Jordan; nullopt if singular.
inline std::optional<std::vector<std::vector<Rational>>> rational_inverse(std::vector<std::vector<Rational>> m)
{
    const std::size_t n = m.size();
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        const Rational p = m[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            const Rational factor = m[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= factor * m[col][j];
                inv[r][j] -= factor * inv[col][j];
            }
        }
    }
    return inv;
}

inline bool is_identity(const TransitionMap& m)
{
    return m.source() == m.target() && m == TransitionMap::identity(m.target());
}

} // namespace detail

/// Exact two-sided inverse of a map whose even bodies are Laurent monomials.
///
/// The linear part L (inverse body map, inverse odd matrix) is inverted directly. P = f o L^-1 is
/// then the identity plus terms of higher J-degree, and u = P^-1 is found by the fixed-point update
/// u <- u - (P o u - id), which stabilises after at most (odd count) rounds since J is nilpotent.
inline TransitionMap invert_map(const TransitionMap& f)
{
    const std::size_t n = f.num_even();
    const std::size_t q = f.num_odd();
    const TablePtr& src = f.source().table;
    const TablePtr& tgt = f.target().table;
    if (src->num_even() != n || src->num_odd() != q) throw dimension_error("invert_map: charts have different dimensions");

    std::vector<std::vector<Rational>> exps(n, std::vector<Rational>(n));
    std::vector<Rational> coeffs(n);
    for (std::size_t a = 0; a < n; ++a) {
        const SuperElem b = body(f.image(a));
        const auto& [key, c] = *b.terms().begin();
        coeffs[a] = c;
        for (std::size_t k = 0; k < n; ++k) exps[a][k] = key.exps[k];
    }
    const auto exps_inv = detail::rational_inverse(exps);
    if (!exps_inv) throw domain_error("invert_map: body exponent matrix is singular");

    // z_b = prod_a (w_a / c_a)^F[b][a]
    std::vector<SuperElem> images;
    for (std::size_t b = 0; b < n; ++b) {
        std::vector<int> e(n);
        Rational k = 1;
        for (std::size_t a = 0; a < n; ++a) {
            const Rational& x = (*exps_inv)[b][a];
            if (x.get_den() != 1) throw domain_error("invert_map: body map is not invertible over Laurent monomials");
            const long xi = x.get_num().get_si();
            e[a] = static_cast<int>(xi);
            k *= detail::rational_pow(coeffs[a], -xi);
        }
        images.push_back(SuperElem::monomial(tgt, k, std::move(e)));
    }

    std::vector<SuperElem> odd_zero(q, SuperElem::zero(tgt));
    const Substitution body_inverse(src, tgt, images, odd_zero);

    ElemGrid m(src, q, q);
    for (std::size_t a = 0; a < q; ++a) {
        for (std::size_t b = 0; b < q; ++b) {
            m(a, b) = body(deriv_odd_left(f.image(n + a), Var{Parity::odd, b}));
        }
    }
    ElemGrid m_inv(src, q, q);
    try {
        m_inv = inverse_even(m);
    } catch (const not_a_unit&) {
        throw domain_error("invert_map: odd linear part is not invertible");
    }
    for (std::size_t b = 0; b < q; ++b) {
        SuperElem img = SuperElem::zero(tgt);
        for (std::size_t a = 0; a < q; ++a) {
            img += substitute(m_inv(b, a), body_inverse) * SuperElem::variable(tgt, Var{Parity::odd, a});
        }
        images.push_back(std::move(img));
    }
    const TransitionMap linear_inverse(f.source(), f.target(), std::move(images));

    const TransitionMap p = compose(f, linear_inverse);
    const TransitionMap id = TransitionMap::identity(f.target());
    TransitionMap u = id;
    for (std::size_t round = 0; round <= q + 1; ++round) {
        const TransitionMap pu = compose(p, u);
        if (pu == id) break;
        std::vector<SuperElem> next;
        for (std::size_t a = 0; a < n + q; ++a) next.push_back(u.image(a) - (pu.image(a) - id.image(a)));
        u = TransitionMap(f.target(), f.target(), std::move(next));
    }
    TransitionMap result = compose(linear_inverse, u);
    if (!detail::is_identity(compose(f, result)) || !detail::is_identity(compose(result, f))) {
        throw domain_error("invert_map: correction did not converge to a two-sided inverse");
    }
    return result;
}

/// [[dz'/dz, dz'/dtheta], [dtheta'/dz, dtheta'/dtheta]] with left odd derivatives, entries over the
/// source chart. Rows follow target coordinates, columns source variables, even before odd.
inline SuperMatrix jacobian(const TransitionMap& f)
{
    const VarTable& s = *f.source().table;
    const std::size_t rows = f.images().size();
    const std::size_t cols = s.num_even() + s.num_odd();
    ElemGrid g(f.source().table, rows, cols);
    for (std::size_t a = 0; a < rows; ++a) {
        for (std::size_t b = 0; b < cols; ++b) {
            const Var v = b < s.num_even() ? Var{Parity::even, b} : Var{Parity::odd, b - s.num_even()};
            g(a, b) = deriv(f.image(a), v);
        }
    }
    return SuperMatrix(Grading{f.num_even(), f.num_odd()}, Grading{s.num_even(), s.num_odd()}, std::move(g));
}

/// Right-derivative Jacobian: the B block changes sign. This is the form that composes by plain
/// matrix product, J(f o g) = (J(f) o g) * J(g). Its Berezinian equals that of jacobian().
inline SuperMatrix jacobian_right(const TransitionMap& f)
{
    SuperMatrix j = jacobian(f);
    ElemGrid g = j.grid();
    for (std::size_t a = 0; a < j.row_grading().even; ++a) {
        for (std::size_t b = j.col_grading().even; b < j.col_grading().total(); ++b) g(a, b) = -g(a, b);
    }
    return SuperMatrix(j.row_grading(), j.col_grading(), std::move(g));
}

/// Vector field sum_b coeffs[b] * d/d(var b) over one chart, even variables first.
struct Derivation {
    TablePtr table;
    std::vector<SuperElem> coeffs;

    static Derivation zero(const TablePtr& t)
    {
        return Derivation{t, std::vector<SuperElem>(t->num_even() + t->num_odd(), SuperElem::zero(t))};
    }

    static Derivation basis(const TablePtr& t, std::size_t index, const SuperElem& coeff)
    {
        Derivation d = zero(t);
        d.coeffs.at(index) = coeff;
        return d;
    }

    bool is_zero() const
    {
        for (const auto& c : coeffs) {
            if (!c.is_zero()) return false;
        }
        return true;
    }

    SuperElem apply(const SuperElem& a) const
    {
        SuperElem r = SuperElem::zero(table);
        for (std::size_t b = 0; b < coeffs.size(); ++b) {
            if (coeffs[b].is_zero()) continue;
            const Var v = b < table->num_even() ? Var{Parity::even, b} : Var{Parity::odd, b - table->num_even()};
            r += coeffs[b] * deriv(a, v);
        }
        return r;
    }

    friend Derivation operator+(Derivation a, const Derivation& b)
    {
        if (!same_table(a.table, b.table)) throw table_mismatch("derivation sum: different charts");
        for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += b.coeffs[i];
        return a;
    }

    friend bool operator==(const Derivation& a, const Derivation& b)
    {
        return same_table(a.table, b.table) && a.coeffs == b.coeffs;
    }
};

/// Re-expresses a field given over f's source chart in target coordinates: the Jacobian mod J acts
/// on the coefficient vector and the result is pulled back through invert_map(f).
inline Derivation pushforward_vector_field(const Derivation& v, const TransitionMap& f)
{
    if (!same_table(v.table, f.source().table)) throw table_mismatch("pushforward: field is not over the source chart");
    const SuperMatrix jac = truncate_j(jacobian(f), 1);
    const TransitionMap back = invert_map(f);
    const Substitution sub = back.pullback();
    Derivation r = Derivation::zero(f.target().table);
    for (std::size_t a = 0; a < f.images().size(); ++a) {
        SuperElem c = SuperElem::zero(f.source().table);
        for (std::size_t b = 0; b < v.coeffs.size(); ++b) {
            if (!v.coeffs[b].is_zero()) c += v.coeffs[b] * jac(a, b);
        }
        r.coeffs[a] = substitute(c, sub);
    }
    return r;
}

/// Charts plus the cyclic transition maps (0<-1), (1<-2), ..., (N-1<-0).
///
/// `trivialization` holds constants c_i identifying the top odd monomial of chart i with c_i times
/// the standard local generator of the corresponding line bundle (empty when not applicable).
struct Atlas {
    std::string family;
    Rational lambda = 0;
    std::vector<Chart> charts;
    std::vector<TransitionMap> maps;
    std::vector<Rational> trivialization;

    std::size_t size() const noexcept { return charts.size(); }
    const Chart& chart(int id) const { return charts.at(static_cast<std::size_t>(id)); }

    /// The stored cyclic map (i <- i+1 mod N).
    const TransitionMap& cyclic(std::size_t i) const { return maps.at(i); }

    /// Any (i <- j): stored, identity, or inverted on demand.
    TransitionMap transition(int i, int j) const
    {
        if (i == j) return TransitionMap::identity(chart(i));
        for (const auto& m : maps) {
            if (m.target().id == i && m.source().id == j) return m;
        }
        for (const auto& m : maps) {
            if (m.target().id == j && m.source().id == i) return invert_map(m);
        }
        throw domain_error("atlas: no transition between charts " + std::to_string(i) + " and " + std::to_string(j));
    }

    void validate_structure() const
    {
        if (charts.empty()) throw domain_error("atlas: no charts");
        if (maps.size() != charts.size()) throw domain_error("atlas: one cyclic map per chart is required");
        for (std::size_t i = 0; i < charts.size(); ++i) {
            if (charts[i].id != static_cast<int>(i)) throw domain_error("atlas: chart ids must be 0..N-1 in order");
            const int next = static_cast<int>((i + 1) % charts.size());
            if (maps[i].target().id != static_cast<int>(i) || maps[i].source().id != next) {
                throw domain_error("atlas: map " + std::to_string(i) + " must be (" + std::to_string(i) + "<-" +
                                   std::to_string(next) + ")");
            }
            if (!(maps[i].target() == charts[i]) || !(maps[i].source() == charts[static_cast<std::size_t>(next)])) {
                throw domain_error("atlas: map charts do not match the chart list");
            }
        }
    }
};

struct Residual {
    std::string coordinate;
    SuperElem value;
};

struct LoopReport {
    bool defined = true;
    bool closed = false;
    std::string error;
    std::vector<Residual> residuals;

    std::vector<std::string> failing() const
    {
        std::vector<std::string> names;
        for (const auto& r : residuals) {
            if (!r.value.is_zero()) names.push_back(r.coordinate);
        }
        return names;
    }
};

/// Composes the cyclic maps around the loop and compares with the identity on chart 0.
inline LoopReport check_cocycle_loop(const Atlas& atlas)
{
    LoopReport report;
    try {
        atlas.validate_structure();
        TransitionMap loop = atlas.cyclic(0);
        for (std::size_t i = 1; i < atlas.size(); ++i) loop = compose(loop, atlas.cyclic(i));
        const TransitionMap id = TransitionMap::identity(atlas.chart(0));
        report.closed = true;
        for (std::size_t a = 0; a < loop.images().size(); ++a) {
            SuperElem r = loop.image(a) - id.image(a);
            if (!r.is_zero()) report.closed = false;
            report.residuals.push_back(Residual{loop.coordinate_name(a), std::move(r)});
        }
    } catch (const error& e) {
        report.defined = false;
        report.closed = false;
        report.error = e.what();
    }
    return report;
}

struct BerEntry {
    int target = 0;
    int source = 0;
    SuperElem value;
    bool constant = false;
};

struct CalabiYauReport {
    bool calabi_yau = false;
    std::vector<BerEntry> entries;
};

/// Berezinian of every stored map's Jacobian, computed concurrently and merged in overlap order.
/// The atlas is flagged when every value is a nonzero constant.
inline CalabiYauReport is_calabi_yau(const Atlas& atlas)
{
    atlas.validate_structure();
    std::vector<std::future<SuperElem>> jobs;
    for (const auto& m : atlas.maps) {
        jobs.push_back(std::async(std::launch::async, [&m] { return berezinian(jacobian(m)); }));
    }
    CalabiYauReport report;
    report.calabi_yau = true;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        SuperElem value = jobs[i].get();
        const bool constant = value.is_constant() && !value.is_zero();
        report.calabi_yau = report.calabi_yau && constant;
        report.entries.push_back(BerEntry{atlas.maps[i].target().id, atlas.maps[i].source().id, std::move(value), constant});
    }
    return report;
}

/// Odd linear part of a map: M[a][b] = body of d(theta'_a)/d(theta_b), over the source chart.
inline ElemGrid odd_matrix(const TransitionMap& f)
{
    const std::size_t q = f.num_odd();
    ElemGrid m(f.source().table, q, q);
    for (std::size_t a = 0; a < q; ++a) {
        for (std::size_t b = 0; b < q; ++b) m(a, b) = body(deriv_odd_left(f.image(f.num_even() + a), Var{Parity::odd, b}));
    }
    return m;
}

/// Even part of the atlas obstruction on (i <- j): the field sum_a (J^2 part of the image of z_a) d/dz_a.
/// Its coefficients live over chart j while the directions are chart-i coordinates.
struct OverlapField {
    int target = 0;
    int source = 0;
    std::vector<SuperElem> coeffs;
};

inline OverlapField overlap_field(const TransitionMap& f)
{
    OverlapField w{f.target().id, f.source().id, {}};
    for (std::size_t a = 0; a < f.num_even(); ++a) w.coeffs.push_back(j_component(f.image(a), 2));
    return w;
}

/// Moves an overlap field onto one chart: coefficients are pulled back to the direction chart, then
/// the field is pushed forward into `onto`.
inline Derivation overlap_field_on(const Atlas& atlas, const OverlapField& w, int onto)
{
    const TransitionMap coeff_map = atlas.transition(w.source, w.target);
    const Substitution sub = coeff_map.pullback();
    const TablePtr& table = atlas.chart(w.target).table;
    Derivation d = Derivation::zero(table);
    for (std::size_t a = 0; a < w.coeffs.size(); ++a) d.coeffs[a] = substitute(w.coeffs[a], sub);
    if (w.target == onto) return d;
    return pushforward_vector_field(d, atlas.transition(onto, w.target));
}

struct OmegaSumReport {
    std::vector<Derivation> terms;
    Derivation sum;
    bool zero = false;
};

/// Pushes every cyclic overlap field into chart `onto` and adds them; a cocycle sums to zero.
inline OmegaSumReport omega_cocycle_sum(const Atlas& atlas, int onto = 0)
{
    atlas.validate_structure();
    OmegaSumReport r{{}, Derivation::zero(atlas.chart(onto).table), false};
    for (const auto& m : atlas.maps) {
        r.terms.push_back(overlap_field_on(atlas, overlap_field(m), onto));
        r.sum = r.sum + r.terms.back();
    }
    r.zero = r.sum.is_zero();
    return r;
}

} // namespace supergeo
