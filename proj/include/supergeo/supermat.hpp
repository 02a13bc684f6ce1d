#pragma once

// Block-graded matrices over SuperElems.
//
// A SuperMatrix with row grading p|q and column grading r|s is stored as one dense
// (p+q) x (r+s) grid; the blocks are
//
//     [ A  B ]    A: p x r even,  B: p x s odd
//     [ C  D ]    C: q x r odd,   D: q x s even
//
// Products keep the order of the factors, so odd entries pick up their Koszul signs from the
// underlying SuperElem multiplication.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "superalg.hpp"
#include "text.hpp"

namespace supergeo {

/// Dense row-major grid of SuperElems over one table, with no grading attached.
class ElemGrid {
public:
    ElemGrid(TablePtr table, std::size_t rows, std::size_t cols)
        : table_(std::move(table)), rows_(rows), cols_(cols), cells_(rows * cols, SuperElem::zero(table_))
    {
    }

    ElemGrid(TablePtr table, std::size_t rows, std::size_t cols, std::vector<SuperElem> cells)
        : table_(std::move(table)), rows_(rows), cols_(cols), cells_(std::move(cells))
    {
        if (cells_.size() != rows * cols) throw dimension_error("grid: cell count does not match shape");
        for (const auto& c : cells_) {
            if (!same_table(c.table(), table_)) throw table_mismatch("grid: entry over a different table");
        }
    }

    static ElemGrid identity(const TablePtr& table, std::size_t n)
    {
        ElemGrid g(table, n, n);
        for (std::size_t i = 0; i < n; ++i) g(i, i) = SuperElem::one(table);
        return g;
    }

    const TablePtr& table() const noexcept { return table_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const std::vector<SuperElem>& cells() const noexcept { return cells_; }

    SuperElem& operator()(std::size_t i, std::size_t j) { return cells_.at(i * cols_ + j); }
    const SuperElem& operator()(std::size_t i, std::size_t j) const { return cells_.at(i * cols_ + j); }

    bool all_even() const
    {
        for (const auto& c : cells_) {
            if (!c.is_even()) return false;
        }
        return true;
    }

    friend ElemGrid operator*(const ElemGrid& x, const ElemGrid& y)
    {
        if (x.cols_ != y.rows_) throw dimension_error("grid product: inner dimensions differ");
        if (!same_table(x.table_, y.table_)) throw table_mismatch("grid product: different tables");
        ElemGrid r(x.table_, x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i) {
            for (std::size_t k = 0; k < x.cols_; ++k) {
                const SuperElem& a = x(i, k);
                if (a.is_zero()) continue;
                for (std::size_t j = 0; j < y.cols_; ++j) {
                    if (!y(k, j).is_zero()) r(i, j) += a * y(k, j);
                }
            }
        }
        return r;
    }

    friend ElemGrid operator+(ElemGrid x, const ElemGrid& y)
    {
        x.check_shape(y);
        for (std::size_t i = 0; i < x.cells_.size(); ++i) x.cells_[i] += y.cells_[i];
        return x;
    }

    friend ElemGrid operator-(ElemGrid x, const ElemGrid& y)
    {
        x.check_shape(y);
        for (std::size_t i = 0; i < x.cells_.size(); ++i) x.cells_[i] -= y.cells_[i];
        return x;
    }

    friend ElemGrid operator-(ElemGrid x)
    {
        for (auto& c : x.cells_) c = -c;
        return x;
    }

    friend bool operator==(const ElemGrid& x, const ElemGrid& y)
    {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.cells_ == y.cells_;
    }

private:
    void check_shape(const ElemGrid& y) const
    {
        if (rows_ != y.rows_ || cols_ != y.cols_) throw dimension_error("grid sum: shapes differ");
    }

    TablePtr table_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<SuperElem> cells_;
};

namespace detail {

inline ElemGrid minor_grid(const ElemGrid& g, std::size_t skip_row, std::size_t skip_col)
{
    ElemGrid m(g.table(), g.rows() - 1, g.cols() - 1);
    for (std::size_t i = 0, mi = 0; i < g.rows(); ++i) {
        if (i == skip_row) continue;
        for (std::size_t j = 0, mj = 0; j < g.cols(); ++j) {
            if (j == skip_col) continue;
            m(mi, mj++) = g(i, j);
        }
        ++mi;
    }
    return m;
}

inline SuperElem laplace(const ElemGrid& g)
{
    const std::size_t n = g.rows();
    if (n == 0) return SuperElem::one(g.table());
    if (n == 1) return g(0, 0);
    if (n == 2) return g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    SuperElem r = SuperElem::zero(g.table());
    for (std::size_t j = 0; j < n; ++j) {
        if (g(0, j).is_zero()) continue;
        SuperElem t = g(0, j) * laplace(minor_grid(g, 0, j));
        if (j % 2 == 0) {
            r += t;
        } else {
            r -= t;
        }
    }
    return r;
}

} // namespace detail

/// Determinant of a square grid of even (hence mutually commuting) entries, by Laplace expansion.
inline SuperElem det_even(const ElemGrid& g)
{
    if (g.rows() != g.cols()) throw dimension_error("det_even: grid is not square");
    if (!g.all_even()) throw parity_error("det_even: grid has an entry that is not even");
    return detail::laplace(g);
}

/// Inverse of a square even grid via adjugate / determinant.
inline ElemGrid inverse_even(const ElemGrid& g)
{
    const SuperElem det = det_even(g);
    SuperElem det_inv = SuperElem::zero(g.table());
    try {
        det_inv = invert_unit(det);
    } catch (const not_a_unit& e) {
        throw not_a_unit(std::string("even block is not invertible: ") + e.what());
    }
    const std::size_t n = g.rows();
    ElemGrid r(g.table(), n, n);
    if (n == 0) return r;
    if (n == 1) {
        r(0, 0) = det_inv;
        return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            SuperElem cof = detail::laplace(detail::minor_grid(g, j, i));
            if ((i + j) % 2 == 1) cof = -cof;
            r(i, j) = cof * det_inv;
        }
    }
    return r;
}

/// Even|odd split of a row or column index set.
struct Grading {
    std::size_t even = 0;
    std::size_t odd = 0;

    std::size_t total() const noexcept { return even + odd; }
    Parity parity(std::size_t index) const noexcept { return index < even ? Parity::even : Parity::odd; }
    friend bool operator==(const Grading&, const Grading&) = default;
};

enum class Block { A, B, C, D };

class SuperMatrix {
public:
    SuperMatrix(Grading rows, Grading cols, ElemGrid grid) : rows_(rows), cols_(cols), grid_(std::move(grid))
    {
        if (grid_.rows() != rows_.total() || grid_.cols() != cols_.total()) {
            throw dimension_error("SuperMatrix: grid shape does not match the gradings");
        }
        for (std::size_t i = 0; i < grid_.rows(); ++i) {
            for (std::size_t j = 0; j < grid_.cols(); ++j) {
                const Parity want = rows_.parity(i) + cols_.parity(j);
                const SuperElem& e = grid_(i, j);
                if (want == Parity::even ? !e.is_even() : !e.is_odd()) {
                    throw parity_error("SuperMatrix: entry (" + std::to_string(i) + "," + std::to_string(j) +
                                       ") has the wrong parity for its block");
                }
            }
        }
    }

    static SuperMatrix identity(const TablePtr& table, Grading g)
    {
        return SuperMatrix(g, g, ElemGrid::identity(table, g.total()));
    }

    /// Builds from the four blocks; empty blocks may be passed with matching zero extents.
    static SuperMatrix from_blocks(const ElemGrid& a, const ElemGrid& b, const ElemGrid& c, const ElemGrid& d)
    {
        const Grading rows{a.rows(), d.rows()};
        const Grading cols{a.cols(), d.cols()};
        if (b.rows() != a.rows() || b.cols() != d.cols() || c.rows() != d.rows() || c.cols() != a.cols()) {
            throw dimension_error("SuperMatrix::from_blocks: block shapes are inconsistent");
        }
        ElemGrid g(a.table(), rows.total(), cols.total());
        auto place = [&g](const ElemGrid& blk, std::size_t r0, std::size_t c0) {
            for (std::size_t i = 0; i < blk.rows(); ++i) {
                for (std::size_t j = 0; j < blk.cols(); ++j) g(r0 + i, c0 + j) = blk(i, j);
            }
        };
        place(a, 0, 0);
        place(b, 0, cols.even);
        place(c, rows.even, 0);
        place(d, rows.even, cols.even);
        return SuperMatrix(rows, cols, std::move(g));
    }

    const Grading& row_grading() const noexcept { return rows_; }
    const Grading& col_grading() const noexcept { return cols_; }
    const ElemGrid& grid() const noexcept { return grid_; }
    const TablePtr& table() const noexcept { return grid_.table(); }
    const SuperElem& operator()(std::size_t i, std::size_t j) const { return grid_(i, j); }

    ElemGrid block(Block which) const
    {
        const bool lower = which == Block::C || which == Block::D;
        const bool right = which == Block::B || which == Block::D;
        const std::size_t r0 = lower ? rows_.even : 0;
        const std::size_t c0 = right ? cols_.even : 0;
        const std::size_t nr = lower ? rows_.odd : rows_.even;
        const std::size_t nc = right ? cols_.odd : cols_.even;
        ElemGrid g(table(), nr, nc);
        for (std::size_t i = 0; i < nr; ++i) {
            for (std::size_t j = 0; j < nc; ++j) g(i, j) = grid_(r0 + i, c0 + j);
        }
        return g;
    }

    friend bool operator==(const SuperMatrix& x, const SuperMatrix& y)
    {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.grid_ == y.grid_;
    }

private:
    Grading rows_;
    Grading cols_;
    ElemGrid grid_;
};

inline SuperMatrix matmul(const SuperMatrix& x, const SuperMatrix& y)
{
    if (!(x.col_grading() == y.row_grading())) throw dimension_error("matmul: inner gradings differ");
    return SuperMatrix(x.row_grading(), y.col_grading(), x.grid() * y.grid());
}

/// Two-sided inverse from the block factorization with both Schur complements:
///   X^-1 = [ S_A^-1              -A^-1 B S_D^-1 ]
///          [ -D^-1 C S_A^-1       S_D^-1        ]
/// with S_A = A - B D^-1 C and S_D = D - C A^-1 B. Needs A and D invertible.
inline SuperMatrix inverse(const SuperMatrix& x)
{
    if (!(x.row_grading() == x.col_grading())) throw dimension_error("inverse: matrix grading is not square");
    const ElemGrid a = x.block(Block::A);
    const ElemGrid b = x.block(Block::B);
    const ElemGrid c = x.block(Block::C);
    const ElemGrid d = x.block(Block::D);
    const ElemGrid a_inv = inverse_even(a);
    const ElemGrid d_inv = inverse_even(d);
    const ElemGrid sa_inv = inverse_even(a - b * d_inv * c);
    const ElemGrid sd_inv = inverse_even(d - c * a_inv * b);
    return SuperMatrix::from_blocks(sa_inv, -(a_inv * b * sd_inv), -(d_inv * c * sa_inv), sd_inv);
}

/// Ber(X) = det(A - B D^-1 C) / det(D).
inline SuperElem berezinian(const SuperMatrix& x)
{
    if (!(x.row_grading() == x.col_grading())) throw dimension_error("berezinian: matrix grading is not square");
    const ElemGrid a = x.block(Block::A);
    const ElemGrid b = x.block(Block::B);
    const ElemGrid c = x.block(Block::C);
    const ElemGrid d = x.block(Block::D);
    const SuperElem det_d = det_even(d);
    SuperElem det_d_inv = SuperElem::zero(x.table());
    try {
        det_d_inv = invert_unit(det_d);
    } catch (const not_a_unit& e) {
        throw not_a_unit(std::string("berezinian: odd-odd block is not invertible: ") + e.what());
    }
    const ElemGrid schur = a - b * inverse_even(d) * c;
    return det_even(schur) * det_d_inv;
}

/// The other factorization, det(A) / det(D - C A^-1 B); must agree with berezinian().
inline SuperElem berezinian_via_a(const SuperMatrix& x)
{
    if (!(x.row_grading() == x.col_grading())) throw dimension_error("berezinian: matrix grading is not square");
    const ElemGrid a = x.block(Block::A);
    const ElemGrid b = x.block(Block::B);
    const ElemGrid c = x.block(Block::C);
    const ElemGrid d = x.block(Block::D);
    const ElemGrid schur = d - c * inverse_even(a) * b;
    return det_even(a) * invert_unit(det_even(schur));
}

/// Column selection for standard_form: `even_columns` pivot onto the even rows, `odd_columns`
/// onto the odd rows, in order.
struct PivotColumns {
    std::vector<std::size_t> even_columns;
    std::vector<std::size_t> odd_columns;
};

inline SuperMatrix select_columns(const SuperMatrix& z, const PivotColumns& pivots)
{
    const std::size_t ncols = pivots.even_columns.size() + pivots.odd_columns.size();
    ElemGrid g(z.table(), z.row_grading().total(), ncols);
    std::size_t out = 0;
    auto copy = [&](std::size_t col, Parity want) {
        if (col >= z.col_grading().total()) throw dimension_error("standard_form: pivot column out of range");
        if (z.col_grading().parity(col) != want) throw parity_error("standard_form: pivot column has the wrong parity");
        for (std::size_t i = 0; i < g.rows(); ++i) g(i, out) = z(i, col);
        ++out;
    };
    for (auto col : pivots.even_columns) copy(col, Parity::even);
    for (auto col : pivots.odd_columns) copy(col, Parity::odd);
    return SuperMatrix(z.row_grading(), Grading{pivots.even_columns.size(), pivots.odd_columns.size()}, std::move(g));
}

/// Left-multiplies a big cell by the inverse of its selected minor, so that the selected columns
/// become the graded identity.
inline SuperMatrix standard_form(const SuperMatrix& z, const PivotColumns& pivots)
{
    if (pivots.even_columns.size() != z.row_grading().even || pivots.odd_columns.size() != z.row_grading().odd) {
        throw dimension_error("standard_form: pivot count must match the row grading");
    }
    const SuperMatrix minor = select_columns(z, pivots);
    SuperMatrix minor_inv = SuperMatrix::identity(z.table(), z.row_grading());
    try {
        minor_inv = inverse(minor);
    } catch (const not_a_unit& e) {
        throw domain_error(std::string("standard_form: selected minor is not invertible: ") + e.what());
    }
    return matmul(minor_inv, z);
}

/// Applies a substitution to every entry.
inline SuperMatrix substitute(const SuperMatrix& x, const Substitution& sub)
{
    std::vector<SuperElem> cells;
    cells.reserve(x.grid().cells().size());
    for (const auto& c : x.grid().cells()) cells.push_back(substitute(c, sub));
    return SuperMatrix(x.row_grading(), x.col_grading(),
                       ElemGrid(sub.target, x.grid().rows(), x.grid().cols(), std::move(cells)));
}

inline SuperMatrix truncate_j(const SuperMatrix& x, int k)
{
    std::vector<SuperElem> cells;
    for (const auto& c : x.grid().cells()) cells.push_back(truncate_j(c, k));
    return SuperMatrix(x.row_grading(), x.col_grading(),
                       ElemGrid(x.table(), x.grid().rows(), x.grid().cols(), std::move(cells)));
}

/// Row-major text: one row per line, entries separated by " | ".
inline std::string format(const SuperMatrix& x)
{
    std::string out;
    for (std::size_t i = 0; i < x.grid().rows(); ++i) {
        for (std::size_t j = 0; j < x.grid().cols(); ++j) {
            if (j != 0) out += " | ";
            out += format(x(i, j));
        }
        out += '\n';
    }
    return out;
}

} // namespace supergeo
