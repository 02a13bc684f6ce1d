#include <gtest/gtest.h>

#include "supergeo/families.hpp"
#include "supergeo/random.hpp"
#include "supergeo/supermat.hpp"
#include "supergeo/text.hpp"

using namespace supergeo;

namespace {

TablePtr tab()
{
    static const TablePtr t = make_table({"x", "y"}, {"a", "b", "c"});
    return t;
}

SuperElem p(const std::string& s)
{
    return parse(s, tab());
}

ElemGrid grid(std::size_t r, std::size_t c, const std::vector<std::string>& cells)
{
    std::vector<SuperElem> out;
    for (const auto& s : cells) out.push_back(p(s));
    return ElemGrid(tab(), r, c, std::move(out));
}

// 1|1 closed form: Ber [[a, b], [c, d]] = (a - b c / d) / d.
SuperElem ber_1_1(const SuperElem& a, const SuperElem& b, const SuperElem& c, const SuperElem& d)
{
    const SuperElem dinv = invert_unit(d);
    return (a - b * c * dinv) * dinv;
}

} // namespace

TEST(SuperMat, DetEvenAgreesWithSarrus)
{
    const ElemGrid m = grid(3, 3, {"x", "1", "y", "a*b", "x^-1", "2", "3", "y^2", "b*c + 1"});
    const auto e = [&m](int i, int j) { return m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };
    const SuperElem sarrus = e(0, 0) * e(1, 1) * e(2, 2) + e(0, 1) * e(1, 2) * e(2, 0) + e(0, 2) * e(1, 0) * e(2, 1) -
                             e(0, 2) * e(1, 1) * e(2, 0) - e(0, 0) * e(1, 2) * e(2, 1) - e(0, 1) * e(1, 0) * e(2, 2);
    EXPECT_EQ(det_even(m), sarrus);
}

TEST(SuperMat, InverseEvenIsTwoSided)
{
    Gen g(3);
    for (int i = 0; i < 40; ++i) {
        const ElemGrid m = g.invertible_even_grid(tab(), 3);
        const ElemGrid inv = inverse_even(m);
        EXPECT_EQ(m * inv, ElemGrid::identity(tab(), 3));
        EXPECT_EQ(inv * m, ElemGrid::identity(tab(), 3));
    }
}

TEST(SuperMat, BerezinianOneOneClosedForm)
{
    Gen g(5);
    for (int i = 0; i < 100; ++i) {
        const SuperMatrix x = g.invertible_supermatrix(tab(), 1, 1);
        EXPECT_EQ(berezinian(x), ber_1_1(x(0, 0), x(0, 1), x(1, 0), x(1, 1)));
    }
}

TEST(SuperMat, BerezinianOfBlockDiagonalIsDetRatio)
{
    const ElemGrid a = grid(2, 2, {"x", "y", "0", "3"});
    const ElemGrid d = grid(1, 1, {"y^2"});
    const SuperMatrix m = SuperMatrix::from_blocks(a, ElemGrid(tab(), 2, 1), ElemGrid(tab(), 1, 2), d);
    EXPECT_EQ(berezinian(m), p("3*x*y^-2"));
}

TEST(SuperMat, BerezinianOfPurelyOddPerturbation)
{
    // [[1, a], [b, 1]]: Ber = 1 - a b, its inverse is 1 + a b.
    const SuperMatrix m = SuperMatrix::from_blocks(grid(1, 1, {"1"}), grid(1, 1, {"a"}), grid(1, 1, {"b"}), grid(1, 1, {"1"}));
    EXPECT_EQ(berezinian(m), p("1 - a*b"));
    EXPECT_EQ(berezinian(inverse(m)), p("1 + a*b"));
}

TEST(SuperMat, RejectsWrongParityEntries)
{
    EXPECT_THROW(SuperMatrix::from_blocks(grid(1, 1, {"a"}), grid(1, 1, {"a"}), grid(1, 1, {"b"}), grid(1, 1, {"1"})), parity_error);
    EXPECT_THROW(SuperMatrix(Grading{1, 1}, Grading{1, 1}, grid(1, 2, {"1", "a"})), dimension_error);
}

TEST(SuperMat, SingularInputsRaise)
{
    const SuperMatrix m = SuperMatrix::from_blocks(grid(1, 1, {"x + y"}), grid(1, 1, {"a"}), grid(1, 1, {"b"}), grid(1, 1, {"x + y"}));
    EXPECT_THROW(berezinian(m), not_a_unit);
    EXPECT_THROW(inverse(m), not_a_unit);
}

TEST(SuperMat, BlocksRoundTrip)
{
    Gen g(9);
    const SuperMatrix x = g.invertible_supermatrix(tab(), 2, 1);
    const SuperMatrix y = SuperMatrix::from_blocks(x.block(Block::A), x.block(Block::B), x.block(Block::C), x.block(Block::D));
    EXPECT_EQ(x, y);
}

TEST(SuperMat, StandardFormProducesIdentityMinor)
{
    // Chart 1 big cell of the Pi-plane reduced to chart 0 pivots.
    const SuperMatrix cell = pi_plane_big_cell(1);
    const SuperMatrix r = standard_form(cell, PivotColumns{{0}, {3}});
    const SuperMatrix minor = select_columns(r, PivotColumns{{0}, {3}});
    EXPECT_EQ(minor, SuperMatrix::identity(cell.table(), Grading{1, 1}));
    EXPECT_EQ(standard_form(r, PivotColumns{{0}, {3}}), r);
}

TEST(SuperMat, StandardFormRejectsNonInvertibleMinor)
{
    const TablePtr t = p2_chart(0).table;
    ElemGrid g(t, 2, 6);
    g(0, 0) = SuperElem::one(t);
    g(1, 3) = SuperElem::one(t);
    const SuperMatrix z(Grading{1, 1}, Grading{3, 3}, g);
    // Columns 1 and 4 are zero in this cell.
    EXPECT_THROW(standard_form(z, PivotColumns{{1}, {4}}), domain_error);
    EXPECT_THROW(standard_form(z, PivotColumns{{3}, {0}}), parity_error);
}

TEST(SuperMat, FormatListsRows)
{
    const SuperMatrix m = SuperMatrix::from_blocks(grid(1, 1, {"x"}), grid(1, 1, {"a"}), grid(1, 1, {"b"}), grid(1, 1, {"y"}));
    EXPECT_NE(format(m).find("x | a"), std::string::npos);
}
