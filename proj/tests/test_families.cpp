#include <gtest/gtest.h>

#include "supergeo/families.hpp"
#include "supergeo/text.hpp"

using namespace supergeo;

namespace {

SuperElem on(int chart, const std::string& s, const Rational& l = 1)
{
    return parse(s, p2_chart(chart).table, ParamMap{{"l", l}});
}

} // namespace

TEST(Families, ChartConventions)
{
    const Chart c1 = p2_chart(1);
    EXPECT_EQ(c1.table->even_names(), (std::vector<std::string>{"z11", "z21"}));
    EXPECT_EQ(c1.table->odd_names(), (std::vector<std::string>{"t11", "t21"}));
    EXPECT_EQ(p2_homogeneous_index(1, 0), 0);
    EXPECT_EQ(p2_homogeneous_index(1, 1), 2);
    EXPECT_EQ(p2_coordinate_index(2, 1), 1u);
    // X_0/X_1 seen from chart 2 is z12 / z22.
    EXPECT_EQ(p2_affine_ratio(p2_chart(2), 0, 1), on(2, "z12*z22^-1"));
}

TEST(Families, DecomposableImages)
{
    for (const Rational& l : {Rational(0), Rational(1), Rational(5, 2)}) {
        const Atlas a = build_decomposable(l);
        EXPECT_EQ(a.cyclic(0).image("z20"), on(1, "l*z11^-2*t11*t21 + z11^-1*z21", l));
        EXPECT_EQ(a.cyclic(0).image("t10"), on(1, "z11^-1*t11"));
        EXPECT_EQ(a.cyclic(0).image("t20"), on(1, "z11^-2*t21"));
        EXPECT_EQ(a.cyclic(2).image("t12"), on(0, "z20^-1*t10"));
        EXPECT_EQ(a.cyclic(2).image("t22"), on(0, "z20^-2*t20"));
        EXPECT_EQ(a.lambda, l);
    }
}

TEST(Families, Omega1OddBlockFollowsCotangentDifferential)
{
    const Atlas a = build_omega1(1);
    EXPECT_EQ(a.cyclic(2).image("t12"), on(0, "-z20^-2*t20"));
    EXPECT_EQ(a.cyclic(2).image("t22"), on(0, "z20^-1*t10 - z10*z20^-2*t20"));
}

TEST(Families, OddBlocksFormACocycle)
{
    for (const Atlas& a : {build_decomposable(1), build_omega1(1), build_pi_plane()}) {
        EXPECT_TRUE(check_matrix_cocycle(matrix_cocycle_of(a)).ok) << a.family;
    }
}

TEST(Families, LiteralTablesFailTheLoop)
{
    EXPECT_EQ(check_cocycle_loop(build_decomposable_literal(1)).failing(), (std::vector<std::string>{"z10", "t10", "t20"}));
    EXPECT_EQ(check_cocycle_loop(build_omega1_literal(1)).failing(), (std::vector<std::string>{"z10", "t10"}));
}

TEST(Families, GenericBuilderReproducesNamedFamilies)
{
    for (const Rational& l : {Rational(0), Rational(1), Rational(-2, 3)}) {
        EXPECT_TRUE(atlas_equal(build_generic(cotangent_cocycle(), l), build_omega1(l)));
        EXPECT_TRUE(atlas_equal(build_generic(decomposable_cocycle(), l), build_decomposable(l)));
    }
}

TEST(Families, DetCocycleTrivializations)
{
    const DetCocycle dec = det_cocycle(decomposable_cocycle());
    EXPECT_EQ(dec.k, -3);
    EXPECT_EQ(dec.trivialization, (std::vector<Rational>{1, 1, 1}));
    const DetCocycle cot = det_cocycle(cotangent_cocycle());
    EXPECT_EQ(cot.k, -3);
    EXPECT_EQ(cot.trivialization, (std::vector<Rational>{-1, 1, -1}));
}

TEST(Families, GenericRejectsWrongDeterminant)
{
    try {
        build_generic(split_minus_one_cocycle(), 1);
        FAIL() << "expected rejection";
    } catch (const domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("generic family rejected"), std::string::npos);
    }
    EXPECT_EQ(det_cocycle(identity_cocycle()).k, 0);
    EXPECT_THROW(build_generic(identity_cocycle(), 1), domain_error);
}

TEST(Families, BrokenMatrixCocycleIsReported)
{
    MatrixCocycle mc = decomposable_cocycle();
    mc.matrices[1] = mc.matrices[1] * ElemGrid(mc.matrices[1].table(), 2, 2,
                                               {SuperElem::constant(mc.matrices[1].table(), 2), SuperElem::zero(mc.matrices[1].table()),
                                                SuperElem::zero(mc.matrices[1].table()), SuperElem::one(mc.matrices[1].table())});
    EXPECT_FALSE(check_matrix_cocycle(mc).ok);
    EXPECT_THROW(build_generic(mc, 1), domain_error);
}

TEST(Families, PiPlaneEqualsOmega1AtOne)
{
    const Atlas pi = build_pi_plane();
    const Atlas om = build_omega1(1);
    EXPECT_TRUE(atlas_equal(pi, om));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(format(pi.cyclic(i).image(c)), format(om.cyclic(i).image(c)));
    }
    EXPECT_FALSE(atlas_equal(pi, build_omega1(2)));
    EXPECT_FALSE(atlas_equal(pi, build_decomposable(1)));
}

TEST(Families, PiPlaneTransitionFromBigCells)
{
    // Reducing chart 1's cell to chart 0's pivots: z10 = 1/z11 up to nilpotents.
    const TransitionMap m = pi_plane_transition(0, 1);
    EXPECT_EQ(body(m.image("z10")), on(1, "z11^-1"));
    EXPECT_EQ(m, build_pi_plane().cyclic(0));
}

TEST(Families, RescalingOddCoordinatesScalesLambda)
{
    const Atlas a = rescale_odd(build_decomposable(1), 3);
    EXPECT_EQ(a.lambda, 9);
    EXPECT_TRUE(atlas_equal(a, build_decomposable(9)));
    EXPECT_TRUE(check_cocycle_loop(a).closed);
}

TEST(Families, SymRank)
{
    EXPECT_EQ(sym_restricted_rank(1), (SuperRank{2, 2}));
    EXPECT_EQ(sym_restricted_rank(2), (SuperRank{4, 4}));
    EXPECT_EQ(sym_restricted_rank(7), (SuperRank{14, 14}));
    EXPECT_THROW(sym_restricted_rank(0), domain_error);
}

TEST(Families, AtlasEqualRejectsMismatchedCharts)
{
    Atlas a = build_decomposable(1);
    Atlas b = a;
    b.charts.pop_back();
    EXPECT_THROW(atlas_equal(a, b), dimension_error);
}
