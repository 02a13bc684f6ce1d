#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "supergeo/random.hpp"
#include "supergeo/superalg.hpp"
#include "supergeo/text.hpp"

using namespace supergeo;

namespace {

TablePtr chart_table()
{
    static const TablePtr t = make_table({"z1", "z2"}, {"t1", "t2"});
    return t;
}

// Reference model: odd part kept as an index list, products sorted by counting adjacent swaps.
using NaiveKey = std::pair<std::vector<int>, std::vector<int>>;
using Naive = std::map<NaiveKey, Rational>;

Naive to_naive(const SuperElem& a)
{
    Naive out;
    for (const auto& [key, c] : a.terms()) {
        std::vector<int> odd;
        for (std::size_t i = 0; i < 64; ++i) {
            if (key.odd & (OddSet{1} << i)) odd.push_back(static_cast<int>(i));
        }
        out[{key.exps, odd}] = c;
    }
    return out;
}

Naive naive_mul(const Naive& a, const Naive& b)
{
    Naive out;
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) {
            std::vector<int> odd = ka.second;
            odd.insert(odd.end(), kb.second.begin(), kb.second.end());
            int swaps = 0;
            bool repeated = false;
            for (std::size_t i = 0; i < odd.size(); ++i) {
                for (std::size_t j = 0; j + 1 < odd.size() - i; ++j) {
                    if (odd[j] == odd[j + 1]) repeated = true;
                    if (odd[j] > odd[j + 1]) {
                        std::swap(odd[j], odd[j + 1]);
                        ++swaps;
                    }
                }
            }
            if (repeated || std::adjacent_find(odd.begin(), odd.end()) != odd.end()) continue;
            std::vector<int> exps(ka.first.size());
            for (std::size_t i = 0; i < exps.size(); ++i) exps[i] = ka.first[i] + kb.first[i];
            Rational c = ca * cb;
            if (swaps % 2 == 1) c = -c;
            Rational& slot = out[{exps, odd}];
            slot += c;
            if (slot == 0) out.erase({exps, odd});
        }
    }
    return out;
}

SuperElem p(const std::string& s)
{
    return parse(s, chart_table());
}

} // namespace

TEST(SuperAlg, OddVariablesSquareToZeroAndAnticommute)
{
    const SuperElem t1 = SuperElem::variable(chart_table(), "t1");
    const SuperElem t2 = SuperElem::variable(chart_table(), "t2");
    EXPECT_TRUE((t1 * t1).is_zero());
    EXPECT_EQ(t1 * t2, -(t2 * t1));
    EXPECT_EQ(format(t2 * t1), "-t1*t2");
}

TEST(SuperAlg, ProductMatchesReferenceModel)
{
    Gen g(7);
    const TablePtr t = make_table({"x", "y"}, {"a", "b", "c", "d", "e"});
    for (int i = 0; i < 300; ++i) {
        const SuperElem a = g.elem(t, 5);
        const SuperElem b = g.elem(t, 5);
        EXPECT_EQ(to_naive(a * b), naive_mul(to_naive(a), to_naive(b))) << format(a) << " * " << format(b);
    }
}

TEST(SuperAlg, LaurentExponentsCancel)
{
    EXPECT_EQ(p("z1^-2*z1^3"), p("z1"));
    EXPECT_TRUE(p("z1*z1^-1").is_constant());
    EXPECT_EQ(p("z1*z1^-1").constant_term(), 1);
}

TEST(SuperAlg, ParityQueries)
{
    EXPECT_TRUE(p("z1 + t1*t2").is_even());
    EXPECT_TRUE(p("t1*z2^-1").is_odd());
    EXPECT_FALSE(p("z1 + t1").is_homogeneous());
    EXPECT_FALSE(p("z1 + t1").parity().has_value());
    EXPECT_TRUE(SuperElem::zero(chart_table()).is_even());
}

TEST(SuperAlg, JFiltration)
{
    const SuperElem x = p("z1 + 3*t1 - z2*t1*t2");
    EXPECT_EQ(truncate_j(x, 1), p("z1"));
    EXPECT_EQ(truncate_j(x, 2), p("z1 + 3*t1"));
    EXPECT_EQ(j_component(x, 2), p("-z2*t1*t2"));
    EXPECT_EQ(body(x), p("z1"));
    EXPECT_EQ(x.min_j_degree(), 0);
    EXPECT_EQ(p("t1*t2").min_j_degree(), 2);
}

TEST(SuperAlg, InvertUnitClosedForm)
{
    // (z1 + t1 t2)^-1 = z1^-1 - z1^-2 t1 t2, since (t1 t2)^2 = 0.
    EXPECT_EQ(invert_unit(p("z1 + t1*t2")), p("z1^-1 - z1^-2*t1*t2"));
    EXPECT_EQ(pow(p("2*z1 + t1*t2"), -2), p("1/4*z1^-2 - 1/4*z1^-3*t1*t2"));
    EXPECT_THROW(invert_unit(p("z1 + z2")), not_a_unit);
    EXPECT_THROW(invert_unit(p("t1*t2")), not_a_unit);
}

TEST(SuperAlg, Derivatives)
{
    const SuperElem x = p("z1^2*z2^-1*t1*t2 + z2*t2");
    EXPECT_EQ(deriv_even(x, "z1"), p("2*z1*z2^-1*t1*t2"));
    EXPECT_EQ(deriv_even(x, "z2"), p("-z1^2*z2^-2*t1*t2 + t2"));
    // Left derivative: move the variable to the front first.
    EXPECT_EQ(deriv_odd_left(x, "t1"), p("z1^2*z2^-1*t2"));
    EXPECT_EQ(deriv_odd_left(x, "t2"), p("-z1^2*z2^-1*t1 + z2"));
    EXPECT_THROW(deriv_even(x, Var{Parity::odd, 0}), error);
}

TEST(SuperAlg, SubstitutionRespectsSigns)
{
    const TablePtr tgt = make_table({"u"}, {"a", "b"});
    const Substitution s(chart_table(), tgt, {parse("u^-1", tgt), parse("u + a*b", tgt)},
                         {parse("b", tgt), parse("a", tgt)});
    // t1 t2 maps to b a = -a b.
    EXPECT_EQ(substitute(p("t1*t2"), s), parse("-a*b", tgt));
    EXPECT_EQ(substitute(p("z1^-2*z2"), s), parse("u^3 + u^2*a*b", tgt));
    EXPECT_EQ(substitute(p("z2^-1"), s), parse("u^-1 - u^-2*a*b", tgt));
}

TEST(SuperAlg, SubstitutionRejectsWrongParity)
{
    const TablePtr tgt = make_table({"u"}, {"a"});
    const Substitution bad(chart_table(), tgt, {parse("a", tgt), parse("u", tgt)}, {parse("a", tgt), parse("a", tgt)});
    EXPECT_THROW(substitute(p("z1"), bad), parity_error);
}

TEST(SuperAlg, TableMismatchIsAnError)
{
    const TablePtr other = make_table({"w"}, {});
    EXPECT_THROW(p("z1") + SuperElem::variable(other, "w"), table_mismatch);
    EXPECT_THROW(make_table({"x", "x"}, {}), error);
}

TEST(Text, FormatIsCanonical)
{
    EXPECT_EQ(format(p("t2*t1*z1 + 0*z2")), "-z1*t1*t2");
    EXPECT_EQ(format(p("(z1 + t1)^2")), "2*z1*t1 + z1^2");
    EXPECT_EQ(format(p("1/2 - 2/4")), "0");
    EXPECT_EQ(format(p("z1^-1*3/6")), "1/2*z1^-1");
}

TEST(Text, ParametersAndErrors)
{
    EXPECT_EQ(parse("l*t1*t2 + z1", chart_table(), ParamMap{{"l", Rational(3, 2)}}), p("3/2*t1*t2 + z1"));
    EXPECT_THROW(p("z1 +"), parse_error);
    EXPECT_THROW(p("q1"), parse_error);
    EXPECT_THROW(p("z1 / 0"), parse_error);
    EXPECT_THROW(p("(z1"), parse_error);
}

TEST(Text, RoundTripOnRandomElements)
{
    Gen g(11);
    for (int i = 0; i < 200; ++i) {
        const SuperElem x = g.elem(chart_table(), 6, std::nullopt, 3);
        EXPECT_EQ(p(format(x)), x) << format(x);
    }
}
