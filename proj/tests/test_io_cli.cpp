#include <gtest/gtest.h>

#include <sstream>

#include "supergeo/cli.hpp"
#include "supergeo/io.hpp"

using namespace supergeo;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun invoke(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

Json cli_json(std::vector<std::string> args, int expected_code = 0)
{
    args.insert(args.begin(), "--json");
    const CliRun r = invoke(args);
    EXPECT_EQ(r.code, expected_code) << r.out << r.err;
    return Json::parse(r.out);
}

std::string sample(const std::string& name)
{
    return std::string(SUPERGEO_SAMPLES_DIR) + "/" + name;
}

} // namespace

TEST(Io, RationalParsing)
{
    EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
    EXPECT_EQ(parse_rational("+7"), 7);
    EXPECT_THROW(parse_rational("1/0"), parse_error);
    EXPECT_THROW(parse_rational("1.5"), parse_error);
    EXPECT_THROW(parse_rational(""), parse_error);
    EXPECT_THROW(parse_rational("3/"), parse_error);
}

TEST(Io, AtlasRoundTrip)
{
    for (const Atlas& a : {build_decomposable(Rational(3, 2)), build_omega1(1), build_pi_plane()}) {
        const Json j = to_json(a);
        const Atlas b = atlas_from_json(j);
        EXPECT_TRUE(atlas_equal(a, b));
        EXPECT_EQ(b.family, a.family);
        EXPECT_EQ(b.lambda, a.lambda);
        EXPECT_EQ(b.trivialization, a.trivialization);
        EXPECT_EQ(to_json(b).dump(), j.dump());
    }
}

TEST(Io, AtlasJsonErrors)
{
    Json j = to_json(build_decomposable(1));
    j["maps"][0]["images"].erase("t10");
    EXPECT_THROW(atlas_from_json(j), parse_error);
    j = to_json(build_decomposable(1));
    j["maps"][0]["images"]["t10"] = "z11 +";
    EXPECT_THROW(atlas_from_json(j), parse_error);
    j = to_json(build_decomposable(1));
    j["maps"][0]["source"] = 7;
    EXPECT_THROW(atlas_from_json(j), domain_error);
}

TEST(Io, MatrixCocycleRoundTrip)
{
    const MatrixCocycle mc = cotangent_cocycle();
    const Json j = to_json(mc);
    EXPECT_EQ(to_json(matrix_cocycle_from_json(j)).dump(), j.dump());
    Json bad = j;
    std::swap(bad["matrices"][0], bad["matrices"][1]);
    EXPECT_THROW(matrix_cocycle_from_json(bad), parse_error);
}

TEST(Io, CohClassRoundTrip)
{
    const CohClass c = obstruction_delta(build_decomposable(Rational(5, 3))).cls;
    EXPECT_EQ(coh_class_from_json(to_json(c)), c);
    EXPECT_EQ(to_json(c)["coefficients"]["X0^-1*X1^-1*X2^-1"], "5/3");
}

TEST(Io, SamplesLoad)
{
    EXPECT_TRUE(atlas_equal(atlas_from_json(read_json_file(sample("omega1_atlas.json"))), build_omega1(1)));
    EXPECT_TRUE(atlas_equal(atlas_from_json(read_json_file(sample("decomposable_atlas_3_2.json"))), build_decomposable(Rational(3, 2))));
    EXPECT_EQ(to_json(matrix_cocycle_from_json(read_json_file(sample("cotangent_cocycle.json")))).dump(), to_json(cotangent_cocycle()).dump());
    EXPECT_THROW(read_json_file(sample("missing.json")), error);
}

TEST(Cli, ReportEnvelope)
{
    const Json j = cli_json({"cohomology", "--n", "2", "--k", "-3", "--q", "2"});
    EXPECT_EQ(j["command"], "cohomology");
    EXPECT_EQ(j["outcome"], "value");
    EXPECT_EQ(j["exact"], true);
    EXPECT_EQ(j["dim"], 1);
    EXPECT_EQ(j["basis"], Json::array({"X0^-1*X1^-1*X2^-1"}));
    EXPECT_TRUE(j.contains("version"));
    EXPECT_TRUE(j.contains("inputs"));
    EXPECT_TRUE(j.contains("details"));
}

TEST(Cli, VerifyAtlas)
{
    const Json ok = cli_json({"verify-atlas", "--family", "omega1", "--lambda", "2"});
    EXPECT_EQ(ok["outcome"], "pass");
    EXPECT_EQ(ok["details"]["literal_2_0_odd_block"]["loop"]["closed"], false);
    const Json bad = cli_json({"verify-atlas", "--family", "decomposable", "--corrupt", "0"}, 1);
    EXPECT_EQ(bad["details"]["loop"]["residuals"]["z20"], "-2*z10^-1*t10*t20");
    EXPECT_EQ(cli_json({"verify-atlas", "--atlas", sample("corrupted_atlas.json")}, 1)["closed"], false);
}

TEST(Cli, GenericFamilyFromCocycleFile)
{
    EXPECT_EQ(cli_json({"verify-atlas", "--family", "generic", "--cocycle", sample("cotangent_cocycle.json")})["closed"], true);
    const Json rejected = cli_json({"verify-atlas", "--family", "generic", "--cocycle", sample("split_minus_one_cocycle.json")}, 1);
    EXPECT_NE(rejected["details"]["error"].get<std::string>().find("generic family rejected"), std::string::npos);
}

TEST(Cli, BerezinianAndCalabiYau)
{
    EXPECT_EQ(cli_json({"berezinian", "--family", "decomposable", "--pair", "0", "1"})["value"], "-1");
    EXPECT_EQ(cli_json({"berezinian", "--family", "decomposable", "--pair", "1", "0"})["value"], "-1");
    EXPECT_EQ(cli_json({"calabi-yau", "--family", "omega1"})["calabi_yau"], true);
    EXPECT_EQ(cli_json({"calabi-yau", "--family", "split-minus-one"}, 1)["calabi_yau"], false);
}

TEST(Cli, ChasesAndComparisons)
{
    const Json pic = cli_json({"picard-chase", "--family", "decomposable", "--lambda", "0"});
    EXPECT_EQ(pic["outcome"], "projected/split branch");
    const Json obs = cli_json({"obstruction", "--family", "omega1", "--lambda", "2"});
    EXPECT_EQ(obs["class"]["coefficients"]["X0^-1*X1^-1*X2^-1"], "2");
    EXPECT_EQ(cli_json({"omega-cocycle", "--family", "decomposable"})["zero"], true);
    const Json pi = cli_json({"pi-plane-compare"});
    EXPECT_EQ(pi["equal"], true);
    EXPECT_EQ(pi["identical_assignments"], 12);
}

TEST(Cli, SmallCommands)
{
    EXPECT_EQ(cli_json({"h1-tangent", "--n", "2", "--k", "-3"})["details"]["agree"], true);
    EXPECT_EQ(cli_json({"bott", "--n", "2", "--p", "1", "--k", "3", "--q", "0"})["dim"], 8);
    const Json sym = cli_json({"sym-rank", "--k", "5"});
    EXPECT_EQ(sym["even"], 10);
    EXPECT_EQ(sym["odd"], 10);
    const Json parsed = cli_json({"parse", "t20*t10 + l", "--chart", "0", "--param", "l=1/2"});
    EXPECT_EQ(parsed["canonical"], "1/2 - t10*t20");
    EXPECT_EQ(parsed["parity"], "even");
    EXPECT_EQ(cli_json({"parse", "a*b*a + x", "--even", "x", "--odd", "a,b"})["canonical"], "x");
}

TEST(Cli, SelftestHonoursSeed)
{
    const Json j = cli_json({"selftest", "--cases", "200"});
    EXPECT_EQ(j["outcome"], "pass");
    EXPECT_EQ(j["inputs"]["seed"], default_seed);
}

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(invoke({"cohomology", "--n", "2"}).code, 2);
    EXPECT_EQ(invoke({"nonsense"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"verify-atlas", "--family", "nope"}).code, 2);
    EXPECT_EQ(invoke({"verify-atlas", "--lambda", "1/0"}).code, 2);
    EXPECT_EQ(invoke({"parse", "z10 +", "--chart", "0"}).code, 2);
    EXPECT_EQ(invoke({"verify-atlas", "--atlas", sample("missing.json")}).code, 2);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, TextOutputIsReadable)
{
    const CliRun r = invoke({"sym-rank", "--k", "1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sym-rank: value"), std::string::npos);
    EXPECT_NE(r.out.find("even: 2"), std::string::npos);
}
