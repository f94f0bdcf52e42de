#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qwalk/cli.hpp"
#include "qwalk/report.hpp"

using namespace qwalk;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "qwalk");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class CliFiles : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = std::filesystem::temp_directory_path()
              / ("qwalk_cli_" + std::to_string(::getpid()) + "_"
                 + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(dir);
        ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    }
    void TearDown() override
    {
        ::unsetenv("SOURCE_DATE_EPOCH");
        std::filesystem::remove_all(dir);
    }
    std::filesystem::path dir;
};

}  // namespace

TEST(ParsePiMultiple, Forms)
{
    EXPECT_DOUBLE_EQ(parse_pi_multiple("1/3"), pi / 3);
    EXPECT_DOUBLE_EQ(parse_pi_multiple("-1/12"), -pi / 12);
    EXPECT_DOUBLE_EQ(parse_pi_multiple("0.25"), pi / 4);
    EXPECT_DOUBLE_EQ(parse_pi_multiple("0"), 0.0);
    EXPECT_THROW(parse_pi_multiple("pi/3"), std::invalid_argument);
    EXPECT_THROW(parse_pi_multiple("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_pi_multiple(""), std::invalid_argument);
}

TEST(ParseAxis, Forms)
{
    const auto a = parse_axis("-1/2:1/2:5");
    ASSERT_EQ(a.size(), 5u);
    EXPECT_DOUBLE_EQ(a.front(), -pi / 2);
    EXPECT_DOUBLE_EQ(a[2], 0.0);
    EXPECT_DOUBLE_EQ(a.back(), pi / 2);
    EXPECT_EQ(parse_axis("1/4:1/2:1"), std::vector<double>{pi / 4});
    EXPECT_THROW(parse_axis("0:1"), std::invalid_argument);
    EXPECT_THROW(parse_axis("0:1:0"), std::invalid_argument);
    EXPECT_THROW(parse_axis("0:1:x"), std::invalid_argument);
}

TEST(Cli, DispersionCsvToStdout)
{
    const auto r = run({"dispersion", "--kind", "u1", "--theta1", "1/3", "--theta2", "-1/12", "--egamma", "1.1",
                        "--num-k", "8"});
    ASSERT_EQ(r.code, exit_success) << r.err;
    const auto table = parse_csv(r.out);
    ASSERT_EQ(table.size(), 9u);
    EXPECT_EQ(table[0][0], "k");
    for (std::size_t j = 1; j < table.size(); ++j)
        EXPECT_EQ(std::strtod(table[j][2].c_str(), nullptr), 0.0);
    EXPECT_NE(r.out.find("# command: qwalk dispersion"), std::string::npos);
}

TEST(Cli, DispersionJsonParses)
{
    const auto r = run({"dispersion", "--kind", "u2", "--theta1", "1/4", "--theta2", "1/20", "--num-k", "16",
                        "--format", "json"});
    ASSERT_EQ(r.code, exit_success) << r.err;
    const auto env = parse_json(r.out);
    EXPECT_EQ(std::get<BandScan>(env.payload).points.size(), 16u);
    EXPECT_EQ(env.config.subcommand, "dispersion");
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({}).code, exit_usage);
    EXPECT_EQ(run({"bogus"}).code, exit_usage);
    EXPECT_EQ(run({"dispersion", "--kind", "u3"}).code, exit_usage);
    EXPECT_EQ(run({"dispersion", "--kind", "u1", "--format", "xml"}).code, exit_usage);
    const auto bad_gain = run({"dispersion", "--kind", "u1", "--egamma", "0.5"});
    EXPECT_EQ(bad_gain.code, exit_usage);
    EXPECT_NE(bad_gain.err.find("--egamma"), std::string::npos);
    const auto bad_angle = run({"dispersion", "--kind", "u1", "--theta1", "abc"});
    EXPECT_EQ(bad_angle.code, exit_usage);
    EXPECT_NE(bad_angle.err.find("multiple of pi"), std::string::npos);
    EXPECT_EQ(run({"phase-map", "--case", "b", "--axis1", "0:0:1", "--axis2", "0:0:1", "--n", "4", "--r", "1"}).code,
              exit_usage);
}

TEST(Cli, UnwritablePathIsUsageError)
{
    const auto r = run({"dispersion", "--kind", "u1", "--num-k", "4", "--out", "/nonexistent-dir/x/out.csv"});
    EXPECT_EQ(r.code, exit_usage);
    EXPECT_NE(r.err.find("/nonexistent-dir/x/out.csv"), std::string::npos);
}

TEST(Cli, HelpAndVersion)
{
    const auto help = run({"--help"});
    EXPECT_EQ(help.code, exit_success);
    EXPECT_NE(help.out.find("dispersion"), std::string::npos);
    const auto version = run({"--version"});
    EXPECT_EQ(version.code, exit_success);
    EXPECT_NE(version.out.find(tool_version()), std::string::npos);
}

TEST(Cli, SpectrumOfHomogeneousWalk)
{
    const auto r = run({"spectrum", "--kind", "u1", "--theta1", "1/3", "--theta2", "-1/12", "--n", "10"});
    ASSERT_EQ(r.code, exit_success) << r.err;
    const auto table = parse_csv(r.out);
    ASSERT_EQ(table.size(), 21u);
    for (std::size_t j = 1; j < table.size(); ++j)
        EXPECT_EQ(table[j][6], "1");
}

TEST(Cli, CheckSymmetry)
{
    const auto r = run({"check-symmetry", "--case", "d", "--theta1", "1/4", "--theta2", "1/20", "--n", "12",
                        "--symmetry", "t", "--vectors"});
    ASSERT_EQ(r.code, exit_success) << r.err;
    EXPECT_NE(r.out.find("relation_residual"), std::string::npos);
}

TEST(Cli, VerifyPasses)
{
    const auto r = run({"verify", "--elemental"});
    EXPECT_EQ(r.code, exit_success) << r.out;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliFiles, EnsembleRerunIsByteIdentical)
{
    const auto a = dir / "a.json", b = dir / "b.json";
    const std::vector<std::string> base{"ensemble", "--case", "c", "--theta1", "1/3", "--theta2", "-1/12",
                                        "--n", "12", "--r", "3", "--seed", "5", "--check-t", "--format", "json"};
    auto args_a = base, args_b = base;
    args_a.insert(args_a.end(), {"--out", a.string()});
    args_b.insert(args_b.end(), {"--out", b.string(), "--threads", "1"});
    ASSERT_EQ(run(args_a).code, exit_success);
    ASSERT_EQ(run(args_b).code, exit_success);
    const auto ja = parse_json(slurp(a)), jb = parse_json(slurp(b));
    EXPECT_EQ(ja.timestamp, "2023-11-14T22:13:20Z");
    EXPECT_EQ(serialize({ja.tool_version, ja.timestamp, {}, ja.payload}, Format::json),
              serialize({jb.tool_version, jb.timestamp, {}, jb.payload}, Format::json));

    const auto c = dir / "c.json";
    auto args_c = base;
    args_c.insert(args_c.end(), {"--out", c.string()});
    ASSERT_EQ(run(args_c).code, exit_success);
    EXPECT_EQ(slurp(a), slurp(c));
}

TEST_F(CliFiles, ConfigReproducesOutput)
{
    const auto a = dir / "a.csv";
    ASSERT_EQ(run({"dispersion", "--kind", "u2", "--theta1", "1/3", "--theta2", "-1/12", "--num-k", "8", "--out",
                   a.string()})
                  .code,
              exit_success);
    const std::string first = slurp(a);
    const auto line_start = first.find("# command: ") + 11;
    std::string command = first.substr(line_start, first.find('\n', line_start) - line_start);
    std::vector<std::string> args;
    std::istringstream words(command);
    for (std::string w; words >> w;)
        args.push_back(w);
    args.erase(args.begin());
    const auto again = run(args);
    ASSERT_EQ(again.code, exit_success) << again.err;
    EXPECT_EQ(again.out, first);
}

TEST_F(CliFiles, PlotWritesSvg)
{
    const auto plot = dir / "s.svg";
    const auto r = run({"spectrum", "--case", "a", "--theta1", "1/3", "--theta2", "-1/12", "--n", "8", "--plot",
                        plot.string()});
    ASSERT_EQ(r.code, exit_success) << r.err;
    const std::string svg = slurp(plot);
    EXPECT_NE(svg.find("unit-circle"), std::string::npos);
}

TEST_F(CliFiles, PhaseMapSmall)
{
    const auto out = dir / "pm.csv";
    const auto r = run({"phase-map", "--case", "d", "--axis1", "-1/4:1/4:2", "--axis2", "0:1/20:2", "--n", "8",
                        "--r", "2", "--out", out.string()});
    ASSERT_EQ(r.code, exit_success) << r.err;
    EXPECT_EQ(parse_csv(slurp(out)).size(), 5u);
}
