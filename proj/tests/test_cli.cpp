#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

const fs::path work = fs::temp_directory_path() / "fairdg_cli_tests";

int run(const std::string& args, const std::string& env = "")
{
    fs::create_directories(work);
    const std::string cmd = env + " '" FAIRDG_CLI "' " + args + " 2>>'" + (work / "stderr.log").string() + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out(const std::string& name) { return (work / name).string(); }

struct Csv {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::map<std::string, std::string>> rows;

    double num(std::size_t r, const std::string& col) const { return std::stod(rows.at(r).at(col)); }
};

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

Csv read_csv(const std::string& path)
{
    Csv csv;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind('#', 0) == 0 && csv.header.empty()) {
            csv.comments.push_back(line);
        } else if (csv.header.empty()) {
            csv.header = split(line);
        } else {
            const auto cells = split(line);
            std::map<std::string, std::string> row;
            for (std::size_t k = 0; k < csv.header.size() && k < cells.size(); ++k) row[csv.header[k]] = cells[k];
            csv.rows.push_back(row);
        }
    }
    return csv;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST(Cli, HelpSucceeds)
{
    EXPECT_EQ(run("--help > /dev/null"), 0);
    EXPECT_EQ(run("abm --help > /dev/null"), 0);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("no-such-command"), 2);
    EXPECT_EQ(run("fairness-curve --beta '' -o " + out("x.csv")), 2);
    EXPECT_EQ(run("fairness-curve --beta 0.2,0.1 -o " + out("x.csv")), 2);
    EXPECT_EQ(run("cost-sweep --costs 0,0.01,0.01 -o " + out("x.csv")), 2);
    EXPECT_EQ(run("pairwise --norm XX -o " + out("x.csv")), 2);
    EXPECT_EQ(run("pairwise --norm 1001/10 -o " + out("x.csv")), 2);
    EXPECT_EQ(run("pairwise --strategies FNR,FNR -o " + out("x.csv")), 2);
    EXPECT_EQ(run("pairwise --role sideways -o " + out("x.csv")), 2);
    EXPECT_EQ(run("pairwise -Z 2 -o " + out("x.csv")), 2);
    EXPECT_EQ(run("pairwise --epsilon 1.5 -o " + out("x.csv")), 2);
    EXPECT_EQ(run("pairwise -o /nonexistent-dir/sub/x.csv"), 2);
    EXPECT_EQ(run("abm --generations 10 --burn-in 10 -o " + out("x.csv")), 2);
    EXPECT_EQ(run("validate --checks ''"), 2);
    EXPECT_EQ(run("validate --checks nonsense"), 2);
}

TEST(Cli, FairnessCurveNamedNormsBothRoles)
{
    ASSERT_EQ(run("fairness-curve --no-timestamp -o " + out("fig2.csv")), 0);
    const auto csv = read_csv(out("fig2.csv"));
    ASSERT_EQ(csv.rows.size(), 48u);
    EXPECT_EQ(csv.comments.front(), "# schema: fairdg.fairness/1");
    EXPECT_EQ(csv.comments.size(), 1u);
    EXPECT_EQ(csv.header.size(), 8u + 8u + 8u + 2u);
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        EXPECT_EQ(csv.rows[r].at("status"), "ok");
        double phi = 0.0;
        for (const char* s : {"FFR", "FFS", "FNR", "FNS", "NFR", "NFS", "NNR", "NNS"}) phi += csv.num(r, std::string("phi_") + s);
        EXPECT_NEAR(phi, 1.0, 1e-12);
    }
    // Row order: norm, then role, then beta.
    EXPECT_EQ(csv.rows[0].at("norm_label"), "SJ");
    EXPECT_EQ(csv.rows[0].at("role"), "random");
    EXPECT_EQ(csv.rows[6].at("role"), "reputation");
    EXPECT_EQ(csv.rows[12].at("norm_label"), "SS");
    EXPECT_EQ(csv.rows[5].at("beta"), "1");
    EXPECT_EQ(csv.rows[0].at("norm"), "1001/1001");
}

TEST(Cli, LeadingEightCatalog)
{
    ASSERT_EQ(run("fairness-curve --catalog leading-eight -Z 6 --beta 0.5 --role reputation -o " + out("l8.csv")), 0);
    const auto csv = read_csv(out("l8.csv"));
    ASSERT_EQ(csv.rows.size(), 8u);
    std::set<std::string> norms;
    for (const auto& r : csv.rows) norms.insert(r.at("norm"));
    EXPECT_EQ(norms.size(), 8u);
    EXPECT_TRUE(norms.count("1001/1101"));
}

TEST(Cli, PairwiseTwelveRowsAndInvasion)
{
    ASSERT_EQ(run("pairwise --norm SJ --strategies FNR,NNS,NNR --beta 0.6 -o " + out("pw.csv")), 0);
    const auto csv = read_csv(out("pw.csv"));
    ASSERT_EQ(csv.rows.size(), 12u);
    EXPECT_EQ(csv.comments.front(), "# schema: fairdg.pairwise/1");
    bool seen = false;
    for (const auto& r : csv.rows) {
        if (r.at("role") == "reputation" && r.at("mutant") == "FNR" && r.at("resident") == "NNS") {
            EXPECT_EQ(r.at("invades"), "true");
            seen = true;
        }
    }
    EXPECT_TRUE(seen);
}

TEST(Cli, PairwiseNeutralDrift)
{
    ASSERT_EQ(run("pairwise --norm IS --beta 0 -Z 20 -o " + out("pw0.csv")), 0);
    const auto csv = read_csv(out("pw0.csv"));
    ASSERT_EQ(csv.rows.size(), 12u);
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        EXPECT_NEAR(csv.num(r, "rho_times_Z"), 1.0, 1e-12);
        EXPECT_EQ(csv.rows[r].at("invades"), "false");
    }
}

TEST(Cli, ReputationDistributions)
{
    ASSERT_EQ(run("reputation-dist --norm IS,SJ --strategy FNR,NNS --role random -Z 50 -o " + out("rd.csv")), 0);
    const auto csv = read_csv(out("rd.csv"));
    ASSERT_EQ(csv.rows.size(), 2u * 2u * 51u);
    auto block = [&](const std::string& norm, const std::string& strat) {
        std::vector<double> v;
        for (std::size_t r = 0; r < csv.rows.size(); ++r) {
            if (csv.rows[r].at("norm_label") == norm && csv.rows[r].at("strategy") == strat) v.push_back(csv.num(r, "probability"));
        }
        return v;
    };
    EXPECT_GT(block("IS", "FNR").at(0), 0.999);
    const auto sj = block("SJ", "FNR");
    EXPECT_EQ(std::max_element(sj.begin(), sj.end()) - sj.begin(), 50);
    const auto silent = block("SJ", "NNS");
    EXPECT_NEAR(silent.at(25), std::exp(std::lgamma(51.0) - 2 * std::lgamma(26.0) - 50 * std::log(2.0)), 1e-14);
}

TEST(Cli, TwoStrategyReputationGrid)
{
    ASSERT_EQ(run("reputation-dist -Z 10 --strategy FNR --resident NNR -m 4 --role reputation -o " + out("rd2.csv")), 0);
    const auto csv = read_csv(out("rd2.csv"));
    ASSERT_EQ(csv.rows.size(), 5u * 7u);
    double total = 0.0;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) total += csv.num(r, "probability");
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(csv.rows.back().at("i"), "4");
    EXPECT_EQ(csv.rows.back().at("j"), "6");
    EXPECT_EQ(run("reputation-dist -Z 10 --resident NNR -m 11 -o " + out("x.csv")), 2);
    EXPECT_EQ(run("reputation-dist -Z 10 -m 3 -o " + out("x.csv")), 2);
}

TEST(Cli, CostSweepPeaksAtZeroCost)
{
    ASSERT_EQ(run("cost-sweep --norm SJ --role reputation --beta 0.8 --costs 0,0.01,0.02,0.05 -o " + out("cost.csv")), 0);
    const auto csv = read_csv(out("cost.csv"));
    ASSERT_EQ(csv.rows.size(), 4u);
    for (std::size_t r = 1; r < 4; ++r) EXPECT_GE(csv.num(0, "F_total"), csv.num(r, "F_total"));
    EXPECT_EQ(csv.rows[3].at("c_r"), "0.050000000000000003");
}

TEST(Cli, AbmDeterministicOutput)
{
    const std::string args = "abm --norm SJ --role reputation -Z 20 --generations 2000 --burn-in 200 --seed 5 --no-timestamp --single-thread -o ";
    ASSERT_EQ(run(args + out("abm1.csv")), 0);
    ASSERT_EQ(run(args + out("abm2.csv")), 0);
    EXPECT_EQ(slurp(out("abm1.csv")), slurp(out("abm2.csv")));
    const auto csv = read_csv(out("abm1.csv"));
    ASSERT_EQ(csv.rows.size(), 1u);
    EXPECT_EQ(csv.comments.front(), "# schema: fairdg.abm/1");
    EXPECT_EQ(csv.rows[0].at("seed"), "5");
    EXPECT_EQ(csv.rows[0].at("generations"), "2000");
    EXPECT_EQ(csv.rows[0].at("status"), "ok");
    const double f = csv.num(0, "F_total");
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
}

TEST(Cli, TimestampHeaderIsOptional)
{
    ASSERT_EQ(run("pairwise -Z 5 --beta 0 -o " + out("ts.csv")), 0);
    const auto csv = read_csv(out("ts.csv"));
    ASSERT_EQ(csv.comments.size(), 2u);
    EXPECT_EQ(csv.comments[1].rfind("# generated: ", 0), 0u);
}

TEST(Cli, ConfigFileAndPrecedence)
{
    {
        std::ofstream cfg(out("run.cfg"));
        cfg << "# experiment settings\npopulation = 6\nbeta = 0.4\nnorm = SS\n";
    }
    ASSERT_EQ(run("pairwise --config " + out("run.cfg") + " -o " + out("cfg.csv")), 0);
    auto csv = read_csv(out("cfg.csv"));
    ASSERT_FALSE(csv.rows.empty());
    EXPECT_EQ(csv.rows[0].at("Z"), "6");
    EXPECT_EQ(csv.rows[0].at("beta"), "0.40000000000000002");
    EXPECT_EQ(csv.rows[0].at("norm_label"), "SS");

    ASSERT_EQ(run("pairwise --config " + out("run.cfg") + " -Z 7 -o " + out("cfg.csv")), 0);
    csv = read_csv(out("cfg.csv"));
    EXPECT_EQ(csv.rows[0].at("Z"), "7");
    EXPECT_EQ(csv.rows[0].at("beta"), "0.40000000000000002");
}

TEST(Cli, OutputDirectoryFromEnvironment)
{
    const fs::path dir = work / "envdir";
    fs::remove_all(dir);
    ASSERT_EQ(run("reputation-dist -Z 5", "FAIRDG_OUTPUT_DIR='" + dir.string() + "'"), 0);
    EXPECT_TRUE(fs::exists(dir / "reputation_dist.csv"));
}

TEST(Cli, ValidateFixationPasses)
{
    ASSERT_EQ(run("validate --checks fixation -o " + out("v.json")), 0);
    const std::string report = slurp(out("v.json"));
    EXPECT_NE(report.find("\"passed\": true"), std::string::npos);
}

TEST(Cli, ValidateDetectsPerturbedEpsilon)
{
    EXPECT_EQ(run("validate --checks one-step --samples 20000 --perturb-epsilon 0.2 -o " + out("bad.json")), 1);
    EXPECT_NE(slurp(out("bad.json")).find("\"passed\": false"), std::string::npos);
}

TEST(Cli, ValidateDefaultRunPasses)
{
    EXPECT_EQ(run("validate -o " + out("all.json")), 0);
    const std::string report = slurp(out("all.json"));
    EXPECT_EQ(report.find("\"passed\": false"), std::string::npos);
    EXPECT_NE(report.find("mu-invariance"), std::string::npos);
}
