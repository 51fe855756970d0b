#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ergopt/cli.hpp"
#include "support.hpp"

using namespace ergopt;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

const std::string kData = ERGOPT_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("ergopt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string at(const std::string& name) const { return (dir / name).string(); }

  // Runs the installed binary from the temp dir; returns the exit status.
  int run(const std::string& args, std::string* output = nullptr, const std::string& env = "") const {
    const std::string log = at("stdout.txt");
    const std::string cmd =
        "cd '" + dir.string() + "' && " + env + " '" + std::string(ERGOPT_CLI_PATH) + "' " + args + " >'" + log + "' 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) *output = slurp(log);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir;
  std::ostringstream out, err;
};

void expect_sorted_unit_x(const CsvTable& t) {
  const auto cx = t.column("x");
  double prev = -1;
  for (const auto& row : t.rows) {
    const double x = std::stod(row[cx]);
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    EXPECT_GT(x, prev);
    prev = x;
  }
}

}  // namespace

TEST(PotentialFile, RoundTripLocallyConstant) {
  Gen g(3);
  for (int trial = 0; trial < 20; ++trial) {
    PotentialFile f = g.potential(g.integer(2, 3), g.integer(1, 3), -5, 5, 12);
    auto back = parse_potential(serialize_potential(f));
    EXPECT_EQ(std::get<LocallyConstantPotential>(back), std::get<LocallyConstantPotential>(f));
  }
}

TEST(PotentialFile, RoundTripGrid) {
  PotentialFile sin2 = GridPotential::sin2(64);
  EXPECT_EQ(std::get<GridPotential>(parse_potential(serialize_potential(sin2))), std::get<GridPotential>(sin2));
  PotentialFile samples = GridPotential(std::vector<double>{0.1, -2.5, 1e-300, 3.0});
  EXPECT_EQ(std::get<GridPotential>(parse_potential(serialize_potential(samples))), std::get<GridPotential>(samples));
}

TEST(PotentialFile, ShortWordsAreRefined) {
  auto f = parse_potential(R"({"alphabet": 2, "depth": 2, "terms": [{"word": "1", "coef": "0.5"}]})");
  const auto& a = std::get<LocallyConstantPotential>(f);
  EXPECT_EQ(a.at(w2("10")), Rational(1, 2));
  EXPECT_EQ(a.at(w2("11")), Rational(1, 2));
  EXPECT_EQ(a.at(w2("01")), 0);
}

TEST(PotentialFile, ErrorsCarryPositionOrPath) {
  auto message = [](const std::string& text) {
    try {
      parse_potential(text, "f.json");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("{\n  \"alphabet\": 2,\n  oops\n}").find("f.json:3:3"), std::string::npos);
  EXPECT_NE(message(R"({"alphabet": 2, "depth": 2, "terms": [{"word": "2", "coef": "1"}]})").find("/terms/0/word"),
            std::string::npos);
  EXPECT_NE(message(R"({"alphabet": 2, "depth": 2, "terms": [{"word": "01", "coef": "x"}]})").find("/terms/0/coef"),
            std::string::npos);
  EXPECT_NE(message(R"({"alphabet": 2, "depth": 1, "terms": [{"word": "011", "coef": "1"}]})").find("/terms/0/word"),
            std::string::npos);
  EXPECT_NE(message(R"({"map": "doubling", "n": 6, "values": [0,0,0,0,0,0]})"), "no error");
  EXPECT_NE(message(R"({"map": "doubling", "builtin": "cos"})"), "no error");
}

TEST_F(Cli, AlphaPrintsExactValue) {
  EXPECT_EQ(cli::cmd_alpha({kData + "/i01.json", ""}, out, err), 0);
  EXPECT_NE(out.str().find("1/2"), std::string::npos);
  std::ostringstream o2;
  EXPECT_EQ(cli::cmd_alpha({kData + "/const3.json", ""}, o2, err), 0);
  EXPECT_NE(o2.str().find("3"), std::string::npos);
}

TEST_F(Cli, BadInputExitsTwo) {
  spit(at("bad.json"), "{\"alphabet\": 2,\n");
  EXPECT_EQ(cli::cmd_alpha({at("bad.json"), ""}, out, err), 2);
  EXPECT_NE(err.str().find("bad.json:"), std::string::npos);
  EXPECT_EQ(cli::cmd_alpha({at("missing.json"), ""}, out, err), 2);
  EXPECT_EQ(cli::cmd_alpha({kData + "/sin2.json", ""}, out, err), 2);
}

TEST_F(Cli, SubactionWritesTablesPlotsAndManifest) {
  cli::SubactionOptions opt;
  opt.potential = kData + "/i01.json";
  opt.out = at("i01");
  ASSERT_EQ(cli::cmd_subaction(opt, out, err), 0) << err.str();
  EXPECT_NE(out.str().find("(01)"), std::string::npos);

  auto r = parse_csv(slurp(at("i01_R.csv")));
  EXPECT_EQ(r.header, (std::vector<std::string>{"word", "x", "value", "exact"}));
  ASSERT_EQ(r.rows.size(), 4u);
  expect_sorted_unit_x(r);
  const std::vector<std::string> exact{"1/2", "0", "0", "1/2"};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.rows[i][r.column("exact")], exact[i]);
    // x agrees with the binary embedding of the word column.
    EXPECT_EQ(std::stod(r.rows[i][r.column("x")]), to_double(word_to_real(w2(r.rows[i][0].c_str()))));
  }
  expect_sorted_unit_x(parse_csv(slurp(at("i01_u.csv"))));

  const std::string svg = slurp(at("i01_R.svg"));
  EXPECT_NE(svg.find("viewBox=\"0 0 800 500\""), std::string::npos);
  EXPECT_NE(svg.find("<path"), std::string::npos);

  auto m = nlohmann::json::parse(slurp(at("i01_manifest.json")));
  for (const char* key : {"command", "config", "config_hash", "timestamps", "inputs", "input_digest", "outputs",
                          "tool_version", "exit_code"}) {
    EXPECT_TRUE(m.contains(key)) << key;
  }
  EXPECT_EQ(m["command"], "subaction");
  EXPECT_EQ(m["exit_code"], 0);
  EXPECT_EQ(m["outputs"].size(), 5u);
}

TEST_F(Cli, SubactionIsDeterministic) {
  cli::SubactionOptions opt;
  opt.potential = kData + "/i01111.json";
  opt.out = at("a");
  ASSERT_EQ(cli::cmd_subaction(opt, out, err), 0);
  opt.out = at("b");
  ASSERT_EQ(cli::cmd_subaction(opt, out, err), 0);
  for (const char* f : {"_u.csv", "_R.csv", "_u.svg", "_R.svg"}) EXPECT_EQ(slurp(at(std::string("a") + f)), slurp(at(std::string("b") + f)));
  auto ma = nlohmann::json::parse(slurp(at("a_manifest.json")));
  auto mb = nlohmann::json::parse(slurp(at("b_manifest.json")));
  EXPECT_EQ(ma["input_digest"], mb["input_digest"]);
  EXPECT_EQ(ma["diagnostics"], mb["diagnostics"]);
}

TEST_F(Cli, SubactionHalfIterationAndConstant) {
  cli::SubactionOptions opt;
  opt.potential = kData + "/i01.json";
  opt.method = "half";
  opt.out = at("h");
  ASSERT_EQ(cli::cmd_subaction(opt, out, err), 0) << err.str();
  EXPECT_NE(out.str().find("(01)"), std::string::npos);

  opt.method = "exact";
  opt.potential = kData + "/const3.json";
  opt.out = at("c");
  ASSERT_EQ(cli::cmd_subaction(opt, out, err), 0) << err.str();
  auto r = parse_csv(slurp(at("c_R.csv")));
  for (const auto& row : r.rows) EXPECT_EQ(row[r.column("exact")], "0");
}

TEST_F(Cli, SubactionNonConvergenceExitsThree) {
  cli::SubactionOptions opt;
  opt.potential = kData + "/i01111.json";
  opt.method = "half";
  opt.iters = 2;
  opt.out = at("nc");
  EXPECT_EQ(cli::cmd_subaction(opt, out, err), 3);
  auto m = nlohmann::json::parse(slurp(at("nc_manifest.json")));
  EXPECT_EQ(m["exit_code"], 3);
  EXPECT_TRUE(m["diagnostics"].contains("iterations"));
}

TEST_F(Cli, SubactionGridReportsOrbit) {
  cli::SubactionOptions opt;
  opt.potential = kData + "/sin2.json";
  opt.out = at("s");
  ASSERT_EQ(cli::cmd_subaction(opt, out, err), 0) << err.str();
  EXPECT_NE(out.str().find("1/3"), std::string::npos);
  EXPECT_NE(out.str().find("2/3"), std::string::npos);
  auto u = parse_csv(slurp(at("s_u.csv")));
  EXPECT_EQ(u.header, (std::vector<std::string>{"index", "x", "value"}));
  EXPECT_EQ(u.rows.size(), 16384u);
  expect_sorted_unit_x(u);
}

TEST_F(Cli, SweepGeometricI01) {
  cli::SweepOptions opt;
  opt.potential = kData + "/i01.json";
  opt.grid = "geometric";
  opt.steps = 13;
  opt.out = at("sw");
  ASSERT_EQ(cli::cmd_sweep(opt, out, err), 0) << err.str();
  EXPECT_NE(out.str().find("verdict: converged"), std::string::npos);
  auto t = parse_csv(slurp(at("sw_sweep.csv")));
  ASSERT_EQ(t.rows.size(), 13u);
  const auto& last = t.rows.back();
  EXPECT_EQ(std::stod(last[t.column("beta")]), 64.0);
  EXPECT_NEAR(std::stod(last[t.column("mu_010")]) + std::stod(last[t.column("mu_011")]), 0.5, 1e-6);
  auto m = nlohmann::json::parse(slurp(at("sw_manifest.json")));
  EXPECT_EQ(m["diagnostics"]["verdict"], "converged");
  EXPECT_EQ(m["diagnostics"]["points"].size(), 13u);
  EXPECT_NE(slurp(at("sw_sweep.svg")).find("viewBox=\"0 0 800 500\""), std::string::npos);
}

TEST_F(Cli, SweepZeroPotential) {
  spit(at("zero.json"), R"({"alphabet": 2, "depth": 2, "terms": []})");
  cli::SweepOptions opt;
  opt.potential = at("zero.json");
  opt.steps = 8;
  ASSERT_EQ(cli::cmd_sweep(opt, out, err), 0) << err.str();
  // Default prefix is the file stem, relative to the working directory.
  auto t = parse_csv(slurp("zero_sweep.csv"));
  for (const auto& row : t.rows) {
    EXPECT_NEAR(std::stod(row[t.column("pressure")]), std::log(2.0), 1e-14);
    for (std::size_t c = t.column("mu_000"); c < row.size(); ++c) EXPECT_EQ(row[c], t.rows[0][c]);
  }
  fs::remove("zero_sweep.csv");
  fs::remove("zero_sweep.svg");
  fs::remove("zero_manifest.json");
}

TEST_F(Cli, SweepLdp) {
  cli::SweepOptions opt;
  opt.potential = kData + "/i01.json";
  opt.beta_min = 32;
  opt.beta_max = 128;
  opt.steps = 25;
  opt.ldp = "11";
  opt.out = at("ldp");
  ASSERT_EQ(cli::cmd_sweep(opt, out, err), 0) << err.str();
  auto m = nlohmann::json::parse(slurp(at("ldp_manifest.json")));
  EXPECT_NEAR(m["diagnostics"]["ldp"]["slope"].get<double>(), -0.5, 0.02);
  EXPECT_EQ(m["diagnostics"]["ldp"]["predicted"]["num"], "-1");
}

TEST_F(Cli, SweepRejectsBadOptions) {
  cli::SweepOptions opt;
  opt.potential = kData + "/i01.json";
  opt.out = at("bad");
  opt.beta_min = 5;
  opt.beta_max = 1;
  EXPECT_EQ(cli::cmd_sweep(opt, out, err), 2);
  opt.beta_min = 1;
  opt.potential = kData + "/sin2.json";
  EXPECT_EQ(cli::cmd_sweep(opt, out, err), 2);
}

TEST_F(Cli, RotationTargetAndOracle) {
  cli::RotationOptions opt;
  opt.potential = kData + "/i01.json";
  opt.phi = {kData + "/phi_i1.json"};
  opt.h = "1/2";
  opt.oracle = 6;
  opt.out = at("rot");
  ASSERT_EQ(cli::cmd_rotation(opt, out, err), 0) << err.str();
  EXPECT_NE(out.str().find("gap 0"), std::string::npos);
  auto m = nlohmann::json::parse(slurp(at("rot_manifest.json")));
  EXPECT_EQ(m["diagnostics"]["beta"]["num"], "1");
  EXPECT_EQ(m["diagnostics"]["beta"]["den"], "2");
  EXPECT_EQ(m["diagnostics"]["oracle"]["gap"]["num"], "0");
}

TEST_F(Cli, RotationVertices) {
  cli::RotationOptions opt;
  opt.potential = kData + "/i01.json";
  opt.phi = {kData + "/phi_i1.json"};
  opt.vertices = true;
  ASSERT_EQ(cli::cmd_rotation(opt, out, err), 0) << err.str();
  EXPECT_NE(out.str().find("[0, 1]"), std::string::npos);
}

TEST_F(Cli, RotationInfeasibleExitsFour) {
  cli::RotationOptions opt;
  opt.potential = kData + "/i01.json";
  opt.phi = {kData + "/phi_i1.json"};
  opt.h = "2";
  opt.out = at("inf");
  EXPECT_EQ(cli::cmd_rotation(opt, out, err), 4);
  auto m = nlohmann::json::parse(slurp(at("inf_manifest.json")));
  EXPECT_TRUE(m["diagnostics"].contains("certificate"));
  opt.h = "1,2";
  EXPECT_EQ(cli::cmd_rotation(opt, out, err), 2);
}

TEST_F(Cli, PlotRendersCsv) {
  cli::SubactionOptions sub;
  sub.potential = kData + "/i01.json";
  sub.out = at("p");
  ASSERT_EQ(cli::cmd_subaction(sub, out, err), 0);
  cli::PlotOptions opt{at("p_R.csv"), at("replot.svg"), "R again", "value"};
  ASSERT_EQ(cli::cmd_plot(opt, out, err), 0) << err.str();
  EXPECT_EQ(slurp(at("replot.svg")).find("<svg"), 0u);
  EXPECT_NE(slurp(at("replot.svg")).find("R again"), std::string::npos);
  opt.y = "missing";
  EXPECT_EQ(cli::cmd_plot(opt, out, err), 2);
}

TEST_F(Cli, BinaryExitCodes) {
  std::string text;
  EXPECT_EQ(run("alpha '" + kData + "/i01111.json'", &text), 0);
  EXPECT_NE(text.find("1/5"), std::string::npos);
  EXPECT_EQ(run("alpha", &text), 2);
  EXPECT_EQ(run("frobnicate", &text), 2);
  EXPECT_EQ(run("rotation '" + kData + "/i01.json' --phi '" + kData + "/phi_i1.json' --h 2", &text), 4);
  EXPECT_EQ(run("subaction '" + kData + "/i01111.json' --method half --iters 2 --out nc", &text), 3);
  EXPECT_EQ(run("--version", &text), 0);
}

TEST_F(Cli, ConfigFilePrecedence) {
  spit(at("run.toml"), "[sweep]\nsteps = 5\nbeta-max = 8\n");
  ASSERT_EQ(run("--config run.toml sweep '" + kData + "/i01.json' --out cfg"), 0);
  EXPECT_EQ(parse_csv(slurp(at("cfg_sweep.csv"))).rows.size(), 5u);
  EXPECT_EQ(std::stod(parse_csv(slurp(at("cfg_sweep.csv"))).rows.back()[0]), 8.0);
  // A flag on the command line wins over the file.
  ASSERT_EQ(run("--config run.toml sweep '" + kData + "/i01.json' --steps 7 --out flag"), 0);
  EXPECT_EQ(parse_csv(slurp(at("flag_sweep.csv"))).rows.size(), 7u);
  // Built-in defaults apply without a config.
  ASSERT_EQ(run("sweep '" + kData + "/i01.json' --out plain"), 0);
  EXPECT_EQ(parse_csv(slurp(at("plain_sweep.csv"))).rows.size(), 64u);
}

TEST_F(Cli, BudgetEnvironmentVariable) {
  spit(at("deep.json"), R"({"alphabet": 2, "depth": 12, "terms": [{"word": "1", "coef": "1"}]})");
  std::string text;
  EXPECT_EQ(run("alpha deep.json", &text, "ERGOPT_BUDGET=1000"), 2) << text;
  EXPECT_EQ(run("alpha deep.json", &text), 0) << text;
}
