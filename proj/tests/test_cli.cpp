#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "config.hpp"
#include "eacomm/capacity_classical.hpp"
#include "eacomm/version.hpp"
#include "experiments.hpp"
#include "output.hpp"
#include "usage.hpp"

using namespace eacomm::cli;

namespace {

std::string csv_of(const ResultTable& t) {
  std::ostringstream os;
  write_csv(t, os);
  return os.str();
}

double number(const Cell& c) { return std::get<double>(c); }

long column(const ResultTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return static_cast<long>(i);
  return -1;
}

std::string meta(const ResultTable& t, const std::string& key) {
  for (const auto& [k, v] : t.metadata)
    if (k == key) return v;
  return "";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EACOMM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST(GridParse, Forms) {
  const Grid lg = Grid::parse("log:1e-4:1e-2:3");
  ASSERT_EQ(lg.values.size(), 3u);
  EXPECT_NEAR(lg.values[0], 1e-4, 1e-18);
  EXPECT_NEAR(lg.values[1], 1e-3, 1e-17);
  EXPECT_NEAR(lg.values[2], 1e-2, 1e-16);
  EXPECT_EQ(Grid::parse("lin:0:1:5").values, (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  EXPECT_EQ(Grid::parse("0.1,0.2,5").values, (std::vector<double>{0.1, 0.2, 5}));
  EXPECT_EQ(Grid::parse("lin:2:3:1").values, (std::vector<double>{2}));
}

TEST(GridParse, Rejects) {
  EXPECT_THROW(Grid::parse(""), UsageError);
  EXPECT_THROW(Grid::parse("a,b"), UsageError);
  EXPECT_THROW(Grid::parse("log:0:1:3"), UsageError);
  EXPECT_THROW(Grid::parse("lin:0:1:0"), UsageError);
  EXPECT_THROW(Grid::parse("lin:0:1:2.5"), UsageError);
}

TEST(Sweep, SinglePointUsesDefaults) {
  const ResultTable t = sweep("capacity.holevo", {}, {}, 1);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.header, (std::vector<std::string>{"eta", "n_s", "n_b", "c_bits", "status"}));
  EXPECT_EQ(std::get<std::string>(t.rows[0].back()), "ok");
  EXPECT_NEAR(number(t.rows[0][3]), eacomm::holevo_capacity({0.01, 1e-3, 10}).value, 1e-15);
}

TEST(Sweep, CartesianOrderFirstGridSlowest) {
  const ResultTable t = sweep("capacity.holevo", {{"eta", Grid::parse("0.1,0.5")}, {"n_s", Grid::parse("1e-3,1e-2,1e-1")}},
                              {{"n_b", 2.0}}, 3);
  ASSERT_EQ(t.rows.size(), 6u);
  const double etas[] = {0.1, 0.1, 0.1, 0.5, 0.5, 0.5};
  const double ns[] = {1e-3, 1e-2, 1e-1, 1e-3, 1e-2, 1e-1};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(number(t.rows[i][0]), etas[i]);
    EXPECT_EQ(number(t.rows[i][1]), ns[i]);
    EXPECT_EQ(number(t.rows[i][2]), 2.0);
    EXPECT_NEAR(number(t.rows[i][3]), eacomm::holevo_capacity({etas[i], ns[i], 2.0}).value, 1e-15);
  }
}

TEST(Sweep, UsageErrors) {
  EXPECT_THROW(sweep("capacity.holevo", {{"eta", Grid{}}}, {}, 1), UsageError);
  EXPECT_THROW(sweep("capacity.holevo", {{"gain", Grid::parse("1.1")}}, {}, 1), UsageError);
  EXPECT_THROW(sweep("capacity.holevo", {{"eta", Grid::parse("0.1")}, {"eta", Grid::parse("0.2")}}, {}, 1),
               UsageError);
  EXPECT_THROW(sweep("no.such.op", {}, {}, 1), UsageError);
  EXPECT_THROW(run_experiment({"fig99", {}}), UsageError);
}

TEST(Sweep, DomainFailuresStayInStatusColumn) {
  const ResultTable t = sweep("capacity.holevo", {{"eta", Grid::parse("0.5,1.5")}}, {}, 1);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.failed_rows(), 1);
  EXPECT_EQ(std::get<std::string>(t.rows[0].back()), "ok");
  EXPECT_TRUE(std::isnan(number(t.rows[1][3])));
}

TEST(Output, CsvRerunsByteIdentical) {
  const std::vector<std::pair<std::string, Grid>> g{{"n_s", Grid::parse("log:1e-4:1e-2:4")}};
  const std::string a = csv_of(sweep("capacity.ea", g, {}, 1));
  const std::string b = csv_of(sweep("capacity.ea", g, {}, 4));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("ce_over_c"), std::string::npos);
}

TEST(Output, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Output, JsonStructure) {
  const ResultTable t = sweep("capacity.holevo", {{"eta", Grid::parse("0.5,1.5")}}, {}, 1);
  std::ostringstream os;
  write_json(t, os);
  const auto doc = nlohmann::json::parse(os.str());
  ASSERT_TRUE(doc.contains("metadata"));
  ASSERT_TRUE(doc["rows"].is_array());
  ASSERT_EQ(doc["rows"].size(), 2u);
  EXPECT_EQ(doc["rows"][0]["status"], "ok");
  EXPECT_NEAR(doc["rows"][0]["c_bits"].get<double>(), eacomm::holevo_capacity({0.5, 1e-3, 10}).value, 1e-15);
  EXPECT_TRUE(doc["rows"][1]["c_bits"].is_null());
  EXPECT_EQ(doc["metadata"]["tool"], std::string("eacomm ") + eacomm::kVersion);
  EXPECT_THROW(parse_format("xml"), UsageError);
}

TEST(ConfigFile, SectionsAndTypes) {
  const Config c = Config::parse("[channel]\neta = 0.1\nn-b=10\n[code]\nm=1000\n");
  EXPECT_EQ(c.get_double("eta"), 0.1);
  EXPECT_EQ(c.get_long("m"), 1000);
  EXPECT_EQ(c.get("n-b"), "10");
  EXPECT_FALSE(c.get("gain").has_value());
  EXPECT_THROW(Config::parse("m=1.5\n").get_long("m"), UsageError);
  EXPECT_THROW(Config::parse("eta=abc\n").get_double("eta"), UsageError);
}

TEST(ConfigFile, DuplicateKeysRejected) {
  EXPECT_THROW(Config::parse("[a]\neta=0.1\n[b]\neta=0.2\n"), UsageError);
  EXPECT_THROW(Config::parse("eta=0.1\neta=0.2\n"), UsageError);
  EXPECT_THROW(Config::load("/nonexistent/eacomm.ini"), UsageError);
}

TEST(Experiments, Jdr1SweepMatchesFigureSubset) {
  RunSettings s;
  s.grids["n_s"] = Grid::parse("1e-4,1e-3");
  s.l_max_exp = 3;
  s.m = 1000;
  const ResultTable fig = run_experiment({"fig7", s});
  ASSERT_EQ(fig.rows.size(), 2u * 3u);
  EXPECT_EQ(meta(fig, "tool"), std::string("eacomm ") + eacomm::kVersion);
  EXPECT_EQ(meta(fig, "experiment"), "fig7");
  const ResultTable sw = sweep("jdr1.rate", {{"n_s", Grid::parse("1e-4,1e-3")}, {"l", Grid::parse("2,4,8")}},
                               {{"m", 1000}}, 2);
  ASSERT_EQ(sw.rows.size(), fig.rows.size());
  const long fig_col = column(fig, "rate_over_c"), sw_col = column(sw, "rate_over_c");
  ASSERT_GE(fig_col, 0);
  ASSERT_GE(sw_col, 0);
  for (std::size_t i = 0; i < fig.rows.size(); ++i) {
    EXPECT_EQ(number(fig.rows[i][1]), number(sw.rows[i][column(sw, "l")]));
    EXPECT_EQ(number(fig.rows[i][fig_col]), number(sw.rows[i][sw_col]));
  }
}

TEST(Experiments, NamesListed) {
  const auto names = experiment_names();
  for (const char* n : {"fig2", "fig7", "fig8", "fig19", "figA", "figQ", "figR"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  }
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(run_cli("--version"), 0);
  EXPECT_EQ(run_cli("capacity --kind holevo --eta 0.1 --n-s 1e-3 --n-b 10"), 0);
  EXPECT_EQ(run_cli("capacity --kind nonsense"), 2);
  EXPECT_EQ(run_cli("sweep capacity.holevo --grid eta=0.5,1.5"), 1);
  EXPECT_EQ(run_cli("sweep capacity.holevo --eta 1.5"), 3);
  EXPECT_EQ(run_cli("sweep capacity.holevo --gain 2"), 2);
  EXPECT_EQ(run_cli("figure fig99"), 2);
  EXPECT_EQ(run_cli("--no-such-flag"), 2);
}

TEST(Binary, ConfigFileFillsUnsetOptions) {
  const auto cfg = temp_file("eacomm_test_cfg.ini", "[channel]\neta=0.1\nn-s=1e-3\nn-b=10\n");
  const auto out = std::filesystem::temp_directory_path() / "eacomm_test_out.json";
  ASSERT_EQ(run_cli("capacity --kind holevo --config " + cfg.string() + " --format json --out " + out.string()), 0);
  std::ifstream in(out);
  const auto doc = nlohmann::json::parse(in);
  EXPECT_NEAR(doc["rows"][0]["c_bits"].get<double>(), eacomm::holevo_capacity({0.1, 1e-3, 10}).value, 1e-15);
  const auto bad = temp_file("eacomm_test_bad.ini", "[x]\nunknown-key=1\n");
  EXPECT_EQ(run_cli("capacity --config " + bad.string()), 2);
  std::filesystem::remove(cfg);
  std::filesystem::remove(bad);
  std::filesystem::remove(out);
}
