#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stein/cli.hpp"
#include "stein/report.hpp"

using namespace stein;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "stein-be");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("stein_be_test_" + name);
}

}  // namespace

TEST(Report, NumberFormattingRoundTrips) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Report, CsvAndJsonShapes) {
  Table t{"demo", {"name", "value", "count", "ok"}, {}};
  t.add({std::string("a,b"), 0.5, std::int64_t{3}, true});
  EXPECT_THROW(t.add({std::string("short")}), ConfigError);
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), "# stein-be demo csv v1\nname,value,count,ok\n\"a,b\",0.5,3,true\n");
  const auto j = report_json(t, nlohmann::json{{"seed", 1}});
  EXPECT_EQ(j["rows"][0]["count"], 3);
  EXPECT_EQ(j["config"]["seed"], 1);
  EXPECT_FALSE(j["git_revision"].get<std::string>().empty());
}

TEST(Cli, CheckInequalitiesPasses) {
  const Result r = invoke({"check-inequalities", "--k", "3"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(r.out).front(), "# stein-be checks csv v1");
  EXPECT_EQ(r.out.find(",FAIL,"), std::string::npos);
}

TEST(Cli, DeltaNullCaseIsDeterministic) {
  const std::vector<std::string> args{"delta", "--source", "gaussian", "--k", "2", "--n", "16", "--M", "100000",
                                      "--seed", "7"};
  const Result a = invoke(args);
  const Result b = invoke(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto rows = lines(a.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1], "k,n,source,family,M,seed,delta_hat,std_error,max_set_error,argmax");
  std::vector<std::string> cells;
  std::stringstream row(rows[2]);
  for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
  EXPECT_LE(std::stod(cells[6]), 3.0 * std::stod(cells[8]));
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  EXPECT_EQ(invoke(threaded).out, a.out);
}

TEST(Cli, ConfigErrorsExitTwoWithOneLine) {
  for (const auto& args : std::vector<std::vector<std::string>>{{"delta", "--bogus"},
                                                                {"delta", "--M", "10"},
                                                                {"delta", "--k", "0"},
                                                                {"delta", "--source", "cauchy"},
                                                                {"nonsense"},
                                                                {"check-stein", "--k", "5"},
                                                                {"discrepancy", "--k", "2", "--set",
                                                                 R"({"variant":"ball","center":[0],"radius":1})"},
                                                                {"delta", "--t", "soon"},
                                                                {"delta", "--config", "/nonexistent/cfg.json"}}) {
    const Result r = invoke(args);
    EXPECT_EQ(r.code, kExitConfigError) << args.front();
    EXPECT_EQ(r.err.rfind("stein-be: error: ", 0), 0u) << r.err;
    EXPECT_EQ(lines(r.err).size(), 1u) << r.err;
  }
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = temp_path("config.json");
  {
    std::ofstream f(cfg);
    f << R"({"k": 1, "n": 4, "M": 5000, "source": "rademacher", "seed": 3, "constants": {"c": 2.0}})";
  }
  const Result a = invoke({"delta", "--config", cfg.string()});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_NE(a.out.find("\n1,4,rademacher,default,5000,3,"), std::string::npos) << a.out;
  const Result b = invoke({"delta", "--config", cfg.string(), "--n", "9", "--format", "json"});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  const auto j = nlohmann::json::parse(b.out);
  EXPECT_EQ(j["rows"][0]["n"], 9);
  EXPECT_EQ(j["config"]["constants"]["c"], 2.0);
  EXPECT_EQ(j["kind"], "delta");
  {
    std::ofstream f(cfg);
    f << R"({"k": 1, "mystery": 4})";
  }
  EXPECT_EQ(invoke({"delta", "--config", cfg.string()}).code, kExitConfigError);
  std::filesystem::remove(cfg);
}

TEST(Cli, WritesBothFormatsToFiles) {
  const auto base = temp_path("out.csv");
  const Result r = invoke({"bounds", "--k", "1", "--n", "8", "--source", "uniform", "--M", "5000", "--format", "both",
                           "--out", base.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto csv = temp_path("out.csv");
  const auto json = temp_path("out.json");
  ASSERT_TRUE(std::filesystem::exists(csv));
  ASSERT_TRUE(std::filesystem::exists(json));
  std::ifstream jf(json);
  const auto j = nlohmann::json::parse(jf);
  EXPECT_EQ(j["rows"].size(), 1u);
  EXPECT_TRUE(j["summary"].contains("induction"));
  std::filesystem::remove(csv);
  std::filesystem::remove(json);
}

TEST(Cli, DiscrepancyAndDimScanRun) {
  const Result d = invoke({"discrepancy", "--k", "1", "--n", "4", "--source", "rademacher", "--t", "0.5", "--M",
                           "5000", "--set", R"({"variant":"half-space","normal":[1],"offset":0})"});
  ASSERT_EQ(d.code, kExitOk) << d.err;
  EXPECT_EQ(lines(d.out).size(), 3u);
  const Result s = invoke({"dim-scan", "--sources", "rademacher", "--k-list", "1,2", "--n-list", "4,16", "--M",
                           "5000", "--format", "json"});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  const auto j = nlohmann::json::parse(s.out);
  EXPECT_EQ(j["rows"].size(), 4u);
  EXPECT_EQ(j["summary"]["k_exponents"].size(), 2u);
}

TEST(Cli, HelpExitsZero) {
  const Result r = invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("dim-scan"), std::string::npos);
}
