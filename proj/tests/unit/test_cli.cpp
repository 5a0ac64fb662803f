#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include <rbm/io.hpp>

#include "cli.hpp"

using nlohmann::json;
using namespace rbm::cli;

namespace {

std::string example(const std::string& name) { return std::string(RBM_EXAMPLE_DIR) + "/" + name; }

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rbm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = 0;
  const auto spec = parse_command_line(static_cast<int>(argv.size()), argv.data(), code, out, err);
  if (spec) code = run(*spec, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST(CliParsing, RangeGridAndTheta) {
  EXPECT_EQ(parse_range("-5:0"), std::make_pair(-5.0, 0.0));
  EXPECT_EQ(parse_range("-1e-3:2.5"), std::make_pair(-1e-3, 2.5));
  EXPECT_THROW(parse_range("-5"), std::invalid_argument);
  const Grid g = parse_grid("theta1:-2:1:7");
  EXPECT_EQ(g.axis, "theta1");
  EXPECT_EQ(g.lo, -2.0);
  EXPECT_EQ(g.hi, 1.0);
  EXPECT_EQ(g.count, 7);
  EXPECT_THROW(parse_grid("theta1:-2:1:0"), std::invalid_argument);
  const auto t = parse_theta("-1,-0.5+2j");
  EXPECT_EQ(t.first, std::complex<double>(-1.0, 0.0));
  EXPECT_EQ(t.second, std::complex<double>(-0.5, 2.0));
  EXPECT_EQ(parse_theta("-1e-2-3e-1j,0").first, std::complex<double>(-1e-2, -3e-1));
  EXPECT_THROW(parse_theta("1"), std::invalid_argument);
}

TEST(Cli, ValidateIdentityModel) {
  const Result r = invoke({"validate", "--params", example("identity.json")});
  EXPECT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["ok"].get<bool>());
  for (const auto& c : j["checks"]) EXPECT_TRUE(c["passed"].get<bool>());
}

TEST(Cli, InvalidParametersExitWithTwo) {
  const Result r = invoke({"validate", "--params", example("unstable.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(json::parse(r.out)["ok"].get<bool>());
  EXPECT_NE(r.err.find("FAIL"), std::string::npos);
  EXPECT_EQ(invoke({"geometry", "--params", example("unstable.json")}).code, 2);
  EXPECT_EQ(invoke({"report", "--params", example("unstable.json")}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"eval"}).code, 1);
  EXPECT_EQ(invoke({"eval", "--params", example("identity.json"), "--range", "abc"}).code, 1);
  EXPECT_EQ(invoke({"frobnicate", "--params", example("identity.json")}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, GeometryJson) {
  const Result r = invoke({"geometry", "--params", example("identity.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["p"].get<double>(), 2.0, 1e-12);
  EXPECT_TRUE(j["p_prime"].is_null());
  EXPECT_NEAR(j["theta2_plus"].get<double>(), 1.0 + std::sqrt(2.0), 1e-12);
  EXPECT_EQ(j["index"]["chi"].get<int>(), 0);
}

TEST(Cli, CurveCsv) {
  const Result r = invoke({"curve", "--params", example("identity.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_GT(l.size(), 10u);
  EXPECT_EQ(l[0], "s,re_theta2,im_theta2,re_logG,im_logG");
  EXPECT_EQ(l[1], "0,1,-0,0,0");
}

TEST(Cli, EvalGridHas51Rows) {
  const Result r = invoke({"eval", "--params", example("identity.json"), "--axis", "theta2", "--range", "-5:0",
                           "--count", "51"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 52u);
  EXPECT_EQ(l[0], "re_theta,im_theta,re_phi,im_phi,abs_err,method");
  // Row for theta2 = -1 (index 41 of the grid).
  std::istringstream row(l[41]);
  std::string cell;
  std::vector<std::string> cells;
  while (std::getline(row, cell, ',')) cells.push_back(cell);
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_NEAR(std::stod(cells[0]), -1.0, 1e-14);
  EXPECT_NEAR(std::stod(cells[2]), 2.0 / 3.0, 1e-9);
}

TEST(Cli, EvalMarksRefusedPoints) {
  const Result r = invoke({"eval", "--params", example("identity.json"), "--grid", "theta2:2.2:3:3"});
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_NE(l[3].find("refused"), std::string::npos);
  EXPECT_NE(r.err.find("refused"), std::string::npos);
}

TEST(Cli, CompareAgainstClosedForm) {
  const Result r = invoke({"compare", "--params", example("orthogonal_correlated.json"), "--range", "-3:0",
                           "--count", "7", "--axis", "theta1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 8u);
  EXPECT_EQ(l[0], "re_theta,im_theta,re_phi,im_phi,abs_err,method,re_closed,im_closed,rel_err");
  for (std::size_t i = 1; i < l.size(); ++i) {
    EXPECT_LT(std::stod(l[i].substr(l[i].rfind(',') + 1)), 1e-6);
  }
  EXPECT_EQ(invoke({"compare", "--params", example("pole_inside.json")}).code, 1);
}

TEST(Cli, ClassifyJson) {
  const Result r = invoke({"classify", "--params", example("identity.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["case"], "1b");
  EXPECT_EQ(j["kappa"].get<double>(), 0.0);
  EXPECT_NEAR(j["tau2"].get<double>(), 2.0, 1e-12);
  EXPECT_FALSE(j.contains("b"));
  EXPECT_FALSE(j.contains("ambiguous"));
}

TEST(Cli, ReportIdentityModel) {
  const Result r = invoke({"report", "--params", example("identity.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["index"]["chi"].get<int>(), 0);
  EXPECT_NEAR(j["geometry"]["p"].get<double>(), 2.0, 1e-12);
  bool found = false;
  for (const auto& e : j["phi1"]) {
    if (e["theta2"].get<double>() == -1.0) {
      EXPECT_NEAR(e["value"][0].get<double>(), 2.0 / 3.0, 1e-6);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(j["closed_form"]["kind"], "skew_symmetric");
  EXPECT_LT(j["closed_form"]["max_rel_err"].get<double>(), 1e-6);
  // The embedded parameters re-parse and re-validate.
  const auto back = rbm::parse_params_json(j["params"].dump());
  EXPECT_TRUE(rbm::validate(back.params).ok());
}

TEST(Cli, ReportOnWedgeFileAndPoleModel) {
  const Result w = invoke({"report", "--params", example("wedge_skew.json")});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_TRUE(json::parse(w.out)["input_was_wedge"].get<bool>());
  const Result p = invoke({"report", "--params", example("pole_inside.json")});
  ASSERT_EQ(p.code, 0) << p.err;
  const json j = json::parse(p.out);
  EXPECT_EQ(j["index"]["chi"].get<int>(), -1);
  EXPECT_FALSE(j.contains("closed_form"));
}

TEST(Cli, SimulateJsonAndDeterminism) {
  const std::vector<std::string> args{"simulate", "--params", example("identity.json"), "--step", "0.002",
                                      "--burnin", "4", "--horizon", "5", "--paths", "200", "--seed", "7",
                                      "--theta", "-1,-1"};
  const Result a = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  const json j = json::parse(a.out);
  EXPECT_NEAR(j["phi_estimate"][0].get<double>(), 4.0 / 9.0, 5 * j["stderr"].get<double>());
  EXPECT_GT(j["nu1"].get<double>(), 0.0);
  EXPECT_EQ(j["stderrs"].size(), 2u);
  EXPECT_EQ(invoke(args).out, a.out);
  auto bad = args;
  bad.back() = "1,-1";
  EXPECT_EQ(invoke(bad).code, 3);
}

TEST(Cli, WritesToOutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "rbm_cli_test_geometry.json";
  const Result r = invoke({"geometry", "--params", example("identity.json"), "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  EXPECT_NEAR(j["p"].get<double>(), 2.0, 1e-12);
  std::filesystem::remove(path);
}
