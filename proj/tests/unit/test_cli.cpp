#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hc3/cli.hpp"
#include "reference.hpp"

using namespace hc3;
using namespace hc3::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_config(const RunConfig& c) {
  std::ostringstream out, err;
  const int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig make(Command cmd) {
  RunConfig c;
  c.command = cmd;
  return c;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(f);
  return v;
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(Cli, ConstantsJsonHasSchemaAndKeysInOrder) {
  const Outcome o = run_config(make(Command::constants));
  ASSERT_EQ(o.code, 0) << o.err;
  const Json j = Json::parse(o.out);
  EXPECT_EQ(j["schema"], "hc3/1");
  EXPECT_EQ(j["command"], "constants");
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  const std::vector<std::string> expected{"schema", "command", "xi0", "theta0", "C1", "I2", "delta0", "C0", "lambda2", "grid"};
  EXPECT_EQ(keys, expected);
  EXPECT_NEAR(j["xi0"].get<double>(), -0.768, 1e-3);
  EXPECT_NEAR(j["C1"].get<double>(), 0.254, 1e-3);
  EXPECT_NEAR(j["xi0"].get<double>(), reference::xi0, 1e-8);
  for (const char* k : {"a2", "a1", "a0"}) EXPECT_TRUE(j["lambda2"][k].is_number_float()) << k;
  EXPECT_EQ(j["grid"]["n"], 4001);
}

TEST(Cli, ConstantsCsvIsKeyValue) {
  RunConfig c = make(Command::constants);
  c.format = Format::csv;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, 0);
  const auto ls = lines(o.out);
  ASSERT_FALSE(ls.empty());
  EXPECT_EQ(ls[0], "key,value");
  EXPECT_NE(o.out.find("\nlambda2.a2,"), std::string::npos);
  EXPECT_EQ(o.out.find('\r'), std::string::npos);
}

TEST(Cli, MuDefaultsToTheMinimizer) {
  const Outcome o = run_config(make(Command::mu));
  ASSERT_EQ(o.code, 0) << o.err;
  const Json j = Json::parse(o.out);
  EXPECT_NEAR(j["mu_extrapolated"].get<double>(), reference::theta0, 1e-8);
  EXPECT_NEAR(j["mu_derivative"].get<double>(), 0.0, 1e-5);
  RunConfig c = make(Command::mu);
  c.at = 0.0;
  EXPECT_NEAR(Json::parse(run_config(c).out)["mu_extrapolated"].get<double>(), 1.0, 1e-6);
}

TEST(Cli, DiscLambdaCsvRow) {
  RunConfig c = make(Command::disc_lambda);
  c.b = 100.0;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, 0) << o.err;
  const auto ls = lines(o.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], "B,m_star,lambda1,delta_m,Delta_B,residual,right_derivative");
  const auto f = fields(ls[1]);
  ASSERT_EQ(f.size(), 7u);
  EXPECT_EQ(f[1], "42");
  EXPECT_NEAR(std::stod(f[2]), 56.4, 1.0);
  EXPECT_EQ(f[2], format12(reference::disc_lambda1_100));
}

TEST(Cli, BRangeKeepsInputOrder) {
  RunConfig c = make(Command::disc_lambda);
  c.b_range = Range{100.0, 130.0, 10.0};
  const auto ls = lines(run_config(c).out);
  ASSERT_EQ(ls.size(), 5u);
  for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_EQ(fields(ls[i])[0], format12(90.0 + 10.0 * static_cast<double>(i)));
}

TEST(Cli, Hc3AtKappa10) {
  RunConfig c = make(Command::hc3);
  c.kappa = 10.0;
  c.format = Format::json;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, 0) << o.err;
  const Json row = Json::parse(o.out)["rows"][0];
  EXPECT_NEAR(row["H"].get<double>(), 17.5, 0.5);
  EXPECT_LT(std::abs(row["residual"].get<double>()), 1e-4);
  EXPECT_EQ(row["lower_local"], row["upper_local"]);
}

TEST(Cli, SeriesJsonAndZetaFile) {
  RunConfig c = make(Command::series);
  c.order = 4;
  const Json j = Json::parse(run_config(c).out);
  EXPECT_EQ(j["schema"], "hc3/1");
  EXPECT_EQ(j["eta"].size(), 5u);
  EXPECT_LE(j["max_resubstitution_residual"].get<double>(), 1e-12);
  EXPECT_EQ(j["H_terms"][0]["exponent"], 1.0);  // kappa / Theta0 leads

  c.zeta_path = temp_file("hc3_zeta_ok.csv", "j,zeta_j\n# comment\n0,0.25\n\n2,-0.5\n");
  c.k2 = 0.3;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(Json::parse(o.out)["eta"], j["eta"]);
}

TEST(Cli, ZetaFileReader) {
  const auto ok = read_zeta_file(temp_file("hc3_zeta_read.csv", "j,zeta\r\n1,0.5\r\n# x\r\n3,2e-1\r\n"));
  EXPECT_EQ(ok, (std::vector<double>{0.0, 0.5, 0.0, 0.2}));
  EXPECT_THROW(read_zeta_file("/nonexistent/zeta.csv"), InvalidArgument);
  EXPECT_THROW(read_zeta_file(temp_file("hc3_zeta_bad1.csv", "0,abc\n")), InvalidArgument);
  EXPECT_THROW(read_zeta_file(temp_file("hc3_zeta_bad2.csv", "0,1\nx,2\n")), InvalidArgument);
  EXPECT_THROW(read_zeta_file(temp_file("hc3_zeta_bad3.csv", "-1,1\n")), InvalidArgument);
  EXPECT_THROW(read_zeta_file(temp_file("hc3_zeta_bad4.csv", "0 1\n")), InvalidArgument);
  EXPECT_TRUE(read_zeta_file(temp_file("hc3_zeta_empty.csv", "")).empty());
}

TEST(Cli, GaugeCheckReportsExactPolynomial) {
  const Json j = Json::parse(run_config(make(Command::gauge_check)).out);
  EXPECT_EQ(j["gamma0"], 0.5);
  EXPECT_LE(j["max_difference"].get<double>(), 1e-15);
  EXPECT_EQ(j["rows"].size(), 24u);
  EXPECT_NEAR(j["perturbed"]["ratio"].get<double>(), j["perturbed"]["ratio_half_epsilon"].get<double>(), 1e-6);
}

TEST(Cli, TrialCheckTable) {
  RunConfig c = make(Command::trial_check);
  c.b = 400.0;
  const auto ls = lines(run_config(c).out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "B,delta,norm,residual,scaled_residual,scaled_norm_defect");
}

TEST(Cli, SweepReportsProgressOnStderrOnly) {
  RunConfig c = make(Command::sweep);
  c.b_range = Range{100.0, 110.0, 5.0};
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(lines(o.out).size(), 4u);
  EXPECT_NE(o.err.find("sweep: 3/3"), std::string::npos);
  EXPECT_EQ(o.out.find("sweep:"), std::string::npos);
}

TEST(Cli, ValidationErrorsExitWithTwoAndPrintNothing) {
  auto expect_invalid = [](RunConfig c) {
    const Outcome o = run_config(c);
    EXPECT_EQ(o.code, 2) << o.err;
    EXPECT_TRUE(o.out.empty());
    EXPECT_NE(o.err.find("error"), std::string::npos);
  };
  expect_invalid(make(Command::disc_lambda));  // missing --b
  RunConfig c = make(Command::disc_lambda);
  c.b = -5.0;
  expect_invalid(c);
  c = make(Command::hc3);
  c.kappa = 0.0;
  expect_invalid(c);
  c = make(Command::sweep);
  expect_invalid(c);
  c.b_range = Range{100.0, 90.0, 1.0};
  expect_invalid(c);
  c = make(Command::series);
  c.order = -1;
  expect_invalid(c);
  c = make(Command::constants);
  c.grid_n = 4;
  expect_invalid(c);
  c = make(Command::trial_check);
  c.b = 4.0;
  expect_invalid(c);
  c = make(Command::series);
  c.zeta_path = "/nonexistent/zeta.csv";
  expect_invalid(c);
}

TEST(Cli, WallInsideTheWellIsAnInputError) {
  RunConfig c = make(Command::mu);
  c.at = -30.0;
  const Outcome o = run_config(c);
  EXPECT_EQ(o.code, 2);
  EXPECT_TRUE(o.out.empty());
}

TEST(Cli, SolverFailureExitsWithThree) {
  // at tiny kappa lambda1(kappa H) never reaches kappa^2 inside the root bracket
  RunConfig c = make(Command::hc3);
  c.kappa = 0.05;
  const Outcome o = run_config(c);
  EXPECT_EQ(o.code, 3);
  EXPECT_TRUE(o.out.empty());
  EXPECT_NE(o.err.find("solver error"), std::string::npos);
}

TEST(Cli, OutputIsDeterministic) {
  RunConfig c = make(Command::disc_lambda);
  c.b_range = Range{100.0, 120.0, 10.0};
  EXPECT_EQ(run_config(c).out, run_config(c).out);
  EXPECT_EQ(run_config(make(Command::constants)).out, run_config(make(Command::constants)).out);
}

TEST(Cli, Formatting) {
  EXPECT_EQ(format12(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(round12(0.1 + 0.2), 0.3);
  EXPECT_TRUE(number(std::nan("")).is_null());
  EXPECT_EQ(parse_command("disc-lambda"), Command::disc_lambda);
  EXPECT_EQ(parse_command("nope"), std::nullopt);
  EXPECT_EQ(parse_format("csv"), Format::csv);
  EXPECT_EQ(parse_format("xml"), std::nullopt);
  EXPECT_EQ((Range{1.0, 2.0, 0.1}.values().size()), 11u);
  EXPECT_EQ(make(Command::sweep).output_format(), Format::csv);
  EXPECT_EQ(make(Command::series).output_format(), Format::json);
}
