#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cmcheck/cli.hpp"

namespace cmcheck {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cmcheck");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json results_of(const Outcome& o) { return nlohmann::json::parse(o.out)["results"]; }

TEST(Cli, EvalRemainder) {
  const auto o = invoke({"eval", "--fn", "remainder_hk", "--k", "0", "--t", "1"});
  ASSERT_EQ(o.code, cli::kExitPass) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["command"].get<std::string>().rfind("eval", 0), 0u);
  EXPECT_TRUE(j["pass"].get<bool>());
  const std::string value = j["results"][0]["value"];
  PrecisionScope scope(WorkingPrecision{});
  const Real parsed = parse_real(value, WorkingPrecision{});
  EXPECT_LT(boost::multiprecision::abs(parsed - (euler_e() - 1)), Real("1e-48"));
}

TEST(Cli, EvalManyFunctions) {
  const std::vector<std::vector<std::string>> cases{
      {"--fn", "a_coeff", "--i", "3", "--k", "2"},
      {"--fn", "shifted_factorial", "--a", "3", "--n", "2"},
      {"--fn", "trigamma", "--n", "1", "--t", "0.5"},
      {"--fn", "bessel_i", "--nu", "1", "--t", "2"},
      {"--fn", "hyp1f2", "--b1", "2", "--b2", "3", "--t", "1"},
      {"--fn", "h", "--t", "1"},
      {"--fn", "h_derivative", "--i", "2", "--t", "1"},
      {"--fn", "scaled_remainder_derivative", "--k", "0", "--r", "1.5", "--n", "1", "--t", "100"},
      {"--fn", "kernel_bessel", "--k", "0", "--t", "4"},
      {"--fn", "h_kernel", "--u", "1"},
  };
  for (auto c : cases) {
    c.insert(c.begin(), "eval");
    const auto o = invoke(c);
    EXPECT_EQ(o.code, cli::kExitPass) << c[2] << ": " << o.err;
  }
  EXPECT_EQ(results_of(invoke({"eval", "--fn", "a_coeff", "--i", "3", "--k", "2"}))[0]["value"], "6");
}

TEST(Cli, UsageErrors) {
  auto o = invoke({"eval", "--fn", "h", "--t", "-1"});
  EXPECT_EQ(o.code, cli::kExitUsage);
  EXPECT_NE(o.err.find("t must be > 0"), std::string::npos) << o.err;
  EXPECT_EQ(invoke({"eval", "--fn", "nope", "--t", "1"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"eval", "--fn", "h", "--t", "abc"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"eval", "--fn", "h", "--t", "1", "--digits", "10"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"degree"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"verify-integral", "--rep", "F12", "--z", "0"}).code, cli::kExitUsage);
}

TEST(Cli, ArgumentErrorFromLibraryIsUsage) {
  const auto o = invoke({"eval", "--fn", "a_coeff", "--i", "3", "--k", "5"});
  EXPECT_EQ(o.code, cli::kExitUsage);
}

TEST(Cli, ViolationExitCode) {
  const auto o = invoke({"verify-cm", "--fn", "scaled-remainder", "--k", "0", "--r", "1.5", "--grid-max", "1e4"});
  EXPECT_EQ(o.code, cli::kExitViolation) << o.err;
  const auto r = results_of(o)[0];
  EXPECT_FALSE(r["pass"].get<bool>());
  EXPECT_EQ(r["fields"]["violation_order"], "1");
}

TEST(Cli, NumericFailureExitCode) {
  // r_max = 0.5 passes, so the bracket is invalid.
  const auto o = invoke({"degree", "--k", "0", "--r-min", "0", "--r-max", "0.5", "--grid-points", "40"});
  EXPECT_EQ(o.code, cli::kExitNumeric) << o.out;
  EXPECT_FALSE(nlohmann::json::parse(o.out)["pass"].get<bool>());
}

TEST(Cli, DegreeReport) {
  const auto o = invoke({"degree", "--k", "1"});
  ASSERT_EQ(o.code, cli::kExitPass) << o.err << o.out;
  const auto r = results_of(o)[0];
  EXPECT_EQ(r["fields"]["contains_k_plus_1"], "true");
  EXPECT_EQ(r["fields"]["downward_closed"], "true");
  EXPECT_LE(std::stod(r["fields"]["width"].get<std::string>()), 1.0 / 32);
}

TEST(Cli, VerifyCmH) {
  const auto o = invoke({"verify-cm", "--fn", "h", "--grid-points", "50"});
  EXPECT_EQ(o.code, cli::kExitPass) << o.err;
}

TEST(Cli, VerifyIntegralBesselReportsAtom) {
  const auto o = invoke({"verify-integral", "--rep", "BESSEL", "--k", "0", "--z", "1"});
  ASSERT_EQ(o.code, cli::kExitPass) << o.err;
  const auto res = results_of(o);
  EXPECT_TRUE(res[1]["fields"].contains("atom"));
  EXPECT_TRUE(res[2]["pass"].get<bool>());
}

TEST(Cli, InequalityModes) {
  EXPECT_EQ(invoke({"inequality", "--which", "bessel", "--grid-points", "50"}).code, cli::kExitPass);
  EXPECT_EQ(invoke({"inequality", "--which", "trigamma", "--grid-points", "50"}).code, cli::kExitPass);
  EXPECT_EQ(invoke({"inequality", "--which", "difference", "--i", "2", "--t", "1"}).code, cli::kExitPass);
}

TEST(Cli, FpolyAllForms) {
  const auto o = invoke({"fpoly", "--i", "0", "--t", "1"});
  ASSERT_EQ(o.code, cli::kExitPass) << o.err;
  const auto res = results_of(o);
  ASSERT_EQ(res.size(), 4u);
  EXPECT_EQ(res[0]["value"], "-2");
  EXPECT_EQ(res[2]["value"], "-22");
  EXPECT_EQ(res[2]["fields"]["validated_range"], "false");
  const auto exact = invoke({"fpoly", "--i", "3", "--t", "3/2", "--form", "D"});
  EXPECT_EQ(exact.code, cli::kExitPass);
  EXPECT_EQ(results_of(exact)[0]["fields"]["matches_A"], "true");
}

TEST(Cli, JsonIsDeterministicWithoutTiming) {
  auto req = cli::parse({"cmcheck", "eval", "--fn", "h_derivative", "--i", "3", "--t", "0.7"});
  const auto a = to_json(cli::execute(req), false).dump();
  const auto b = to_json(cli::execute(req), false).dump();
  EXPECT_EQ(a, b);
}

TEST(Cli, CsvOutput) {
  const auto o = invoke({"fpoly", "--i", "1", "--t", "2", "--format", "csv"});
  ASSERT_EQ(o.code, cli::kExitPass);
  EXPECT_EQ(o.out.substr(0, std::string(kCsvHeader).size()), kCsvHeader);
  EXPECT_NE(o.out.find("f_A,exact,true,-30"), std::string::npos) << o.out;
}

TEST(Cli, OutFileIsWritten) {
  const auto path = (std::filesystem::temp_directory_path() / "cmcheck_cli_test.json").string();
  std::filesystem::remove(path);
  const auto o = invoke({"eval", "--fn", "h", "--t", "1", "--out", path});
  ASSERT_EQ(o.code, cli::kExitPass);
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
}

TEST(Cli, DigitsControlsOutputLength) {
  const auto o = invoke({"eval", "--fn", "h", "--t", "1", "--digits", "80"});
  ASSERT_EQ(o.code, cli::kExitPass);
  const std::string v = results_of(o)[0]["value"];
  PrecisionScope scope(WorkingPrecision(80));
  const Real pi = pi_constant();
  EXPECT_LT(boost::multiprecision::abs(parse_real(v, WorkingPrecision(80)) - (euler_e() - pi * pi / 6)), Real("1e-78"));
}

TEST(Cli, Help) {
  const auto o = invoke({"--help"});
  EXPECT_EQ(o.code, cli::kExitPass);
  EXPECT_NE(o.out.find("degree"), std::string::npos);
}

}  // namespace
}  // namespace cmcheck
