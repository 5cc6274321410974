// Copyright 2026 The qpmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "qpm/cli.hpp"

using namespace qpm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string hmm2 = oracle::fixture("hmm2.json");

}  // namespace

TEST(Cli, EvalMatchesForwardOracle) {
  const auto h = std::get<HmmParam>(io::load_model(hmm2));
  const auto r = run({"eval", hmm2, "--word", "ab"});
  ASSERT_EQ(r.code, 0) << r.err;
  // Printed with full precision: parsing it back gives the library value exactly.
  EXPECT_EQ(std::stod(r.out), cli::model_process(io::load_model(hmm2))->eval({0, 1}));
  EXPECT_NEAR(std::stod(r.out), oracle::forward(h, {0, 1}), 1e-15);
  EXPECT_NEAR(std::stod(r.out), 0.209, 1e-15);
  const auto eps = run({"eval", hmm2, "--word", ""});
  ASSERT_EQ(eps.code, 0) << eps.err;
  EXPECT_EQ(eps.out, "1\n");
  EXPECT_EQ(run({"eval", hmm2, "--word", "abc"}).code, cli::kExitValidation);
}

TEST(Cli, BellReport) {
  for (const auto& args : {std::vector<std::string>{"bell", oracle::fixture("bell_fixture.json")},
                           std::vector<std::string>{"bell", oracle::fixture("bell_density.json"),
                                                    oracle::fixture("bell_functions.json")}}) {
    const auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::map<std::string, std::string> fields;
    std::string key, value;
    while (in >> key && std::getline(in >> std::ws, value)) fields[key] = value;
    EXPECT_NEAR(std::stod(fields["lhs"]), 4.0 / 3, 1e-12);
    EXPECT_NEAR(std::stod(fields["rhs"]), 0.0, 1e-12);
    EXPECT_EQ(fields["violated"], "true");
    EXPECT_EQ(fields["jointly_observable"], "false");
    EXPECT_EQ(fields["offending"].substr(0, 7), "-1 1 1 ");
  }
}

TEST(Cli, UsageAndExitCodes) {
  auto r = run({"frobnicate"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("usage"), std::string::npos);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"eval", hmm2}).code, cli::kExitUsage);  // missing --word
  EXPECT_EQ(run({"--help"}).code, 0);

  r = run({"validate", oracle::fixture("hmm_bad_rowsum.json")});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("row 1"), std::string::npos);
  r = run({"validate", hmm2});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "valid hmm\n");

  r = run({"stationary", oracle::fixture("unbounded_qpm.json")});
  EXPECT_EQ(r.code, cli::kExitNumeric);
}

TEST(Cli, RankAndCsv) {
  EXPECT_EQ(run({"rank", oracle::fixture("iid_coin.json"), "--rows", "3", "--cols", "3"}).out, "1\n");
  EXPECT_EQ(run({"rank", oracle::fixture("rank3_finitary.json"), "--rows", "3", "--cols", "3"}).out, "3\n");
  const auto csv = fs::temp_directory_path() / "qpmkit_hankel.csv";
  ASSERT_EQ(run({"rank", hmm2, "--rows", "1", "--cols", "1", "--csv", csv.string()}).code, 0);
  const auto text = slurp(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Cli, ConvertAndEquivalence) {
  const auto dir = fs::temp_directory_path();
  for (const char* target : {"finitary", "qmc", "qpm"}) {
    const auto out = dir / (std::string("qpmkit_conv_") + target + ".json");
    const auto r = run({"convert", hmm2, "--to", target, "--out", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto e = run({"equiv", hmm2, out.string()});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_EQ(e.out, "equivalent\n") << target;
    EXPECT_EQ(run({"eval", out.string(), "--word", "ab"}).out.substr(0, 5), "0.209");
  }
  EXPECT_EQ(run({"equiv", hmm2, oracle::fixture("ffmc_golden_mean.json")}).code, cli::kExitValidation);
  const auto qrw_fin = dir / "qpmkit_qrw_fin.json";
  ASSERT_EQ(run({"convert", oracle::fixture("hadamard_qrw.json"), "--to", "finitary", "--out", qrw_fin.string()}).code, 0);
  EXPECT_EQ(run({"equiv", oracle::fixture("hadamard_qrw.json"), qrw_fin.string()}).out, "equivalent\n");
  EXPECT_EQ(run({"convert", oracle::fixture("unbounded_qpm.json"), "--to", "qmc"}).code, cli::kExitValidation);
  EXPECT_EQ(run({"convert", hmm2, "--to", "hmm"}).code, cli::kExitUsage);
}

TEST(Cli, SimulateIsReproducible) {
  const auto a = run({"simulate", hmm2, "--length", "6", "--count", "50", "--seed", "17", "--workers", "1"});
  const auto b = run({"simulate", hmm2, "--length", "6", "--count", "50", "--seed", "17", "--workers", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 50);
  EXPECT_EQ(a.out.substr(0, 7).find_first_not_of("ab\n"), std::string::npos);
  const auto c = run({"simulate", hmm2, "--length", "6", "--count", "50", "--seed", "18"});
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(run({"simulate", oracle::fixture("hadamard_qrw.json"), "--length", "4", "--count", "3", "--seed", "1"}).code, 0);
}

TEST(Cli, StationaryOutputs) {
  const auto csv = fs::temp_directory_path() / "qpmkit_letters.csv";
  for (const char* method : {"iterative", "spectral"}) {
    const auto r = run({"stationary", oracle::fixture("swap_qmc.json"), "--method", method, "--csv", csv.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = io::Json::parse(r.out);
    EXPECT_NEAR(j["limit"][0][0][0].get<double>(), 0.5, 1e-8);
    EXPECT_NEAR(j["limit"][1][1][0].get<double>(), 0.5, 1e-8);
    EXPECT_EQ(j["method"], method);
    EXPECT_NEAR(j["letter_distribution"]["s"].get<double>(), 1.0, 1e-8);
    EXPECT_EQ(slurp(csv).substr(0, 15), "letter,weight\ns");
  }
}

TEST(Cli, HiddenPath) {
  const auto h = std::get<HmmParam>(io::load_model(hmm2));
  const auto r = run({"hidden-path", hmm2, "--word", "ab"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto o = oracle::exhaustive_viterbi(h, {0, 1});
  std::string expected;
  for (std::size_t i = 0; i < o.path.size(); ++i) expected += (i ? " " : "") + h.states[o.path[i]];
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, expected);
  std::getline(in, line);
  EXPECT_NEAR(std::stod(line), o.weight, 1e-15);
}

TEST(Cli, RunReportAndToleranceFlags) {
  const auto report = fs::temp_directory_path() / "qpmkit_report.json";
  auto r = run({"rank", oracle::fixture("rank3_finitary.json"), "--rows", "3", "--cols", "3", "--tol-rank", "0.5",
                "--report", report.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out, "3\n");  // a coarse threshold drops small singular values
  const auto j = io::Json::parse(slurp(report));
  for (const char* key : {"command", "inputs", "results", "tolerances", "findings", "wall_time_ms", "exit_code"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["command"], "rank");
  EXPECT_DOUBLE_EQ(j["tolerances"]["rank"].get<double>(), 0.5);

  r = run({"validate", oracle::fixture("hmm_bad_rowsum.json"), "--report", report.string()});
  EXPECT_EQ(r.code, cli::kExitValidation);
  const auto bad = io::Json::parse(slurp(report));
  EXPECT_EQ(bad["exit_code"], 1);
  EXPECT_EQ(bad["findings"][0]["code"], "row_sum");
}
