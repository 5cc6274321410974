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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "qpm/io.hpp"

using namespace qpm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

io::Json fixture_json(const std::string& name) { return io::Json::parse(slurp(oracle::fixture(name))); }

}  // namespace

TEST(Io, LoadsEveryKind) {
  EXPECT_EQ(io::kind_name(io::load_model(oracle::fixture("hmm2.json"))), "hmm");
  EXPECT_EQ(io::kind_name(io::load_model(oracle::fixture("ffmc_golden_mean.json"))), "ffmc");
  EXPECT_EQ(io::kind_name(io::load_model(oracle::fixture("rank3_finitary.json"))), "finitary");
  EXPECT_EQ(io::kind_name(io::load_model(oracle::fixture("hadamard_qrw.json"))), "qrw");
  EXPECT_EQ(io::kind_name(io::load_model(oracle::fixture("swap_qmc.json"))), "qmc");
  EXPECT_EQ(io::kind_name(io::load_model(oracle::fixture("unbounded_qpm.json"))), "qpm");
  EXPECT_EQ(io::kind_name(io::load_model(oracle::fixture("bell_density.json"))), "density");
  EXPECT_EQ(io::kind_name(io::load_model(oracle::fixture("bell_functions.json"))), "info_functions");
}

TEST(Io, Hmm2Fixture) {
  const auto h = std::get<HmmParam>(io::load_model(oracle::fixture("hmm2.json")));
  EXPECT_EQ(h.states.size(), 2u);
  EXPECT_DOUBLE_EQ(h.emission(1, 1), 0.8);
  EXPECT_DOUBLE_EQ(h.transition(1, 0), 0.4);
  EXPECT_TRUE(validate_hmm(h).ok());
}

TEST(Io, BellFixture) {
  const auto d = std::get<io::DensityModel>(io::load_model(oracle::fixture("bell_fixture.json")));
  EXPECT_EQ(d.density.kind(), DensityKind::Generalized);
  EXPECT_NEAR(d.density.matrix()(0, 0).real(), -1.0 / 3, 1e-16);
  ASSERT_EQ(d.functions.size(), 3u);
  EXPECT_EQ(d.functions[0].name, "X");
  EXPECT_EQ(d.functions[2].at(3), "-1");
}

TEST(Io, RowSumViolationNamesTheRow) {
  try {
    io::load_model(oracle::fixture("hmm_bad_rowsum.json"));
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    ASSERT_TRUE(e.report().has("row_sum"));
    bool named = false;
    for (const auto& f : e.report().findings) named |= f.message.find("row 1") != std::string::npos;
    EXPECT_TRUE(named) << e.what();
  }
}

TEST(Io, FormatErrors) {
  auto j = fixture_json("hmm2.json");
  j["schema_version"] = "2.0";
  EXPECT_THROW(io::parse_model(j), FormatError);
  j = fixture_json("hmm2.json");
  j["colour"] = "blue";
  EXPECT_THROW(io::parse_model(j), FormatError);
  j = fixture_json("hmm2.json");
  j.erase("initial");
  EXPECT_THROW(io::parse_model(j), FormatError);
  j = fixture_json("hmm2.json");
  j["kind"] = "markov";
  EXPECT_THROW(io::parse_model(j), FormatError);
  j = fixture_json("hadamard_qrw.json");
  j["unitary"][0][0] = 0.5;  // complex entries must be pairs
  EXPECT_THROW(io::parse_model(j), FormatError);
  j = fixture_json("swap_qmc.json");
  j["subspace"]["extra"] = 1;
  EXPECT_THROW(io::parse_model(j), FormatError);
  const auto bad = fs::temp_directory_path() / "qpmkit_not_json.json";
  std::ofstream(bad) << "{ nope";
  EXPECT_THROW(io::load_model(bad), FormatError);
  EXPECT_THROW(io::load_model("/nonexistent/model.json"), FormatError);
}

TEST(Io, HermitianRedundancyChecked) {
  auto j = fixture_json("swap_qmc.json");
  j["initial"][0][1] = io::Json::array({0.25, 0.0});
  EXPECT_THROW(io::parse_model(j), ValidationError);
}

TEST(Io, InfoFunctionsAsStateTables) {
  auto j = fixture_json("bell_functions.json");
  io::Json table = io::Json::object();
  const std::vector<std::string> states = {"w1", "w2", "w3", "w4", "w5"};
  for (std::size_t i = 0; i < states.size(); ++i) table[states[i]] = j["functions"][0]["values"][i];
  j["functions"][0]["values"] = table;
  const auto m = std::get<io::InfoFunctionsModel>(io::parse_model(j));
  EXPECT_EQ(m.functions[0].at(0), "-1");
  EXPECT_EQ(m.functions[0].at(1), "1");
  table.erase("w5");
  j["functions"][0]["values"] = table;
  EXPECT_THROW(io::parse_model(j), ValidationError);
}

TEST(Io, CanonicalRoundTripIsByteIdentical) {
  const auto dir = fs::temp_directory_path() / "qpmkit_roundtrip";
  fs::create_directories(dir);
  for (const auto& entry : fs::directory_iterator(QPM_FIXTURE_DIR)) {
    const auto name = entry.path().filename().string();
    if (name == "hmm_bad_rowsum.json") continue;
    const auto model = io::load_model(entry.path());
    const auto out = dir / name;
    io::save_model(out, model);
    EXPECT_EQ(slurp(out), slurp(entry.path())) << name;
    // A second pass is stable as well.
    io::save_model(out, io::load_model(out));
    EXPECT_EQ(slurp(out), slurp(entry.path())) << name;
  }
}

TEST(Io, ConvertedModelsRoundTrip) {
  const auto h = std::get<HmmParam>(io::load_model(oracle::fixture("hmm2.json")));
  const std::vector<io::Model> models = {hmm_to_finitary(h), hmm_to_qmc(h), finitary_to_qpm(hmm_to_finitary(h)),
                                         qrw_to_qmc(std::get<QrwParam>(io::load_model(oracle::fixture("hadamard_qrw.json"))))};
  for (const auto& m : models) {
    const auto text = io::dump(io::to_json(m));
    const auto again = io::parse_model(io::Json::parse(text));
    EXPECT_EQ(io::dump(io::to_json(again)), text) << io::kind_name(m);
  }
}

TEST(Io, Tolerances) {
  const auto t = io::tolerances_from_json(io::Json{{"rank", 1e-6}});
  EXPECT_DOUBLE_EQ(t.rank, 1e-6);
  EXPECT_DOUBLE_EQ(t.psd, Tolerances{}.psd);
  EXPECT_THROW(io::tolerances_from_json(io::Json{{"bogus", 1.0}}), FormatError);
  const auto path = fs::temp_directory_path() / "qpmkit_config.json";
  std::ofstream(path) << R"({"tolerances": {"equiv": 1e-5}})";
  setenv("QPMKIT_CONFIG", path.c_str(), 1);
  EXPECT_DOUBLE_EQ(io::load_config().equiv, 1e-5);
  unsetenv("QPMKIT_CONFIG");
  EXPECT_DOUBLE_EQ(io::load_config().equiv, Tolerances{}.equiv);
}

TEST(Io, DistributionCsv) {
  std::ostringstream out;
  RealVector w(2);
  w << 0.75, 0.25;
  io::write_distribution_csv(out, {"X"}, {{"+"}, {"-"}}, w);
  EXPECT_EQ(out.str(), "X,weight\n+,0.75\n-,0.25\n");
}
