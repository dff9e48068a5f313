// Copyright 2026 The kcat0 Authors.
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

#include "kcat0_cli.hpp"

using namespace kcat0;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "kcat0");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(ParseComplex, Literals) {
  using cli::parse_complex;
  EXPECT_EQ(parse_complex("0.5"), Complex(0.5, 0.0));
  EXPECT_EQ(parse_complex("2i"), Complex(0.0, 2.0));
  EXPECT_EQ(parse_complex("-i"), Complex(0.0, -1.0));
  EXPECT_EQ(parse_complex("1+2i"), Complex(1.0, 2.0));
  EXPECT_EQ(parse_complex("1.5-0.25i"), Complex(1.5, -0.25));
  EXPECT_EQ(parse_complex("1e-3+1e2i"), Complex(1e-3, 100.0));
  EXPECT_NEAR(parse_complex("1/3").real(), 1.0 / 3.0, 1e-16);
  EXPECT_THROW(parse_complex("abc"), Error);
  EXPECT_THROW(parse_complex(""), Error);
  const CPoint p = cli::parse_point("i,1/3");
  ASSERT_EQ(p.dim(), 2u);
  EXPECT_EQ(p[0], Complex(0.0, 1.0));
}

TEST(Cli, DistanceJsonAndCsv) {
  auto r = invoke({"distance", "--builtin", "disk", "--from", "0", "--to", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["distance"]["lo"].get<double>(), std::atanh(0.5), 1e-15);

  r = invoke({"--format", "csv", "distance", "--builtin", "halfplane-x-disk", "--from", "i,0", "--to", "4i,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string header, line;
  std::getline(is, header);
  std::getline(is, line);
  EXPECT_EQ(header, "lo,hi");
  EXPECT_NEAR(std::stod(line.substr(0, line.find(','))), std::log(2.0), 1e-12);
}

TEST(Cli, ProductCertificateExitsTwo) {
  const auto r = invoke({"certify", "--mode", "product", "--builtin", "halfplane-x-disk", "--x", "i", "--y", "4i"});
  EXPECT_EQ(r.code, 2) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["verdict"], "violation-certified");
  EXPECT_NEAR(j["defect"].get<double>(), std::pow(0.5 * std::log(2.0), 2), 1e-9);
}

TEST(Cli, DiskMidpointExitsZero) {
  const auto r = invoke({"certify", "--builtin", "disk", "--x", "-0.5", "--y", "0.5i", "--z", "0.3-0.2i"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["verdict"], "no-violation-found");
}

TEST(Cli, ErrorsExitOne) {
  auto r = invoke({"distance", "--builtin", "disk", "--from", "0", "--to", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u);
  r = invoke({"distance", "--builtin", "nowhere", "--from", "0", "--to", "0.1"});
  EXPECT_EQ(r.code, 1);
  r = invoke({"distance", "--builtin", "disk", "--from", "zz", "--to", "0.1"});
  EXPECT_EQ(r.code, 1);
  r = invoke({"frobnicate"});
  EXPECT_EQ(r.code, 1);
  r = invoke({"--format", "xml", "selftest"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, DomainFileWithParseError) {
  const auto path = std::filesystem::temp_directory_path() / "kcat0_bad_domain.json";
  std::ofstream(path) << "{\n  \"type\": \"disk\"\n  \"radius\": 1\n}\n";
  const auto r = invoke({"distance", "--domain", path.string(), "--from", "0", "--to", "0.1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  std::filesystem::remove(path);
}

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> args = {"certify", "--mode", "comparison", "--builtin", "disk", "--x", "-0.5",
                                         "--y", "0.6", "--z", "0.7i", "--samples", "5"};
  auto with = args;
  with.insert(with.begin(), {"--seed", "77"});
  const auto explicitSeed = invoke(with);
  ::setenv("KCAT0_SEED", "77", 1);
  const auto envSeed = invoke(args);
  ::unsetenv("KCAT0_SEED");
  const auto defaultSeed = invoke(args);
  ASSERT_EQ(explicitSeed.code, 0) << explicitSeed.err;
  EXPECT_EQ(envSeed.out, explicitSeed.out);
  EXPECT_NE(defaultSeed.out, explicitSeed.out);
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "kcat0_selftest.json";
  const auto r = invoke({"-o", path.string(), "selftest"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const Json j = Json::parse(in);
  EXPECT_EQ(j["result"], "pass");
  std::filesystem::remove(path);
}

TEST(Cli, LineTypeAndLimits) {
  auto r = invoke({"linetype", "--function", "quartic"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["L"], 4);
  r = invoke({"limits", "--mode", "convergence", "--builtin", "disk", "--from", "0", "--to", "0.5", "--n", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const double gap = Json::parse(r.out)["max_gap"][0]["max_gap"].get<double>();
  EXPECT_NEAR(gap, std::atanh(0.5) - std::atanh(0.5 / 1.01), 1e-9);
}
