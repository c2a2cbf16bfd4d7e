/*
 * Copyright 2026 The sdrmap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sdrmap/errors.hpp"
#include "sdrmap_cli/cli.hpp"
#include "sdrmap_cli/report.hpp"

namespace sdrmap::cli {
namespace {

namespace fs = std::filesystem;

const std::string kRemark = std::string(SDRMAP_FIXTURE_DIR) + "/remark.uai";

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sdrmap_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Cli, SolveRemark) {
  const fs::path report = scratch("remark.json");
  const CliRun r = call({"solve", kRemark, "--eps", "1e-6", "--k-max", "5000", "--report",
                      report.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("assignment=(0,1)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("energy=4"), std::string::npos);
  std::ifstream in(report);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::vector<RunReport> reports = parse_reports(buf.str());
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_NEAR(reports[0].objective, 4.0, 1e-4);
  EXPECT_EQ(reports[0].assignment, (std::vector<int>{0, 1}));
  ASSERT_TRUE(reports[0].brute_energy.has_value());
  EXPECT_DOUBLE_EQ(*reports[0].brute_energy, 4.0);
  EXPECT_EQ(reports[0].config.at("eps"), 1e-6);
}

TEST(Cli, LowRankSolver) {
  const CliRun r = call({"solve", kRemark, "--solver", "sdpad-lr", "--eps", "1e-6"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("solver=sdpad-lr"), std::string::npos);
}

TEST(Cli, NotConvergedExitCode) {
  const CliRun r = call({"solve", kRemark, "--k-max", "3"});
  EXPECT_EQ(r.code, kExitNotConverged);
  EXPECT_NE(r.err.find("did not converge"), std::string::npos);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(call({"solve", kRemark, "--eps", "-1"}).code, kExitInputError);
  EXPECT_EQ(call({"solve", kRemark, "--evid", "x.evid"}).code, kExitInputError);
  EXPECT_EQ(call({"solve", kRemark, "--solver", "scs"}).code, kExitInputError);
  EXPECT_EQ(call({"solve", "/nonexistent/model.uai"}).code, kExitInputError);
  EXPECT_EQ(call({"solve"}).code, kExitInputError);
  EXPECT_EQ(call({"frobnicate"}).code, kExitInputError);
  const fs::path bad = scratch("bad.uai");
  std::ofstream(bad) << "BAYES\n1\n2\n1\n1 0\n2\n0.5 0.5\n";
  const CliRun r = call({"solve", bad.string()});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
}

TEST(Cli, Help) {
  const CliRun r = call({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("solve"), std::string::npos);
}

TEST(Cli, Brute) {
  const CliRun r = call({"brute", kRemark});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "assignment=(0,1) energy=4\n");
  EXPECT_EQ(call({"brute", kRemark, "--cap", "2"}).code, kExitInputError);
}

TEST(Cli, GenerateAndVerifyRecovery) {
  const fs::path model = scratch("rot.uai");
  CliRun g = call({"generate", "rotation", "--out", model.string(), "--n", "8", "--m", "3",
                "--p-obs", "1", "--seed", "2"});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  ASSERT_TRUE(fs::exists(model.string() + ".json"));
  const CliRun v = call({"verify", model.string(), "--check", "recovery", "--eps", "1e-6",
                      "--k-max", "5000"});
  EXPECT_EQ(v.code, kExitOk) << v.out << v.err;
  EXPECT_NE(v.out.find("recovered=yes"), std::string::npos);

  const fs::path lab = scratch("lab.uai");
  ASSERT_EQ(call({"generate", "labeling", "--out", lab.string(), "--n", "6"}).code, kExitOk);
  const CliRun c = call({"verify", lab.string(), "--check", "recovery"});
  EXPECT_NE(c.out.find("certificate=satisfied"), std::string::npos) << c.out;
}

TEST(Cli, VerifyStructuralChecks) {
  for (const std::string check : {"marginalization", "sdr2"}) {
    const CliRun r = call({"verify", kRemark, "--check", check, "--eps", "1e-7", "--k-max", "5000",
                        "--tol", "1e-3"});
    EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
  }
  EXPECT_EQ(call({"verify", kRemark, "--check", "magic"}).code, kExitInputError);
  EXPECT_EQ(call({"verify", kRemark, "--check", "recovery"}).code, kExitInputError);
}

TEST(Cli, GenerateRejectsUnknownKind) {
  EXPECT_EQ(call({"generate", "spiral", "--out", scratch("x.uai").string()}).code,
            kExitInputError);
  EXPECT_EQ(call({"generate", "labeling", "--out", scratch("y.uai").string(), "--m", "1"}).code,
            kExitInputError);
}

TEST(Report, JsonRoundTrip) {
  RunReport r;
  r.instance = "a.uai";
  r.solver = "sdpad";
  r.objective = 1.5;
  r.assignment = {0, 2, 1};
  r.restarts = {{10, 4, 8}};
  r.config = {{"eps", 1e-4}};
  r.brute_energy = 1.25;
  EXPECT_EQ(parse_reports(dump_reports({r})), std::vector<RunReport>{r});
  RunReport s = r;
  s.brute_energy.reset();
  EXPECT_EQ(parse_reports(dump_reports({r, s})), (std::vector<RunReport>{r, s}));
  EXPECT_THROW(parse_reports("{\"instance\": 3}"), sdrmap::Error);
}

}  // namespace
}  // namespace sdrmap::cli
