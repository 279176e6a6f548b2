// Copyright 2026 The qil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qil/io.hpp"

namespace qil {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Compares against tests/golden/<name>; QIL_UPDATE_GOLDEN=1 rewrites it.
void expect_golden(const std::string& name, const std::string& text) {
  std::string path = std::string(QIL_GOLDEN_DIR) + "/" + name;
  if (const char* up = std::getenv("QIL_UPDATE_GOLDEN"); up && std::string(up) == "1") {
    std::ofstream(path, std::ios::binary) << text;
  }
  EXPECT_EQ(text, read_file(path)) << "golden " << name;
}

RunConfig cfg(const std::string& text) { return RunConfig::from_text(text, "test.cfg"); }

TEST(Config, ParsesCommentsAndWhitespace) {
  RunConfig c = cfg("# header\nscheme = tf   # inline\n\n  n_photons=12\n");
  EXPECT_EQ(c.get_string("scheme"), "tf");
  EXPECT_EQ(c.get_integer("n_photons"), 12);
  EXPECT_EQ(c.origin("n_photons"), "test.cfg:4");
  EXPECT_EQ(c.get_string("mode", "exhaustive"), "exhaustive");
}

TEST(Config, ErrorsCarryLineAndKey) {
  try {
    cfg("scheme = tf\nwaist = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("test.cfg:2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("waist"), std::string::npos);
  }
  EXPECT_THROW(cfg("scheme tf\n"), ConfigError);
  EXPECT_THROW(cfg("scheme = tf\nscheme = noon\n"), ConfigError);
  EXPECT_THROW(cfg("scheme =\n"), ConfigError);
}

TEST(Config, TypedAccess) {
  RunConfig c = cfg("n_photons = 1e3\ntheta = abc\nseed = 2.5\n");
  EXPECT_EQ(c.get_integer("n_photons"), 1000);
  EXPECT_THROW(c.get_double("theta"), ConfigError);
  EXPECT_THROW(c.get_integer("seed"), ConfigError);
  EXPECT_FALSE(c.find_double("waist_ratio").has_value());
}

TEST(Config, Validation) {
  EXPECT_THROW(cfg("theta = 0.1\ndetuning_ratio = 0.01\n").validate(), ConfigError);
  EXPECT_THROW(cfg("mode = sampled\n").validate(), ConfigError);
  EXPECT_NO_THROW(cfg("mode = sampled\nseed = 4\n").validate());
  EXPECT_THROW(cfg("scheme = laser\n").validate(), ConfigError);
  EXPECT_THROW(cfg("format = xml\n").validate(), ConfigError);
  EXPECT_THROW(cfg("n_photons = 0\n").validate(), ConfigError);
  EXPECT_THROW(cfg("detuning_ratio = 2\n").validate(), ConfigError);
  EXPECT_THROW(cfg("fidelity_target = 1\n").validate(), ConfigError);
}

TEST(Config, FlagsOverrideFile) {
  RunConfig file = cfg("scheme = tf\nn_photons = 5\n");
  RunConfig flags;
  flags.set("n_photons", "9", "--n-photons");
  file.merge(flags);
  EXPECT_EQ(file.get_integer("n_photons"), 9);
  EXPECT_EQ(file.origin("n_photons"), "--n-photons");
  EXPECT_EQ(file.get_string("scheme"), "tf");
  EXPECT_THROW(flags.set("bogus", "1", "--bogus"), ConfigError);
}

TEST(Grid, RangeAndList) {
  auto g = parse_grid("0.5:2:4");
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g[0], 0.5);
  EXPECT_DOUBLE_EQ(g[3], 2.0);
  EXPECT_EQ(parse_grid("1, 2,3").size(), 3u);
  EXPECT_THROW(parse_grid("1:2"), ConfigError);
  EXPECT_THROW(parse_grid("1:2:1"), ConfigError);
  EXPECT_THROW(parse_grid("1,x"), ConfigError);
}

TEST(Sweep, RejectsBadSpecs) {
  SweepSpec s;
  s.grid = {1.0};
  EXPECT_THROW(validate_sweep(s), ConfigError);
  s.grid = {1.0, 0.5};
  EXPECT_THROW(validate_sweep(s), ConfigError);
  s.grid = {0.5, 1.0};
  s.quantities = {"gamma"};
  EXPECT_THROW(validate_sweep(s), ConfigError);
}

TEST(Sweep, CsvGoldenAndColumnOrder) {
  SweepSpec s;
  s.n = 100;
  s.grid = parse_grid("0.25:3:12");
  expect_golden("sweep_n100.csv", sweep_csv(s));
  s.quantities = {"kappa", "epsilon"};
  std::string two = sweep_csv(s);
  EXPECT_EQ(two.substr(0, two.find('\n')), "N,theta,N_theta,epsilon,kappa");
  EXPECT_EQ(two.back(), '\n');
}

TEST(Sweep, JsonGolden) {
  SweepSpec s;
  s.n = 20;
  s.grid = {0.5, 1.0, 1.5};
  expect_golden("sweep_n20.json", sweep_json(s));
}

// Property: eta_loss never falls below eta on any row.
TEST(SweepProperty, LossEnvelope) {
  SweepSpec s;
  s.n = 200;
  s.grid = parse_grid("0.05:6:60");
  s.quantities = {"eta", "eta_loss"};
  std::istringstream in(sweep_csv(s));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 5u);
    EXPECT_GE(v[4] + 1e-15, v[3]);
    ++rows;
  }
  EXPECT_EQ(rows, 60);
}

TEST(Sweep, ThreadCountDoesNotChangeBytes) {
  SweepSpec s;
  s.n = 150;
  s.grid = parse_grid("0.1:4:25");
  setenv("QIL_THREADS", "1", 1);
  std::string one = sweep_csv(s);
  setenv("QIL_THREADS", "4", 1);
  std::string four = sweep_csv(s);
  unsetenv("QIL_THREADS");
  EXPECT_EQ(one, four);
}

TEST(Budget, GoldenAndAnchors) {
  CommandOutput out = cmd_budget(cfg("n_photons = 1000\n"));
  EXPECT_EQ(out.exit_code, kExitOk);
  expect_golden("budget_n1000.json", out.text);
  EXPECT_NE(out.text.find("\"M_quoted\": 660000"), std::string::npos);
  EXPECT_NE(out.text.find("\"M_required\": 66314.4506782285"), std::string::npos);
  EXPECT_NE(out.text.find("\"quartic_form\""), std::string::npos);
}

TEST(Budget, RegimeViolationExitCode) {
  CommandOutput out = cmd_budget(cfg("scheme = coherent\ncavity_passes = 1\n"));
  EXPECT_EQ(out.exit_code, kExitRegime);
  EXPECT_NE(out.text.find("\"valid_regime\": false"), std::string::npos);
}

TEST(Budget, NoonTargetPhotonNumber) {
  CommandOutput out = cmd_budget(cfg("scheme = noon\nfidelity_target = 0.999\n"));
  EXPECT_NE(out.text.find("\"N_required\": 355305.758"), std::string::npos);
}

TEST(Entangle, ExhaustiveGoldenAndNormalization) {
  CommandOutput out = cmd_entangle(cfg("scheme = tf\nn_photons = 3\ntheta = 0.2\n"));
  expect_golden("entangle_tf3.json", out.text);
  EXPECT_NE(out.text.find("\"total_probability\": 1"), std::string::npos);
}

TEST(Entangle, NoonAtQuarterPeriodReportsUnitNullFidelity) {
  CommandOutput out = cmd_entangle(cfg("scheme = noon\nn_photons = 6\n"));
  EXPECT_NE(out.text.find("\"f_nul\": 1,"), std::string::npos);
}

TEST(Entangle, SeededRunsAreByteIdentical) {
  RunConfig c = cfg("scheme = coherent\nn_photons = 30\nmode = sampled\nseed = 12\n");
  EXPECT_EQ(cmd_entangle(c).text, cmd_entangle(c).text);
  RunConfig d = cfg("scheme = coherent\nn_photons = 30\nmode = sampled\nseed = 13\n");
  EXPECT_NE(cmd_entangle(c).text, cmd_entangle(d).text);
}

TEST(Protocol, GoldenTranscript) {
  expect_golden("protocol_teleport.json",
                cmd_protocol("teleport", cfg("scheme = noon\nn_photons = 2\nsource = 0.6,0.8\n")).text);
}

TEST(Protocol, BatchReportsMeanAndMin) {
  CommandOutput out =
      cmd_protocol("teleport", cfg("scheme = noon\nn_photons = 4\ntrials = 20\nseed = 1\n"));
  EXPECT_NE(out.text.find("\"mean_fidelity\""), std::string::npos);
  EXPECT_NE(out.text.find("\"min_fidelity\""), std::string::npos);
  EXPECT_THROW(cmd_protocol("teleport", cfg("trials = 3\n")), ConfigError);
  EXPECT_THROW(cmd_protocol("dance", cfg("")), ConfigError);
}

TEST(Protocol, SwapProductInputIsPerfect) {
  CommandOutput out = cmd_protocol("swap", cfg("c00 = 1\nc11 = 0\n"));
  EXPECT_NE(out.text.find("\"average_fidelity\": 1,"), std::string::npos);
}

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(3.0), "3");
}

}  // namespace
}  // namespace qil
