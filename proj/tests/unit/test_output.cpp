// Copyright 2026 The kvbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kvbf/app/config.hpp"
#include "kvbf/app/drivers.hpp"
#include "kvbf/app/output.hpp"

namespace kvbf::app {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Lines following `header` up to the next keyword line.
std::vector<std::string> section(const std::string& text, const std::string& header, int count) {
  const auto all = lines(text);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] == header) {
      std::size_t first = i + 1;
      if (first < all.size() && all[first] == "LOOKUP_TABLE default") ++first;
      return {all.begin() + first, all.begin() + first + count};
    }
  }
  return {};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("kvbf_test_" + name);
  fs::remove_all(dir);
  return dir;
}

SystemState zero_state(const SpaceSet& spaces) {
  SystemState s;
  s.u.assign(spaces.n_u(), 0.0);
  s.w.assign(spaces.n_w(), 0.0);
  s.p.assign(spaces.n_p(), 0.0);
  return s;
}

TEST(Vtk, ZeroState) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, 3);
  const SpaceSet spaces(mesh, ElementFamily::TaylorHood);
  const std::string text = vtk_text(zero_state(spaces), mesh, spaces);
  EXPECT_EQ(text.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
  EXPECT_NE(text.find("CELLS 18 72\n"), std::string::npos);
  EXPECT_NE(text.find("CELL_TYPES 18\n"), std::string::npos);
  EXPECT_NE(text.find("POINT_DATA 16\n"), std::string::npos);
  for (const std::string& l : section(text, "VECTORS velocity double", 16)) EXPECT_EQ(l, "0 0 0");
  for (const std::string& l : section(text, "SCALARS vorticity double 1", 16)) EXPECT_EQ(l, "0");
  for (const std::string& l : section(text, "SCALARS pressure double 1", 16)) EXPECT_EQ(l, "0");
}

TEST(Vtk, ConstantVelocityAndNegativeZero) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, 2);
  const SpaceSet spaces(mesh, ElementFamily::Mini);
  SystemState s = zero_state(spaces);
  s.u = interpolate_velocity(spaces, [](Point, double) { return Vec2{1.0, -0.0}; });
  s.p.assign(spaces.n_p(), -0.0);
  const std::string text = vtk_text(s, mesh, spaces);
  for (const std::string& l : section(text, "VECTORS velocity double", 9)) EXPECT_EQ(l, "1 0 0");
  for (const std::string& l : section(text, "SCALARS pressure double 1", 9)) EXPECT_EQ(l, "0");
  EXPECT_EQ(text.find("-0"), std::string::npos);
}

TEST(Vtk, ByteDeterministic) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, 4);
  const SpaceSet spaces(mesh, ElementFamily::TaylorHood);
  SystemState s = zero_state(spaces);
  s.time = 0.1;
  for (std::size_t i = 0; i < s.u.size(); ++i) s.u[i] = std::sin(0.37 * static_cast<double>(i));
  for (std::size_t i = 0; i < s.p.size(); ++i) s.p[i] = 1.0 / (1.0 + static_cast<double>(i));
  const fs::path dir = scratch_dir("vtk");
  fs::create_directories(dir);
  write_vtk(s, mesh, spaces, dir / "a.vtk");
  write_vtk(s, mesh, spaces, dir / "b.vtk");
  EXPECT_EQ(read_file(dir / "a.vtk"), read_file(dir / "b.vtk"));
  EXPECT_EQ(read_file(dir / "a.vtk"), vtk_text(s, mesh, spaces));
  EXPECT_THROW(write_vtk(s, mesh, spaces, dir / "missing" / "c.vtk"), Error);
  fs::remove_all(dir);
}

TEST(Table, SingleLevelHasNoRates) {
  ErrorReport r;
  r.dofs = 212;
  r.h = std::sqrt(2.0) / 4;
  r.iterations = 2.0;
  r.eu_linf_h1 = 0.187;
  r.eu_l2_l2 = 1.92e-4;
  r.ew_l2_l2 = 5.52e-3;
  r.ep_l2_l2 = 6.07e-4;
  EXPECT_EQ(table_text({r}),
            "dof,h,iter,eu_linf_h1,rate,eu_l2_l2,rate,ew_l2_l2,rate,ep_l2_l2,rate\n"
            "212,0.354,2.00,1.87e-01,--,1.92e-04,--,5.52e-03,--,6.07e-04,--\n");
}

TEST(Table, QuarteredErrorsGiveRateTwo) {
  ErrorReport a, b;
  a.h = 0.2;
  b.h = 0.1;
  a.eu_linf_h1 = a.eu_l2_l2 = a.ew_l2_l2 = a.ep_l2_l2 = 0.4;
  b.eu_linf_h1 = b.eu_l2_l2 = b.ew_l2_l2 = 0.1;
  b.ep_l2_l2 = 0.0;
  const auto rows = lines(table_text({a, b}));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[2], "0,0.100,0.00,1.00e-01,2.000,1.00e-01,2.000,1.00e-01,2.000,0.00e+00,inf");
}

TEST(RegionSpeeds, ConstantField) {
  const Mesh mesh = tag_channel(build_structured({-1, -1, 1, 1}, 10),
                                [](Point p) { return std::abs(p.y) < 0.2; });
  const SpaceSet spaces(mesh, ElementFamily::TaylorHood);
  SystemState s = zero_state(spaces);
  s.u = interpolate_velocity(spaces, [](Point, double) { return Vec2{0.6, -0.8}; });
  const RegionSpeeds r = region_mean_speeds(s, mesh, spaces);
  EXPECT_NEAR(r.channel, 1.0, 1e-12);
  EXPECT_NEAR(r.matrix, 1.0, 1e-12);
  const Mesh plain = build_structured({0, 0, 1, 1}, 2);
  const SpaceSet plain_spaces(plain, ElementFamily::Mini);
  EXPECT_TRUE(std::isnan(region_mean_speeds(zero_state(plain_spaces), plain, plain_spaces).channel));
}

RunConfig small_config() {
  return parse_config(R"(
[time]
dt = 0.001
final_time = 0.003
[mesh]
levels = [2, 4]
)");
}

TEST(Drivers, ConvergenceWritesTable) {
  const fs::path dir = scratch_dir("convergence");
  const auto reports = convergence(small_config(), dir, {});
  ASSERT_EQ(reports.size(), 2u);
  const auto rows = lines(read_file(dir / "table.csv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].substr(0, 9), "68,0.707,");
  EXPECT_LT(reports[1].eu_linf_h1, reports[0].eu_linf_h1);
  fs::remove_all(dir);
}

TEST(Drivers, SimulationOutputsAreDeterministic) {
  const fs::path a = scratch_dir("simulate_a");
  const fs::path b = scratch_dir("simulate_b");
  const RunConfig c = small_config();
  const auto results = simulate(c, a, {});
  simulate(c, b, RunOptions{2, nullptr});
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].speeds.size(), 4u);
  for (const char* name : {"state_0000.vtk", "state_0001.vtk", "state_0002.vtk", "state_0003.vtk",
                           "timeseries.csv"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(read_file(a / name), read_file(b / name)) << name;
  }
  EXPECT_FALSE(fs::exists(a / "state_0004.vtk"));
  const auto rows = lines(read_file(a / "timeseries.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "step,time,iterations,mean_speed_channel,mean_speed_matrix");
  EXPECT_EQ(rows[1].substr(0, 6), "0,0,0,");
  EXPECT_EQ(rows[2].substr(0, 10), "1,0.001,2,");
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Drivers, SweepWritesOneRunPerKappa) {
  RunConfig c = parse_config(R"(
scenario = "channel"
element = "mini"
[model]
darcy_matrix = 1000
forchheimer_matrix = 1
[time]
dt = 0.01
final_time = 0.02
[mesh]
levels = [8]
[output]
vtk = false
[sweep]
kappa = [2, 0.5]
)");
  const fs::path dir = scratch_dir("sweep");
  const auto results = simulate(c, dir, {});
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(results[0].kappa, 2.0);
  EXPECT_TRUE(fs::exists(dir / "kappa_2" / "timeseries.csv"));
  EXPECT_TRUE(fs::exists(dir / "kappa_0.5" / "timeseries.csv"));
  EXPECT_FALSE(fs::exists(dir / "kappa_2" / "state_0000.vtk"));
  const auto rows = lines(read_file(dir / "sweep.csv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "kappa,mean_speed_channel,mean_speed_matrix,average_iterations");
  EXPECT_EQ(rows[1].substr(0, 2), "2,");
  EXPECT_GT(results[0].speeds.back().channel, 0.0);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace kvbf::app
