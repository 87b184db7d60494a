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


// Acceptance suite. Each criterion prints its measurements, then exactly one
// line "criterion N: PASS|FAIL <summary>". Exit code 0 iff the selected
// criteria pass.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kvbf/app/checks.hpp"
#include "kvbf/app/config.hpp"
#include "kvbf/app/drivers.hpp"
#include "kvbf/app/output.hpp"

namespace {

namespace fs = std::filesystem;
using kvbf::ErrorReport;
using kvbf::app::RunConfig;

struct Outcome {
  bool passed = true;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    std::cout << "  " << (ok ? "ok   " : "FAIL ") << what << "\n";
    if (!ok) {
      passed = false;
      failures.push_back(what);
    }
  }
};

std::string fmt(const char* f, double a) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), f, a);
  return buf.data();
}

std::string range_text(const std::vector<double>& values, const char* f = "%.3f") {
  std::string s;
  for (double v : values) s += (s.empty() ? "" : " ") + fmt(f, v);
  return s;
}

RunConfig load(const fs::path& dir, const char* name) {
  return kvbf::app::load_config(dir / name);
}

kvbf::app::RunOptions options() { return {kvbf::app::threads_from_environment(), &std::cout}; }

// Rates over the last two ladder intervals for one error column.
std::vector<double> last_two_rates(const std::vector<ErrorReport>& r,
                                   double ErrorReport::*column) {
  const std::size_t n = r.size();
  return {kvbf::observed_rate(r[n - 3].*column, r[n - 2].*column, r[n - 3].h, r[n - 2].h),
          kvbf::observed_rate(r[n - 2].*column, r[n - 1].*column, r[n - 2].h, r[n - 1].h)};
}

void expect_rates(Outcome& out, const std::vector<ErrorReport>& r, double ErrorReport::*column,
                  const char* name, double lo, double hi) {
  const std::vector<double> rates = last_two_rates(r, column);
  const bool ok = std::all_of(rates.begin(), rates.end(),
                              [&](double v) { return v >= lo && v <= hi; });
  std::string bounds = std::isinf(hi) ? ">= " + fmt("%.2f", lo)
                                      : "in [" + fmt("%.2f", lo) + ", " + fmt("%.2f", hi) + "]";
  out.expect(ok, std::string(name) + " rates " + range_text(rates) + " " + bounds);
}

std::vector<ErrorReport> ladder(const fs::path& configs, const char* name) {
  const RunConfig c = load(configs, name);
  auto reports = kvbf::app::run_convergence(c, options());
  std::cout << kvbf::app::table_text(reports);
  return reports;
}

// Taylor-Hood rows of the reference convergence table (levels 1-5):
// eu_linf_h1, eu_l2_l2, ew_l2_l2, ep_l2_l2.
constexpr std::array<std::array<double, 4>, 5> kReferenceTaylorHood = {{
    {1.95e-01, 2.03e-04, 6.37e-03, 3.76e+00},
    {3.57e-02, 1.80e-05, 1.18e-03, 5.15e-01},
    {8.69e-03, 2.17e-06, 2.90e-04, 9.16e-02},
    {2.00e-03, 2.51e-07, 6.76e-05, 1.42e-02},
    {5.21e-04, 3.29e-08, 1.78e-05, 4.03e-03},
}};

Outcome criterion1(const fs::path& configs) {
  Outcome out;
  const auto r = ladder(configs, "example1_th.toml");
  if (r.size() != 5) {
    out.expect(false, "ladder has 5 levels");
    return out;
  }
  expect_rates(out, r, &ErrorReport::eu_linf_h1, "eu_linf_h1", 1.8, 2.3);
  expect_rates(out, r, &ErrorReport::ew_l2_l2, "ew_l2_l2", 1.8, 2.3);
  expect_rates(out, r, &ErrorReport::ep_l2_l2, "ep_l2_l2", 1.6, 2.8);
  expect_rates(out, r, &ErrorReport::eu_l2_l2, "eu_l2_l2", 2.6, std::numeric_limits<double>::infinity());
  const std::array<const char*, 4> names = {"eu_linf_h1", "eu_l2_l2", "ew_l2_l2", "ep_l2_l2"};
  const std::array<double ErrorReport::*, 4> columns = {
      &ErrorReport::eu_linf_h1, &ErrorReport::eu_l2_l2, &ErrorReport::ew_l2_l2,
      &ErrorReport::ep_l2_l2};
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<double> ratios;
    bool ok = true;
    for (std::size_t i = 0; i < 5; ++i) {
      const double ratio = r[i].*columns[k] / kReferenceTaylorHood[i][k];
      ratios.push_back(ratio);
      ok = ok && ratio >= 1.0 / 3.0 && ratio <= 3.0;
    }
    out.expect(ok, std::string(names[k]) + " error / reference per level " + range_text(ratios, "%.3g") +
                       " within factor 3");
  }
  return out;
}

Outcome criterion2(const fs::path& configs) {
  Outcome out;
  const auto r = ladder(configs, "example1_mini.toml");
  if (r.size() < 3) {
    out.expect(false, "ladder has at least 3 levels");
    return out;
  }
  expect_rates(out, r, &ErrorReport::eu_linf_h1, "eu_linf_h1", 0.85, 1.2);
  expect_rates(out, r, &ErrorReport::eu_l2_l2, "eu_l2_l2", 1.8, 2.3);
  expect_rates(out, r, &ErrorReport::ep_l2_l2, "ep_l2_l2", 0.8, 1.3);
  return out;
}

Outcome criterion3(const fs::path& configs) {
  Outcome out;
  for (const char* name : {"example1_th.toml", "example1_mini.toml"}) {
    const auto r = ladder(configs, name);
    double worst = 0.0;
    for (const ErrorReport& e : r) worst = std::max(worst, e.iterations);
    out.expect(worst <= 3.0, std::string(name) + " max average Newton iterations per step " +
                                 fmt("%.2f", worst) + " <= 3");
  }
  return out;
}

Outcome criterion4(const fs::path& configs) {
  Outcome out;
  RunConfig c = load(configs, "example1_th.toml");
  c.levels = {64};
  c.final_time = 0.5;
  std::vector<double> dts = {1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80};
  std::vector<double> errors;
  for (double dt : dts) {
    c.dt = dt;
    errors.push_back(kvbf::app::run_convergence(c, options()).front().eu_l2_l2);
  }
  std::vector<double> rates;
  for (std::size_t i = 1; i < dts.size(); ++i) {
    rates.push_back(kvbf::observed_rate(errors[i - 1], errors[i], dts[i - 1], dts[i]));
  }
  std::cout << "  dt errors:";
  for (double e : errors) std::cout << " " << fmt("%.3e", e);
  std::cout << "\n  dt rates: " << range_text(rates) << "\n";
  out.expect(rates.back() >= 0.75 && rates.back() <= 1.25,
             "eu_l2_l2 temporal rate (last refinement) " + fmt("%.3f", rates.back()) +
                 " in [0.75, 1.25]");
  return out;
}

Outcome criterion5(const fs::path& configs) {
  Outcome out;
  const RunConfig c = load(configs, "example1_th.toml");
  const auto start = std::chrono::steady_clock::now();
  const auto results = kvbf::app::run_property_checks(c.model, kvbf::app::threads_from_environment());
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& r : results) out.expect(r.passed, r.name + ": " + r.detail);
  out.expect(seconds < 60.0, "suite runtime " + fmt("%.1f", seconds) + " s < 60 s");
  return out;
}

Outcome criterion6(const fs::path& configs, const fs::path& work) {
  Outcome out;
  RunConfig c = load(configs, "example3_sweep.toml");
  c.write_vtk = false;
  const auto results = kvbf::app::simulate(c, work / "example3_sweep", options());
  const auto kappa_one = std::find_if(results.begin(), results.end(),
                                      [](const auto& r) { return r.kappa == 1.0; });
  if (kappa_one == results.end()) {
    out.expect(false, "sweep contains kappa = 1");
    return out;
  }
  const int steps = c.time_grid().steps;
  out.expect(static_cast<int>(kappa_one->speeds.size()) == steps + 1,
             "kappa = 1 run completed " + std::to_string(kappa_one->speeds.size() - 1) + " of " +
                 std::to_string(steps) + " steps");
  const auto& final_speed = kappa_one->speeds.back();
  const double ratio = final_speed.channel / final_speed.matrix;
  out.expect(ratio >= 5.0, "channel/matrix mean speed at T = 1: " + fmt("%.4f", final_speed.channel) +
                               " / " + fmt("%.4f", final_speed.matrix) + " = " +
                               fmt("%.3f", ratio) + " >= 5");
  // Calibrated direction: the channel speed decreases as kappa grows.
  std::vector<std::pair<double, double>> by_kappa;
  for (const auto& r : results) by_kappa.emplace_back(r.kappa, r.speeds.back().channel);
  std::sort(by_kappa.begin(), by_kappa.end());
  bool monotone = true;
  std::string listing;
  for (std::size_t i = 0; i < by_kappa.size(); ++i) {
    listing += (i ? ", " : "") + fmt("%g", by_kappa[i].first) + ": " +
               fmt("%.4f", by_kappa[i].second);
    if (i > 0) monotone = monotone && by_kappa[i].second < by_kappa[i - 1].second;
  }
  out.expect(by_kappa.size() == 5 && monotone,
             "channel mean speed strictly decreasing in kappa (" + listing + ")");
  out.expect(fs::exists(work / "example3_sweep" / "kappa_1" / "timeseries.csv"),
             "timeseries.csv written per sweep run");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kvbf acceptance suite"};
  std::vector<int> criteria;
  std::string configs = KVBF_CONFIG_DIR;
  std::string work = "acceptance_output";
  app.add_option("--criterion", criteria, "Criterion number(s) 1-6; default all")
      ->check(CLI::Range(1, 6));
  app.add_option("--configs", configs, "Directory with the shipped configurations");
  app.add_option("--work", work, "Scratch directory for simulation outputs");
  CLI11_PARSE(app, argc, argv);
  if (criteria.empty()) criteria = {1, 2, 3, 4, 5, 6};

  const std::array<const char*, 6> titles = {
      "spatial convergence, Taylor-Hood", "spatial convergence, MINI", "Newton cost",
      "temporal order",                   "property suite",            "channel network"};
  bool all = true;
  for (int k : criteria) {
    std::cout << "== criterion " << k << ": " << titles[k - 1] << std::endl;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      switch (k) {
        case 1: out = criterion1(configs); break;
        case 2: out = criterion2(configs); break;
        case 3: out = criterion3(configs); break;
        case 4: out = criterion4(configs); break;
        case 5: out = criterion5(configs); break;
        case 6: out = criterion6(configs, work); break;
      }
    } catch (const std::exception& e) {
      out.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string summary = out.passed ? "all checks met" : out.failures.front();
    if (out.failures.size() > 1) summary += " (+" + std::to_string(out.failures.size() - 1) + " more)";
    std::cout << "criterion " << k << ": " << (out.passed ? "PASS" : "FAIL") << " " << summary
              << " [" << fmt("%.1f", seconds) << " s]" << std::endl;
    all = all && out.passed;
  }
  return all ? 0 : 1;
}
