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


#include "kvbf/app/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "kvbf/quadrature.hpp"

namespace kvbf::app {

namespace {

void append_number(std::string& out, double v) {
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

std::string printf_string(const char* fmt, double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), fmt, v);
  return buf.data();
}

std::string format_rate(const std::optional<double>& r) {
  if (!r) return "--";
  if (std::isinf(*r)) return "inf";
  return printf_string("%.3f", *r);
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Error("cannot write " + path.string());
}

std::string vtk_text(const SystemState& state, const Mesh& mesh, const SpaceSet& spaces) {
  const int nv = mesh.n_vertices();
  const int nc = mesh.n_cells();
  if (static_cast<int>(state.u.size()) != spaces.n_u() ||
      static_cast<int>(state.w.size()) != spaces.n_w() ||
      static_cast<int>(state.p.size()) != spaces.n_p()) {
    throw Error("vtk: state does not match the spaces");
  }
  std::string out;
  out.reserve(static_cast<std::size_t>(nv) * 96 + static_cast<std::size_t>(nc) * 24);
  out += "# vtk DataFile Version 3.0\nkvbf t=";
  append_number(out, state.time);
  out += "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out += "POINTS " + std::to_string(nv) + " double\n";
  for (const Point& p : mesh.vertices()) {
    append_number(out, p.x);
    out += ' ';
    append_number(out, p.y);
    out += " 0\n";
  }
  out += "CELLS " + std::to_string(nc) + " " + std::to_string(4 * nc) + "\n";
  for (const Cell& c : mesh.cells()) {
    out += "3 " + std::to_string(c[0]) + " " + std::to_string(c[1]) + " " + std::to_string(c[2]) +
           "\n";
  }
  out += "CELL_TYPES " + std::to_string(nc) + "\n";
  for (int c = 0; c < nc; ++c) out += "5\n";
  out += "CELL_DATA " + std::to_string(nc) + "\nSCALARS region int 1\nLOOKUP_TABLE default\n";
  for (Region r : mesh.cell_regions()) out += r == Region::Channel ? "1\n" : "0\n";

  // Vertices are the first nodes of every space; bubbles vanish there.
  out += "POINT_DATA " + std::to_string(nv) + "\nVECTORS velocity double\n";
  for (int v = 0; v < nv; ++v) {
    append_number(out, state.u[SpaceSet::velocity_dof(v, 0)]);
    out += ' ';
    append_number(out, state.u[SpaceSet::velocity_dof(v, 1)]);
    out += " 0\n";
  }
  out += "SCALARS vorticity double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < nv; ++v) {
    append_number(out, state.w[v]);
    out += '\n';
  }
  out += "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < nv; ++v) {
    append_number(out, state.p[v]);
    out += '\n';
  }
  return out;
}

void write_vtk(const SystemState& state, const Mesh& mesh, const SpaceSet& spaces,
               const std::filesystem::path& path) {
  write_text(path, vtk_text(state, mesh, spaces));
}

std::string table_text(const std::vector<ErrorReport>& reports) {
  std::string out = "dof,h,iter,eu_linf_h1,rate,eu_l2_l2,rate,ew_l2_l2,rate,ep_l2_l2,rate\n";
  std::vector<RateRow> rates(reports.size());
  if (reports.size() >= 2) rates = observed_rates(reports);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const ErrorReport& r = reports[i];
    out += std::to_string(r.dofs) + "," + printf_string("%.3f", r.h) + "," +
           printf_string("%.2f", r.iterations);
    out += "," + printf_string("%.2e", r.eu_linf_h1) + "," + format_rate(rates[i].eu_linf_h1);
    out += "," + printf_string("%.2e", r.eu_l2_l2) + "," + format_rate(rates[i].eu_l2_l2);
    out += "," + printf_string("%.2e", r.ew_l2_l2) + "," + format_rate(rates[i].ew_l2_l2);
    out += "," + printf_string("%.2e", r.ep_l2_l2) + "," + format_rate(rates[i].ep_l2_l2);
    out += "\n";
  }
  return out;
}

void write_table(const std::vector<ErrorReport>& reports, const std::filesystem::path& path) {
  write_text(path, table_text(reports));
}

RegionSpeeds region_mean_speeds(const SystemState& state, const Mesh& mesh,
                                const SpaceSet& spaces) {
  const QuadratureRule& rule = rule_for_degree(6);
  double integral[2] = {0.0, 0.0};
  double area[2] = {0.0, 0.0};
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const int r = mesh.region(c) == Region::Channel ? 0 : 1;
    const CellGeometry g(mesh.cell_vertices(c));
    area[r] += g.area();
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 u = evaluate_velocity(spaces, state.u, c, rule.points[q]);
      integral[r] += rule.weights[q] * g.det * std::hypot(u[0], u[1]);
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {area[0] > 0.0 ? integral[0] / area[0] : nan, area[1] > 0.0 ? integral[1] / area[1] : nan};
}

TimeseriesWriter::TimeseriesWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary) {
  if (!out_) throw Error("cannot write " + path.string());
  out_ << "step,time,iterations,mean_speed_channel,mean_speed_matrix\n" << std::flush;
}

void TimeseriesWriter::row(int step, double time, int iterations, const RegionSpeeds& speeds) {
  const std::string line = std::to_string(step) + "," + printf_string("%.10g", time) + "," +
                           std::to_string(iterations) + "," +
                           printf_string("%.9e", speeds.channel) + "," +
                           printf_string("%.9e", speeds.matrix) + "\n";
  out_ << line << std::flush;
  if (!out_) throw Error("timeseries: write failed");
}

}  // namespace kvbf::app
