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


#include "kvbf/app/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

namespace kvbf::app {

namespace {

const std::map<std::string, std::set<std::string>, std::less<>> kKnownKeys = {
    {"model",
     {"rho", "nu", "kappa", "darcy", "forchheimer", "darcy_matrix", "darcy_channel",
      "forchheimer_matrix", "forchheimer_channel"}},
    {"time", {"dt", "final_time"}},
    {"mesh", {"levels"}},
    {"newton", {"tol", "max_iterations"}},
    {"initial", {"mode"}},
    {"output", {"directory", "vtk"}},
    {"sweep", {"kappa"}},
    {"channel", {"inflow", "rectangles"}},
};

[[noreturn]] void fail(std::string_view key, std::string_view what) {
  throw ConfigError("config: " + std::string(key) + ": " + std::string(what));
}

double get_number(const toml::node& node, std::string_view key) {
  if (const auto v = node.value<double>(); v && node.is_number()) return *v;
  fail(key, "expected a number");
}

int get_integer(const toml::node& node, std::string_view key) {
  const auto v = node.value<std::int64_t>();
  if (!node.is_integer() || !v) fail(key, "expected an integer");
  if (*v < -1'000'000'000 || *v > 1'000'000'000) fail(key, "integer out of range");
  return static_cast<int>(*v);
}

std::string get_string(const toml::node& node, std::string_view key) {
  const auto v = node.value<std::string>();
  if (!node.is_string() || !v) fail(key, "expected a string");
  return *v;
}

const toml::array& get_array(const toml::node& node, std::string_view key) {
  const toml::array* a = node.as_array();
  if (a == nullptr) fail(key, "expected an array");
  return *a;
}

std::vector<double> get_number_list(const toml::node& node, std::string_view key) {
  std::vector<double> out;
  for (const toml::node& e : get_array(node, key)) out.push_back(get_number(e, key));
  return out;
}

// Shortest text that reads back to the same double.
std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  std::string s(buf.data(), res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string format_list(const std::vector<double>& values) {
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += ", ";
    s += format_double(values[i]);
  }
  return s + "]";
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void apply_model(const toml::table& t, ModelParams& m) {
  for (auto&& [k, node] : t) {
    const std::string key = "model." + std::string(k.str());
    const double v = get_number(node, key);
    const std::string_view name = k.str();
    if (name == "rho") m.rho = v;
    else if (name == "nu") m.nu = v;
    else if (name == "kappa") m.kappa = v;
    else if (name == "darcy") m.darcy = RegionValues::uniform(v);
    else if (name == "forchheimer") m.forchheimer = RegionValues::uniform(v);
  }
  // Region-specific keys override the shorthand regardless of order.
  for (auto&& [k, node] : t) {
    const std::string key = "model." + std::string(k.str());
    const std::string_view name = k.str();
    if (name == "darcy_matrix") m.darcy.matrix = get_number(node, key);
    else if (name == "darcy_channel") m.darcy.channel = get_number(node, key);
    else if (name == "forchheimer_matrix") m.forchheimer.matrix = get_number(node, key);
    else if (name == "forchheimer_channel") m.forchheimer.channel = get_number(node, key);
  }
}

bool same(const RegionValues& a, const RegionValues& b) {
  return a.matrix == b.matrix && a.channel == b.channel;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Mms2d: return "mms2d";
    case ScenarioKind::Channel: return "channel";
  }
  return "unknown";
}

void RunConfig::validate() const {
  model.validate();
  if (levels.empty()) throw ConfigError("config: mesh.levels: at least one level is required");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw ConfigError("config: mesh.levels: levels must be positive");
    if (i > 0 && levels[i] <= levels[i - 1]) {
      throw ConfigError("config: mesh.levels: levels must be strictly increasing");
    }
  }
  (void)time_grid();
  if (!(newton_tol > 0.0)) throw ConfigError("config: newton.tol: must be positive");
  if (newton_max_iterations < 1) {
    throw ConfigError("config: newton.max_iterations: must be at least 1");
  }
  for (double k : kappa_sweep) {
    if (!(k > 0.0)) throw ConfigError("config: sweep.kappa: values must be positive");
  }
  for (const Rectangle& r : channel_rectangles) {
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) {
      throw ConfigError("config: channel.rectangles: need x0 < x1 and y0 < y1");
    }
  }
  if (output_directory.empty()) throw ConfigError("config: output.directory: must not be empty");
}

NewtonOptions RunConfig::newton() const {
  NewtonOptions o;
  o.tol = newton_tol;
  o.max_iterations = newton_max_iterations;
  return o;
}

ChannelNetwork RunConfig::channel_network() const {
  if (channel_rectangles.empty()) return ChannelNetwork::default_network();
  return ChannelNetwork{channel_rectangles};
}

bool RunConfig::operator==(const RunConfig& o) const {
  auto same_rects = [](const std::vector<Rectangle>& a, const std::vector<Rectangle>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].x0 != b[i].x0 || a[i].y0 != b[i].y0 || a[i].x1 != b[i].x1 || a[i].y1 != b[i].y1) {
        return false;
      }
    }
    return true;
  };
  return scenario == o.scenario && element == o.element && model.rho == o.model.rho &&
         model.nu == o.model.nu && model.kappa == o.model.kappa &&
         same(model.darcy, o.model.darcy) && same(model.forchheimer, o.model.forchheimer) &&
         dt == o.dt && final_time == o.final_time && levels == o.levels &&
         newton_tol == o.newton_tol && newton_max_iterations == o.newton_max_iterations &&
         initial_mode == o.initial_mode && output_directory == o.output_directory &&
         write_vtk == o.write_vtk && kappa_sweep == o.kappa_sweep && inflow == o.inflow &&
         same_rects(channel_rectangles, o.channel_rectangles);
}

RunConfig parse_config(std::string_view text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config: line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }

  RunConfig c;
  for (auto&& [k, node] : root) {
    const std::string_view name = k.str();
    if (name == "scenario") {
      const std::string v = get_string(node, name);
      if (v == "mms2d") c.scenario = ScenarioKind::Mms2d;
      else if (v == "channel") c.scenario = ScenarioKind::Channel;
      else fail(name, "unknown scenario '" + v + "'");
      continue;
    }
    if (name == "element") {
      const std::string v = get_string(node, name);
      if (v == "taylor_hood") c.element = ElementFamily::TaylorHood;
      else if (v == "mini") c.element = ElementFamily::Mini;
      else fail(name, "unknown element '" + v + "'");
      continue;
    }
    const auto known = kKnownKeys.find(name);
    if (known == kKnownKeys.end()) fail(name, "unknown key");
    const toml::table* section = node.as_table();
    if (section == nullptr) fail(name, "expected a section");
    for (auto&& [sk, sv] : *section) {
      if (!known->second.contains(std::string(sk.str()))) {
        fail(std::string(name) + "." + std::string(sk.str()), "unknown key");
      }
    }
  }

  if (const toml::table* t = root["model"].as_table()) apply_model(*t, c.model);
  if (const toml::table* t = root["time"].as_table()) {
    if (const toml::node* n = t->get("dt")) c.dt = get_number(*n, "time.dt");
    if (const toml::node* n = t->get("final_time")) c.final_time = get_number(*n, "time.final_time");
  }
  if (const toml::table* t = root["mesh"].as_table()) {
    if (const toml::node* n = t->get("levels")) {
      c.levels.clear();
      for (const toml::node& e : get_array(*n, "mesh.levels")) {
        c.levels.push_back(get_integer(e, "mesh.levels"));
      }
    }
  }
  if (const toml::table* t = root["newton"].as_table()) {
    if (const toml::node* n = t->get("tol")) c.newton_tol = get_number(*n, "newton.tol");
    if (const toml::node* n = t->get("max_iterations")) {
      c.newton_max_iterations = get_integer(*n, "newton.max_iterations");
    }
  }
  if (const toml::table* t = root["initial"].as_table()) {
    if (const toml::node* n = t->get("mode")) {
      const std::string v = get_string(*n, "initial.mode");
      if (v == "interpolate") c.initial_mode = InitialMode::Interpolate;
      else if (v == "discrete_problem") c.initial_mode = InitialMode::DiscreteProblem;
      else fail("initial.mode", "unknown mode '" + v + "'");
    }
  }
  if (const toml::table* t = root["output"].as_table()) {
    if (const toml::node* n = t->get("directory")) {
      c.output_directory = get_string(*n, "output.directory");
    }
    if (const toml::node* n = t->get("vtk")) {
      if (!n->is_boolean()) fail("output.vtk", "expected true or false");
      c.write_vtk = n->value<bool>().value_or(true);
    }
  }
  if (const toml::table* t = root["sweep"].as_table()) {
    if (const toml::node* n = t->get("kappa")) c.kappa_sweep = get_number_list(*n, "sweep.kappa");
  }
  if (const toml::table* t = root["channel"].as_table()) {
    if (const toml::node* n = t->get("inflow")) c.inflow = get_number(*n, "channel.inflow");
    if (const toml::node* n = t->get("rectangles")) {
      for (const toml::node& e : get_array(*n, "channel.rectangles")) {
        const std::vector<double> r = get_number_list(e, "channel.rectangles");
        if (r.size() != 4) fail("channel.rectangles", "each rectangle is [x0, y0, x1, y1]");
        c.channel_rectangles.push_back({r[0], r[1], r[2], r[3]});
      }
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "scenario = " << quote(to_string(c.scenario)) << "\n";
  out << "element = " << quote(to_string(c.element)) << "\n";
  out << "\n[model]\n";
  out << "rho = " << format_double(c.model.rho) << "\n";
  out << "nu = " << format_double(c.model.nu) << "\n";
  out << "kappa = " << format_double(c.model.kappa) << "\n";
  out << "darcy_matrix = " << format_double(c.model.darcy.matrix) << "\n";
  out << "darcy_channel = " << format_double(c.model.darcy.channel) << "\n";
  out << "forchheimer_matrix = " << format_double(c.model.forchheimer.matrix) << "\n";
  out << "forchheimer_channel = " << format_double(c.model.forchheimer.channel) << "\n";
  out << "\n[time]\n";
  out << "dt = " << format_double(c.dt) << "\n";
  out << "final_time = " << format_double(c.final_time) << "\n";
  out << "\n[mesh]\nlevels = [";
  for (std::size_t i = 0; i < c.levels.size(); ++i) out << (i > 0 ? ", " : "") << c.levels[i];
  out << "]\n";
  out << "\n[newton]\n";
  out << "tol = " << format_double(c.newton_tol) << "\n";
  out << "max_iterations = " << c.newton_max_iterations << "\n";
  out << "\n[initial]\nmode = " << quote(to_string(c.initial_mode)) << "\n";
  out << "\n[output]\n";
  out << "directory = " << quote(c.output_directory) << "\n";
  out << "vtk = " << (c.write_vtk ? "true" : "false") << "\n";
  out << "\n[sweep]\nkappa = " << format_list(c.kappa_sweep) << "\n";
  out << "\n[channel]\n";
  out << "inflow = " << format_double(c.inflow) << "\n";
  out << "rectangles = [";
  for (std::size_t i = 0; i < c.channel_rectangles.size(); ++i) {
    const Rectangle& r = c.channel_rectangles[i];
    out << (i > 0 ? ", " : "") << format_list({r.x0, r.y0, r.x1, r.y1});
  }
  out << "]\n";
  return out.str();
}

}  // namespace kvbf::app
