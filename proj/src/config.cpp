#include "kqet/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kqet/error.hpp"

namespace kqet {

using nlohmann::json;

double MinimalGrid::value(int i) const noexcept {
  if (i <= 0) return lo;
  if (i >= steps - 1) return hi;
  return lo * std::pow(hi / lo, static_cast<double>(i) / (steps - 1));
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (auto name : known) ok = ok || k == name;
    if (!ok) fail(where + k, "unknown key");
  }
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(key, "must be finite");
  return d;
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) fail(key, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) fail(key, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

GridAxis parse_axis_obj(const json& v, const std::string& key) {
  if (!v.is_object()) fail(key, "expected an object");
  reject_unknown(v, {"name", "lo", "hi", "steps"}, key + ".");
  GridAxis a;
  if (!v.contains("name")) fail(key + ".name", "required");
  try {
    a.param = parse_param(get_string(v.at("name"), key + ".name"));
  } catch (const StructuralError& e) {
    fail(key + ".name", e.what());
  }
  if (!v.contains("lo") || !v.contains("hi") || !v.contains("steps")) {
    fail(key, "axis needs lo, hi and steps");
  }
  a.lo = get_number(v.at("lo"), key + ".lo");
  a.hi = get_number(v.at("hi"), key + ".hi");
  a.steps = get_int(v.at("steps"), key + ".steps");
  if (a.steps < 2) fail(key + ".steps", "must be >= 2");
  if (!(a.lo < a.hi)) fail(key, "needs lo < hi");
  return a;
}

json axis_json(const GridAxis& a) {
  return {{"name", std::string(param_name(a.param))},
          {"lo", a.lo},
          {"hi", a.hi},
          {"steps", a.steps}};
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json doc;
  bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (!blank) {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      const auto [line, col] = line_column(text, e.byte);
      throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                        ": parse error: " + e.what());
    }
  } else {
    doc = json::object();
  }
  if (!doc.is_object()) throw ConfigError(origin + ": top level must be an object");

  reject_unknown(doc,
                 {"N", "J", "Delta", "Jk", "B", "coupled_site", "n_A", "n_B", "sigma_A",
                  "sigma_B", "include_impurity_bulk_bond", "cut", "sweep", "minimal", "output"},
                 "");

  RunConfig c;
  ModelParams& m = c.model;
  for (const auto& [k, v] : doc.items()) {
    if (k == "N") m.num_sites = get_int(v, k);
    else if (k == "J") m.j = get_number(v, k);
    else if (k == "Delta") m.delta = get_number(v, k);
    else if (k == "Jk") m.jk = get_number(v, k);
    else if (k == "B") m.b = get_number(v, k);
    else if (k == "coupled_site") m.coupled_site = get_int(v, k);
    else if (k == "n_A") m.n_a = get_int(v, k);
    else if (k == "n_B") m.n_b = get_int(v, k);
    else if (k == "sigma_A" || k == "sigma_B") {
      Axis a{};
      try {
        a = parse_axis(get_string(v, k));
      } catch (const StructuralError& e) {
        fail(k, e.what());
      }
      (k == "sigma_A" ? m.sigma_a : m.sigma_b) = a;
    } else if (k == "include_impurity_bulk_bond") {
      m.include_impurity_bulk_bond = get_bool(v, k);
    } else if (k == "cut") {
      c.cut = get_int(v, k);
    } else {
      continue;
    }
    c.present.insert(k);
  }

  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    if (!s.is_object()) fail("sweep", "expected an object");
    reject_unknown(s, {"axis1", "axis2", "outputs", "emit", "workers"}, "sweep.");
    if (s.contains("axis1")) c.sweep.axis1 = parse_axis_obj(s.at("axis1"), "sweep.axis1");
    if (s.contains("axis2")) {
      if (s.at("axis2").is_null()) {
        c.sweep.axis2.reset();
      } else {
        c.sweep.axis2 = parse_axis_obj(s.at("axis2"), "sweep.axis2");
      }
    }
    if (s.contains("outputs")) {
      const json& o = s.at("outputs");
      if (!o.is_array()) fail("sweep.outputs", "expected an array of column names");
      c.sweep.outputs.clear();
      for (const auto& e : o) {
        const std::string name = get_string(e, "sweep.outputs");
        try {
          column_value(SweepRow{}, name);
        } catch (const StructuralError& err) {
          fail("sweep.outputs", err.what());
        }
        c.sweep.outputs.push_back(name);
      }
    }
    if (s.contains("emit")) {
      const json& e = s.at("emit");
      if (!e.is_array()) fail("sweep.emit", "expected an array");
      c.sweep.emit_csv = c.sweep.emit_svg = false;
      for (const auto& x : e) {
        const std::string fmt = get_string(x, "sweep.emit");
        if (fmt == "csv") c.sweep.emit_csv = true;
        else if (fmt == "svg") c.sweep.emit_svg = true;
        else fail("sweep.emit", "unknown format '" + fmt + "'");
      }
    }
    if (s.contains("workers")) {
      c.sweep.workers = get_int(s.at("workers"), "sweep.workers");
      if (c.sweep.workers < 0) fail("sweep.workers", "must be >= 0");
    }
    if (c.sweep.axis2 && c.sweep.axis2->param == c.sweep.axis1.param) {
      fail("sweep.axis2.name", "same parameter as sweep.axis1");
    }
  }

  if (doc.contains("minimal")) {
    const json& s = doc.at("minimal");
    if (!s.is_object()) fail("minimal", "expected an object");
    reject_unknown(s, {"lo", "hi", "steps"}, "minimal.");
    if (s.contains("lo")) c.minimal.lo = get_number(s.at("lo"), "minimal.lo");
    if (s.contains("hi")) c.minimal.hi = get_number(s.at("hi"), "minimal.hi");
    if (s.contains("steps")) c.minimal.steps = get_int(s.at("steps"), "minimal.steps");
    if (!(c.minimal.lo > 0.0) || !(c.minimal.lo < c.minimal.hi)) {
      fail("minimal", "needs 0 < lo < hi");
    }
    if (c.minimal.steps < 2) fail("minimal.steps", "must be >= 2");
  }

  if (doc.contains("output")) {
    const json& s = doc.at("output");
    if (!s.is_object()) fail("output", "expected an object");
    reject_unknown(s, {"out", "svg_prefix"}, "output.");
    if (s.contains("out")) c.out_path = get_string(s.at("out"), "output.out");
    if (s.contains("svg_prefix")) c.svg_prefix = get_string(s.at("svg_prefix"), "output.svg_prefix");
  }

  // Explicitly given sites must fit the chain.
  std::string bad;
  const auto check_site = [&](const char* key, int v, int lo) {
    if (c.present.count(key) && (v < lo || v > m.num_sites)) {
      if (!bad.empty()) bad += "; ";
      bad += std::string("config key '") + key + "': " + std::to_string(v) + " outside [" +
             std::to_string(lo) + ", N=" + std::to_string(m.num_sites) + "]";
    }
  };
  check_site("n_A", m.n_a, 2);
  check_site("n_B", m.n_b, 2);
  check_site("coupled_site", m.coupled_site, 2);
  if (c.present.count("cut") && (c.cut < 0 || c.cut > m.num_sites - 1)) {
    if (!bad.empty()) bad += "; ";
    bad += "config key 'cut': " + std::to_string(c.cut) + " outside [0, N-1]";
  }
  if (!bad.empty()) throw ConfigError(bad);
  try {
    validate_hamiltonian(m);
  } catch (const StructuralError& e) {
    throw ConfigError(std::string("invalid model parameters: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string serialize_config(const RunConfig& c) {
  const ModelParams& m = c.model;
  json doc = {
      {"N", m.num_sites},
      {"J", m.j},
      {"Delta", m.delta},
      {"Jk", m.jk},
      {"B", m.b},
      {"coupled_site", m.coupled_site},
      {"n_A", m.n_a},
      {"n_B", m.n_b},
      {"sigma_A", std::string(1, axis_char(m.sigma_a))},
      {"sigma_B", std::string(1, axis_char(m.sigma_b))},
      {"include_impurity_bulk_bond", m.include_impurity_bulk_bond},
      {"cut", c.cut},
  };
  json emit = json::array();
  if (c.sweep.emit_csv) emit.push_back("csv");
  if (c.sweep.emit_svg) emit.push_back("svg");
  doc["sweep"] = {{"axis1", axis_json(c.sweep.axis1)},
                  {"axis2", c.sweep.axis2 ? axis_json(*c.sweep.axis2) : json(nullptr)},
                  {"outputs", c.sweep.outputs},
                  {"emit", emit},
                  {"workers", c.sweep.workers}};
  doc["minimal"] = {{"lo", c.minimal.lo}, {"hi", c.minimal.hi}, {"steps", c.minimal.steps}};
  doc["output"] = {{"out", c.out_path}, {"svg_prefix", c.svg_prefix}};
  return doc.dump(2) + "\n";
}

}  // namespace kqet
