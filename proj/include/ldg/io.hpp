#pragma once

// Text formats: key = value run configurations, CSV tables and JSON reports.

#include <array>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ldg/error.hpp"
#include "ldg/fields.hpp"
#include "ldg/hedgehog_ode.hpp"
#include "ldg/material.hpp"

namespace ldg {

using Json = nlohmann::ordered_json;

/// 17 significant digits, '.' as decimal separator.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void write_json_string(std::ostream& os, const std::string& s) {
  os << Json(s).dump();
}

inline void write_json(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        write_json_string(os, it.key());
        os << ": ";
        write_json(os, it.value(), indent, depth + 1);
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], indent, depth + 1);
      }
      os << "\n" << close_pad << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        os << format_double(v);
      else
        os << "null";
      return;
    }
    default: os << j.dump();
  }
}

}  // namespace detail

/// Serializes JSON with every floating-point number printed to 17 significant digits.
inline std::string dump_json(const Json& j) {
  std::ostringstream os;
  detail::write_json(os, j, 2, 0);
  os << "\n";
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parsed key = value configuration. Lines starting with '#' and blank lines are ignored.
class RunConfig {
 public:
  static RunConfig parse(const std::string& text, const std::string& source = "config") {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
      c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
  }

  static RunConfig load(const std::string& path) { return parse(read_text_file(path), path); }

  /// Applies a "key=value" override.
  void apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form key=value");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
  }

  void set(const std::string& key, const std::string& value) {
    if (key.empty()) throw ConfigError("empty configuration key");
    if (!known_keys().count(key)) throw ConfigError("unknown configuration key '" + key + "'");
    if (value.empty()) throw ConfigError("configuration key '" + key + "' has no value");
    values_[key] = value;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  /// Copy with `defaults` filled in for missing keys.
  RunConfig with_defaults(const std::vector<std::pair<std::string, std::string>>& defaults) const {
    RunConfig c = *this;
    for (const auto& [k, v] : defaults)
      if (!c.has(k)) c.set(k, v);
    return c;
  }

  std::string text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing configuration key '" + key + "'");
    return it->second;
  }

  double real(const std::string& key) const { return parse_real(key, text(key)); }

  long integer(const std::string& key) const {
    const double v = real(key);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ConfigError("configuration key '" + key + "' must be an integer");
    return static_cast<long>(v);
  }

  bool material_block() const {
    return has("a2") || has("b2") || has("c2") || has("L") || has("R0");
  }
  bool reduced_block() const { return has("t") || has("R"); }

  /// Checks that numeric keys are finite and that exactly one parameter block is complete.
  void validate() const {
    for (const auto& [k, v] : values_)
      if (numeric_keys().count(k)) parse_real(k, v);
    const bool mat = material_block(), red = reduced_block();
    if (mat && red) throw ConfigError("give either the material block (a2, b2, c2, L, R0) or the reduced block (t, R), not both");
    if (!mat && !red) throw ConfigError("missing parameters: give a2, b2, c2, L, R0 or t, R");
    if (mat) {
      for (const char* k : {"a2", "b2", "c2", "L", "R0"})
        if (!has(k)) throw ConfigError(std::string("material block is missing '") + k + "'");
    } else {
      for (const char* k : {"t", "R"})
        if (!has(k)) throw ConfigError(std::string("reduced block is missing '") + k + "'");
    }
  }

  ReducedParams reduced_params() const {
    validate();
    try {
      if (material_block())
        return reduce({real("a2"), real("b2"), real("c2"), real("L"), real("R0")});
      return reduced_from_temperature(real("t"), real("R"));
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
  }

  /// All entries, numeric keys as numbers.
  Json to_json() const {
    Json j = Json::object();
    for (const auto& [k, v] : values_) {
      if (numeric_keys().count(k))
        j[k] = parse_real(k, v);
      else
        j[k] = v;
    }
    return j;
  }

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static double parse_real(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(v, &used);
    } catch (const std::exception&) {
      throw ConfigError("configuration key '" + key + "' is not a number: '" + v + "'");
    }
    if (used != v.size() || !std::isfinite(x))
      throw ConfigError("configuration key '" + key + "' is not a finite number: '" + v + "'");
    return x;
  }

  static const std::set<std::string>& numeric_keys() {
    static const std::set<std::string> k{"a2",       "b2",  "c2",        "L",     "R0",     "t",
                                         "R",        "N",   "grid_n",    "dt_factor", "max_steps", "tol",
                                         "seed",     "count", "order",   "threads", "checkpoint_every",
                                         "energy_every", "radii", "sigma", "amplitude"};
    return k;
  }

  static const std::set<std::string>& known_keys() {
    static const std::set<std::string> k = [] {
      std::set<std::string> s = numeric_keys();
      for (const char* extra : {"out_dir", "init", "field", "resume"}) s.insert(extra);
      return s;
    }();
    return k;
  }
};

/// Profile table r,h,dh,residual (residual 0 at the last node, where h is prescribed).
inline std::string profile_csv(const RadialProfile& p) {
  std::string out = "r,h,dh,residual\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += format_double(p.r[i]) + "," + format_double(p.h[i]) + "," + format_double(p.dh[i]) + "," +
           format_double(profile_node_residual(p, i)) + "\n";
  }
  return out;
}

inline int node_kind_code(NodeKind k) { return static_cast<int>(k); }

inline NodeKind node_kind_from_code(int c) {
  switch (c) {
    case 0: return NodeKind::interior;
    case 1: return NodeKind::boundary;
    case 2: return NodeKind::exterior;
    default: throw ConfigError("invalid mask code " + std::to_string(c));
  }
}

/// Field table x,y,z,c1..c5,mask (mask 0 interior, 1 boundary, 2 exterior).
inline std::string field_csv(const BallField& f) {
  std::string out = "x,y,z,c1,c2,c3,c4,c5,mask\n";
  out.reserve(out.size() + f.size() * 200);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j)
      for (int k = 0; k < f.n; ++k) {
        const std::size_t id = f.index(i, j, k);
        const Vec3 x = f.position(i, j, k);
        for (double v : x) out += format_double(v) + ",";
        for (double c : f.values[id].coeffs()) out += format_double(c) + ",";
        out += std::to_string(node_kind_code(f.mask[id])) + "\n";
      }
  return out;
}

inline Json field_sidecar(const BallField& f) {
  Json j = Json::object();
  j["R"] = f.R;
  j["t"] = f.t;
  j["dx"] = f.dx;
  j["grid_n"] = f.n;
  j["provenance"] = f.provenance;
  j["singular_core"] = f.singular_core;
  return j;
}

/// Rebuilds a BallField from its CSV table and JSON sidecar.
inline BallField read_field(const std::string& csv_text, const Json& sidecar) {
  BallField f;
  try {
    f.n = sidecar.at("grid_n").get<int>();
    f.R = sidecar.at("R").get<double>();
    f.t = sidecar.at("t").get<double>();
    f.dx = sidecar.at("dx").get<double>();
    f.provenance = sidecar.at("provenance").get<std::string>();
    f.singular_core = sidecar.value("singular_core", false);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("field sidecar: ") + e.what());
  }
  if (f.n < 16) throw ConfigError("field sidecar: grid_n too small");
  const std::size_t count = static_cast<std::size_t>(f.n) * f.n * f.n;
  f.values.resize(count);
  f.mask.resize(count);
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,z,c1,c2,c3,c4,c5,mask") throw ConfigError("field CSV: bad header");
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= count) throw ConfigError("field CSV: too many rows");
    std::array<double, 9> v{};
    const char* s = line.c_str();
    for (int c = 0; c < 9; ++c) {
      char* end = nullptr;
      v[static_cast<std::size_t>(c)] = std::strtod(s, &end);
      if (end == s || (c < 8 && *end != ',')) throw ConfigError("field CSV: malformed row " + std::to_string(row + 1));
      s = end + (c < 8 ? 1 : 0);
    }
    f.values[row] = QTensor(QTensor::Coeffs{v[3], v[4], v[5], v[6], v[7]});
    f.mask[row] = node_kind_from_code(static_cast<int>(v[8]));
    ++row;
  }
  if (row != count) throw ConfigError("field CSV: expected " + std::to_string(count) + " rows");
  return f;
}

}  // namespace ldg
