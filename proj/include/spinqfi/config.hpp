#pragma once

// Experiment configuration files.
//
// The format is a small TOML subset: `[section]` headers, `key = value`
// pairs, `#` comments, and values that are numbers, "strings", true/false or
// one-line [arrays] of those. A config has a [params] section and exactly one
// command section: [trajectory], [qfi-time], [opt-sweep], [compare] or
// [oracle-check].

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "spinqfi/dynamics.hpp"
#include "spinqfi/estimation.hpp"
#include "spinqfi/model.hpp"
#include "spinqfi/qfi.hpp"

namespace spinqfi {

// ---------------------------------------------------------------------------
// TOML subset
// ---------------------------------------------------------------------------

struct TomlValue {
  enum class Kind { Number, String, Bool, Array };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string text;  // String payload, or the literal token for Number
  bool boolean = false;
  std::vector<TomlValue> items;
};

using TomlTable = std::map<std::string, TomlValue>;

struct TomlDocument {
  TomlTable root;
  std::map<std::string, TomlTable> sections;
  std::vector<std::string> section_order;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

class TomlValueParser {
 public:
  TomlValueParser(std::string_view src, int line) : s_(src), line_(line) {}

  TomlValue parse() {
    auto v = value();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParamError("config line " + std::to_string(line_) + ": " + what);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  TomlValue value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"') return string();
    if (c == '[') return array();
    return scalar();
  }

  TomlValue string() {
    ++pos_;
    TomlValue v;
    v.kind = TomlValue::Kind::String;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      v.text += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  TomlValue array() {
    ++pos_;
    TomlValue v;
    v.kind = TomlValue::Kind::Array;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(value());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in array");
    }
  }

  TomlValue scalar() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && !std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    const std::string tok(s_.substr(start, pos_ - start));
    TomlValue v;
    if (tok == "true" || tok == "false") {
      v.kind = TomlValue::Kind::Bool;
      v.boolean = tok == "true";
      return v;
    }
    std::string digits;
    for (char ch : tok)
      if (ch != '_') digits += ch;
    char* end = nullptr;
    v.number = std::strtod(digits.c_str(), &end);
    if (digits.empty() || end != digits.c_str() + digits.size()) fail("cannot parse value '" + tok + "'");
    v.kind = TomlValue::Kind::Number;
    v.text = tok;
    return v;
  }

  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;
};

// strips a trailing comment that is not inside a string
inline std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

}  // namespace detail

inline TomlDocument parse_toml(std::istream& in) {
  TomlDocument doc;
  TomlTable* current = &doc.root;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParamError("config line " + std::to_string(lineno) + ": malformed section header");
      const std::string name = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (name.empty()) throw ParamError("config line " + std::to_string(lineno) + ": empty section name");
      if (doc.sections.contains(name))
        throw ParamError("config line " + std::to_string(lineno) + ": duplicate section [" + name + "]");
      doc.section_order.push_back(name);
      current = &doc.sections[name];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParamError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(std::string_view(line).substr(0, eq));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
    if (key.empty()) throw ParamError("config line " + std::to_string(lineno) + ": empty key");
    if (current->contains(key))
      throw ParamError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    (*current)[key] = detail::TomlValueParser(std::string_view(line).substr(eq + 1), lineno).parse();
  }
  return doc;
}

inline TomlDocument parse_toml(const std::string& text) {
  std::istringstream in(text);
  return parse_toml(in);
}

// ---------------------------------------------------------------------------
// Experiment config
// ---------------------------------------------------------------------------

struct TimeGrid {
  double t_min = 0.0;
  double t_max = 20.0;
  int points = 2001;

  [[nodiscard]] double at(int i) const {
    if (points == 1) return t_min;
    return i == points - 1 ? t_max : t_min + (t_max - t_min) * i / (points - 1);
  }
  bool operator==(const TimeGrid&) const = default;
};

struct TrajectoryCommand {
  std::vector<PreparationMode> modes;
  TimeGrid grid{0.0, 10.0, 1001};
  bool operator==(const TrajectoryCommand&) const = default;
};

struct QfiTimeCommand {
  Estimator estimator = Estimator::Temperature;
  std::vector<double> values;  // empty: the value in [params]
  std::vector<PreparationMode> modes;
  TimeGrid grid;
  QfiRoute route = QfiRoute::Bloch;
  bool operator==(const QfiTimeCommand&) const = default;
};

struct OptSweepCommand {
  SweepSpec sweep;
  bool operator==(const OptSweepCommand&) const = default;
};

struct CompareCommand {
  Estimator estimator = Estimator::Temperature;
  double x_value = 1.0;
  TimeWindow window;
  bool operator==(const CompareCommand&) const = default;
};

struct OracleCheckCommand {
  std::vector<int> N_list{2, 4, 6, 8};
  std::vector<double> g_list{0.01, 0.5, 1.0};
  std::vector<double> T_list{0.5, 1.0, 2.0};
  std::vector<double> chi_list{0.0, 0.1};
  int times = 101;
  double t_max = 10.0;
  double threshold = 1e-9;
  bool operator==(const OracleCheckCommand&) const = default;
};

using CommandPayload = std::variant<TrajectoryCommand, QfiTimeCommand, OptSweepCommand, CompareCommand, OracleCheckCommand>;

inline constexpr const char* kCommandNames[] = {"trajectory", "qfi-time", "opt-sweep", "compare", "oracle-check"};

struct ExperimentConfig {
  ModelParams params;
  CommandPayload command;
  std::string output = "out.csv";

  [[nodiscard]] std::string command_name() const { return kCommandNames[command.index()]; }
  bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

class TableReader {
 public:
  TableReader(const TomlTable& t, std::string section) : t_(t), section_(std::move(section)) {}

  [[nodiscard]] bool has(const std::string& key) const { return t_.contains(key); }

  const TomlValue& get(const std::string& key) {
    used_.insert(key);
    const auto it = t_.find(key);
    if (it == t_.end()) throw ParamError("[" + section_ + "] missing key '" + key + "'");
    return it->second;
  }

  double number(const std::string& key) {
    const auto& v = get(key);
    if (v.kind != TomlValue::Kind::Number) throw ParamError("[" + section_ + "] '" + key + "' must be a number");
    return v.number;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  int integer(const std::string& key) {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ParamError("[" + section_ + "] '" + key + "' must be an integer");
    return static_cast<int>(v);
  }
  int integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

  std::string string(const std::string& key) {
    const auto& v = get(key);
    if (v.kind != TomlValue::Kind::String) throw ParamError("[" + section_ + "] '" + key + "' must be a string");
    return v.text;
  }
  std::string string(const std::string& key, const std::string& fallback) { return has(key) ? string(key) : fallback; }

  std::vector<double> numbers(const std::string& key) {
    const auto& v = get(key);
    if (v.kind == TomlValue::Kind::Number) return {v.number};
    if (v.kind != TomlValue::Kind::Array) throw ParamError("[" + section_ + "] '" + key + "' must be a number or array");
    std::vector<double> out;
    for (const auto& it : v.items) {
      if (it.kind != TomlValue::Kind::Number) throw ParamError("[" + section_ + "] '" + key + "' must hold numbers");
      out.push_back(it.number);
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& key) {
    const auto& v = get(key);
    if (v.kind == TomlValue::Kind::String) return {v.text};
    if (v.kind != TomlValue::Kind::Array) throw ParamError("[" + section_ + "] '" + key + "' must be a string or array");
    std::vector<std::string> out;
    for (const auto& it : v.items) {
      if (it.kind != TomlValue::Kind::String) throw ParamError("[" + section_ + "] '" + key + "' must hold strings");
      out.push_back(it.text);
    }
    return out;
  }

  std::vector<PreparationMode> modes(const std::string& key) {
    std::vector<PreparationMode> out;
    for (const auto& s : strings(key)) out.push_back(parse_mode(s));
    if (out.empty()) throw ParamError("[" + section_ + "] '" + key + "' must name at least one preparation mode");
    return out;
  }

  void finish() const {
    for (const auto& [k, v] : t_)
      if (!used_.contains(k)) throw ParamError("[" + section_ + "] unknown key '" + k + "'");
  }

 private:
  const TomlTable& t_;
  std::string section_;
  std::set<std::string> used_;
};

inline ModelParams read_params(const TomlTable& t) {
  TableReader r(t, "params");
  ModelParams p;
  p.N = r.integer("N");
  p.eps0 = r.number("eps0", p.eps0);
  p.eps = r.number("eps", p.eps);
  p.delta = r.number("delta", p.delta);
  if (r.has("omega")) p.omega = r.numbers("omega");
  if (r.has("chi")) p.chi = r.numbers("chi");
  p.g = r.number("g", p.g);
  p.T = r.number("T", p.T);
  p.boundary = parse_boundary(r.string("boundary", "periodic"));
  p.jcorr = parse_jcorr(r.string("jcorr", "prepared"));
  r.finish();
  return validate_params(p);
}

inline TimeGrid read_grid(TableReader& r, TimeGrid g) {
  g.t_min = r.number("t_min", g.t_min);
  g.t_max = r.number("t_max", g.t_max);
  g.points = r.integer("points", g.points);
  if (!(g.t_min >= 0.0) || !(g.t_max >= g.t_min)) throw ParamError("time grid needs 0 <= t_min <= t_max");
  if (g.points < 1) throw ParamError("time grid needs at least one point");
  return g;
}

inline TimeWindow read_window(TableReader& r) {
  TimeWindow w;
  w.t_min = r.number("t_min", w.t_min);
  w.t_max = r.number("t_max", w.t_max);
  w.grid_points = r.integer("grid_points", w.grid_points);
  w.refine_tol = r.number("refine_tol", w.refine_tol);
  validate_window(w);
  return w;
}

inline CommandPayload read_command(const std::string& name, const TomlTable& t) {
  TableReader r(t, name);
  CommandPayload out;
  if (name == "trajectory") {
    TrajectoryCommand c;
    c.modes = r.has("mode") ? r.modes("mode") : r.modes("modes");
    c.grid = read_grid(r, c.grid);
    out = c;
  } else if (name == "qfi-time") {
    QfiTimeCommand c;
    c.estimator = parse_estimator(r.string("estimator"));
    if (r.has("values")) c.values = r.numbers("values");
    c.modes = r.modes("modes");
    c.grid = read_grid(r, c.grid);
    c.route = parse_route(r.string("route", "bloch"));
    out = c;
  } else if (name == "opt-sweep") {
    OptSweepCommand c;
    c.sweep.variable = parse_estimator(r.string("variable"));
    c.sweep.values = r.numbers("values");
    c.sweep.modes = r.modes("modes");
    c.sweep.window = read_window(r);
    validate_sweep(c.sweep);
    out = c;
  } else if (name == "compare") {
    CompareCommand c;
    c.estimator = parse_estimator(r.string("estimator"));
    c.x_value = r.number("x_value");
    c.window = read_window(r);
    out = c;
  } else if (name == "oracle-check") {
    OracleCheckCommand c;
    if (r.has("N")) {
      c.N_list.clear();
      for (double v : r.numbers("N")) {
        if (v != std::floor(v) || v < 1) throw ParamError("[oracle-check] N entries must be positive integers");
        c.N_list.push_back(static_cast<int>(v));
      }
    }
    if (r.has("g")) c.g_list = r.numbers("g");
    if (r.has("T")) c.T_list = r.numbers("T");
    if (r.has("chi")) c.chi_list = r.numbers("chi");
    c.times = r.integer("times", c.times);
    c.t_max = r.number("t_max", c.t_max);
    c.threshold = r.number("threshold", c.threshold);
    if (c.N_list.empty() || c.g_list.empty() || c.T_list.empty() || c.chi_list.empty())
      throw ParamError("[oracle-check] lists must not be empty");
    if (c.times < 1) throw ParamError("[oracle-check] times must be >= 1");
    out = c;
  } else {
    throw ParamError("unknown command section [" + name + "]");
  }
  r.finish();
  return out;
}

}  // namespace detail

inline ExperimentConfig config_from_toml(const TomlDocument& doc) {
  ExperimentConfig cfg;
  {
    detail::TableReader root(doc.root, "root");
    cfg.output = root.string("output", cfg.output);
    root.finish();
  }
  const auto params = doc.sections.find("params");
  if (params == doc.sections.end()) throw ParamError("config has no [params] section");
  cfg.params = detail::read_params(params->second);

  std::vector<std::string> commands;
  for (const auto& name : doc.section_order)
    if (name != "params") commands.push_back(name);
  if (commands.size() != 1)
    throw ParamError("config must contain exactly one command section, found " + std::to_string(commands.size()));
  cfg.command = detail::read_command(commands.front(), doc.sections.at(commands.front()));
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& text) { return config_from_toml(parse_toml(text)); }

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParamError("cannot read config file '" + path + "'");
  return config_from_toml(parse_toml(in));
}

// ---------------------------------------------------------------------------
// Serialisation (canonical form; also echoed into CSV headers)
// ---------------------------------------------------------------------------

/// 17 significant digits, used for CSV cells.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Shortest text that parses back to the same double, used in config files.
inline std::string format_shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_shortest(v[i]);
  return s + "]";
}
inline std::string list(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}
inline std::string list(const std::vector<PreparationMode>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", \"" : "\"") + std::string(to_string(v[i])) + "\"";
  return s + "]";
}
inline std::string scalar_or_list(const std::vector<double>& v) {
  return v.size() == 1 ? format_shortest(v.front()) : list(v);
}

inline void write_grid(std::ostream& os, const TimeGrid& g) {
  os << "t_min = " << format_shortest(g.t_min) << "\n"
     << "t_max = " << format_shortest(g.t_max) << "\n"
     << "points = " << g.points << "\n";
}
inline void write_window(std::ostream& os, const TimeWindow& w) {
  os << "t_min = " << format_shortest(w.t_min) << "\n"
     << "t_max = " << format_shortest(w.t_max) << "\n"
     << "grid_points = " << w.grid_points << "\n"
     << "refine_tol = " << format_shortest(w.refine_tol) << "\n";
}

}  // namespace detail

inline std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  const auto& p = cfg.params;
  os << "output = \"" << cfg.output << "\"\n\n";
  os << "[params]\n"
     << "N = " << p.N << "\n"
     << "eps0 = " << format_shortest(p.eps0) << "\n"
     << "eps = " << format_shortest(p.eps) << "\n"
     << "delta = " << format_shortest(p.delta) << "\n"
     << "omega = " << detail::scalar_or_list(p.omega) << "\n"
     << "chi = " << detail::scalar_or_list(p.chi) << "\n"
     << "g = " << format_shortest(p.g) << "\n"
     << "T = " << format_shortest(p.T) << "\n"
     << "boundary = \"" << to_string(p.boundary) << "\"\n"
     << "jcorr = \"" << to_string(p.jcorr) << "\"\n\n";
  os << "[" << cfg.command_name() << "]\n";
  std::visit(
      [&](const auto& c) {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, TrajectoryCommand>) {
          os << "modes = " << detail::list(c.modes) << "\n";
          detail::write_grid(os, c.grid);
        } else if constexpr (std::is_same_v<C, QfiTimeCommand>) {
          os << "estimator = \"" << to_string(c.estimator) << "\"\n";
          if (!c.values.empty()) os << "values = " << detail::list(c.values) << "\n";
          os << "modes = " << detail::list(c.modes) << "\n";
          detail::write_grid(os, c.grid);
          os << "route = \"" << to_string(c.route) << "\"\n";
        } else if constexpr (std::is_same_v<C, OptSweepCommand>) {
          os << "variable = \"" << to_string(c.sweep.variable) << "\"\n"
             << "values = " << detail::list(c.sweep.values) << "\n"
             << "modes = " << detail::list(c.sweep.modes) << "\n";
          detail::write_window(os, c.sweep.window);
        } else if constexpr (std::is_same_v<C, CompareCommand>) {
          os << "estimator = \"" << to_string(c.estimator) << "\"\n"
             << "x_value = " << format_shortest(c.x_value) << "\n";
          detail::write_window(os, c.window);
        } else {
          os << "N = " << detail::list(c.N_list) << "\n"
             << "g = " << detail::list(c.g_list) << "\n"
             << "T = " << detail::list(c.T_list) << "\n"
             << "chi = " << detail::list(c.chi_list) << "\n"
             << "times = " << c.times << "\n"
             << "t_max = " << format_shortest(c.t_max) << "\n"
             << "threshold = " << format_shortest(c.threshold) << "\n";
        }
      },
      cfg.command);
  return os.str();
}

/// Recovers the config from the `# ` comment header at the top of an output CSV.
inline ExperimentConfig parse_config_echo(std::istream& csv) {
  std::string line, text;
  while (std::getline(csv, line)) {
    if (line.empty() || line.front() != '#') break;
    text += line.size() >= 2 && line[1] == ' ' ? line.substr(2) : line.substr(1);
    text += "\n";
  }
  return parse_config(text);
}

// ---------------------------------------------------------------------------
// Built-in presets
// ---------------------------------------------------------------------------

/// Probe-bath parameters shared by the figure presets: N = 50, g = 0.01,
/// chi = 0, omega = 1, eps0 = 4, eps = 2, delta = 1.
inline ModelParams figure_params() {
  ModelParams p;
  p.N = 50;
  p.g = 0.01;
  p.chi = {0.0};
  p.omega = {1.0};
  p.eps0 = 4.0;
  p.eps = 2.0;
  p.delta = 1.0;
  p.T = 1.0;
  return p;
}

inline std::vector<double> temperature_sweep_values() {
  std::vector<double> v;
  for (int i = 1; i <= 15; ++i) v.push_back(i / 5.0);
  return v;
}

inline std::vector<std::pair<std::string, ExperimentConfig>> builtin_presets() {
  const std::vector<PreparationMode> all(std::begin(kAllModes), std::end(kAllModes));
  std::vector<std::pair<std::string, ExperimentConfig>> out;

  {  // QFI vs time for temperature estimation, weak coupling
    ExperimentConfig c;
    c.params = figure_params();
    c.output = "fig1.csv";
    QfiTimeCommand q;
    q.estimator = Estimator::Temperature;
    q.values = {0.5, 1.0, 2.0};
    q.modes = {PreparationMode::PulseCorrelated, PreparationMode::PulseUncorrelated};
    q.grid = {0.0, 20.0, 2001};
    c.command = q;
    out.emplace_back("fig1", c);
  }
  {  // optimised QFI vs temperature, all preparations
    ExperimentConfig c;
    c.params = figure_params();
    c.output = "fig2.csv";
    OptSweepCommand s;
    s.sweep.variable = Estimator::Temperature;
    s.sweep.values = temperature_sweep_values();
    s.sweep.modes = all;
    c.command = s;
    out.emplace_back("fig2", c);
  }
  {  // strong coupling g = 1
    ExperimentConfig c;
    c.params = figure_params();
    c.params.g = 1.0;
    c.output = "fig3.csv";
    OptSweepCommand s;
    s.sweep.variable = Estimator::Temperature;
    s.sweep.values = temperature_sweep_values();
    s.sweep.modes = all;
    c.command = s;
    out.emplace_back("fig3", c);
  }
  {  // inter-spin interaction chi = 0.1 in a bath of N = 10
    ExperimentConfig c;
    c.params = figure_params();
    c.params.N = 10;
    c.params.chi = {0.1};
    c.output = "fig4.csv";
    OptSweepCommand s;
    s.sweep.variable = Estimator::Temperature;
    s.sweep.values = temperature_sweep_values();
    s.sweep.modes = all;
    c.command = s;
    out.emplace_back("fig4", c);
  }
  {  // coupling estimation, g = 0.1, T = 1
    ExperimentConfig c;
    c.params = figure_params();
    c.params.g = 0.1;
    c.params.T = 1.0;
    c.output = "fig5.csv";
    QfiTimeCommand q;
    q.estimator = Estimator::Coupling;
    q.modes = all;
    q.grid = {0.0, 10.0, 2001};
    c.command = q;
    out.emplace_back("fig5", c);
  }
  {  // coupling estimation, g = 0.5, T = 0.5
    ExperimentConfig c;
    c.params = figure_params();
    c.params.g = 0.5;
    c.params.T = 0.5;
    c.output = "fig6.csv";
    QfiTimeCommand q;
    q.estimator = Estimator::Coupling;
    q.modes = all;
    q.grid = {0.0, 10.0, 2001};
    c.command = q;
    out.emplace_back("fig6", c);
  }
  {
    ExperimentConfig c;
    c.params = figure_params();
    c.params.N = 2;
    c.output = "oracle-check.csv";
    c.command = OracleCheckCommand{};
    out.emplace_back("oracle-check", c);
  }
  for (auto& [name, cfg] : out) cfg.params = validate_params(cfg.params);
  return out;
}

inline ExperimentConfig builtin_preset(const std::string& name) {
  for (auto& [n, c] : builtin_presets())
    if (n == name) return c;
  throw ParamError("unknown preset '" + name + "'");
}

}  // namespace spinqfi
