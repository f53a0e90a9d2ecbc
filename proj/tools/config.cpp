#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace mbdiff_cli {

namespace {

struct RawEntry {
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& text, int line) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.c_str();
  const char* last = first + t.size();
  if (!t.empty() && t.front() == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || t.empty())
    fail(line, "expected a number, got '" + t + "'");
  if (!std::isfinite(v)) fail(line, "number must be finite");
  return v;
}

std::size_t parse_count(const std::string& text, int line) {
  const std::string t = trim(text);
  std::size_t v = 0;
  const auto res = std::from_chars(t.c_str(), t.c_str() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.c_str() + t.size() || t.empty())
    fail(line, "expected a positive integer, got '" + t + "'");
  if (v == 0) fail(line, "value must be positive");
  return v;
}

bool parse_bool(const std::string& text, int line) {
  const std::string t = trim(text);
  if (t == "true") return true;
  if (t == "false") return false;
  fail(line, "expected true or false, got '" + t + "'");
}

std::vector<std::size_t> parse_count_list(const std::string& text, int line) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_count(item, line));
  if (out.empty()) fail(line, "expected a comma-separated list of integers");
  return out;
}

// constant(v) | linear(v) | table(x:y, x:y, ...)
CoeffValue parse_function(const std::string& text, int line) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')')
    fail(line, "expected a function spec like constant(1.0), got '" + t + "'");
  const std::string name = trim(t.substr(0, open));
  const std::string args = t.substr(open + 1, t.size() - open - 2);

  CoeffValue coeff;
  if (name == "constant") {
    coeff.kind = MBDIFF_COEFF_CONSTANT;
    coeff.value = parse_number(args, line);
  } else if (name == "linear") {
    coeff.kind = MBDIFF_COEFF_LINEAR;
    coeff.value = parse_number(args, line);
  } else if (name == "table") {
    coeff.kind = MBDIFF_COEFF_TABLE;
    std::stringstream ss(args);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
      const auto colon = pair.find(':');
      if (colon == std::string::npos) fail(line, "table entries must look like x:y");
      coeff.xs.push_back(parse_number(pair.substr(0, colon), line));
      coeff.ys.push_back(parse_number(pair.substr(colon + 1), line));
    }
    if (coeff.xs.empty()) fail(line, "table needs at least one x:y entry");
    for (std::size_t i = 1; i < coeff.xs.size(); ++i)
      if (!(coeff.xs[i] > coeff.xs[i - 1]))
        fail(line, "table breakpoints must be strictly increasing");
  } else {
    fail(line, "unknown function '" + name + "' (use constant, linear, or table)");
  }
  return coeff;
}

enum class KeyType { Number, Count, CountList, Function, Bool, Word, Text };

const std::map<std::string, KeyType>& key_table() {
  static const std::map<std::string, KeyType> table = {
      {"mode", KeyType::Word},
      // physical route
      {"D", KeyType::Number},
      {"beta", KeyType::Number},
      {"H", KeyType::Number},
      {"a0", KeyType::Number},
      {"s0", KeyType::Number},
      {"m0", KeyType::Number},
      {"L", KeyType::Number},
      {"Tf", KeyType::Number},
      {"b", KeyType::Function},
      {"sigma", KeyType::Function},
      {"u0", KeyType::Function},
      {"sigma_plateau", KeyType::Number},
      // dimensionless route
      {"Bi", KeyType::Number},
      {"A0", KeyType::Number},
      {"T", KeyType::Number},
      {"h_max", KeyType::Number},
      {"b_scaled", KeyType::Function},
      {"sigma_scaled", KeyType::Function},
      {"u0_scaled", KeyType::Function},
      {"sigma_plateau_scaled", KeyType::Number},
      // discretization and outputs
      {"n_nodes", KeyType::Count},
      {"dt", KeyType::Number},
      {"record_every", KeyType::Count},
      {"output_dir", KeyType::Text},
      {"node_counts", KeyType::CountList},
      {"ref_nodes", KeyType::Count},
      {"halvings", KeyType::Count},
      {"ref_divisor", KeyType::Count},
      {"gnuplot", KeyType::Bool},
  };
  return table;
}

const std::vector<std::string> kPhysicalKeys = {"D",  "beta", "a0", "s0", "m0",
                                                "L",  "Tf",   "b",  "sigma"};
const std::vector<std::string> kDimensionlessKeys = {"Bi", "A0", "T", "h_max",
                                                     "b_scaled", "sigma_scaled"};

}  // namespace

std::optional<Mode> mode_from_string(const std::string& name) {
  if (name == "simulate") return Mode::Simulate;
  if (name == "convergence-space") return Mode::ConvergenceSpace;
  if (name == "convergence-time") return Mode::ConvergenceTime;
  if (name == "check-invariants") return Mode::CheckInvariants;
  return std::nullopt;
}

std::string mode_to_string(Mode mode) {
  switch (mode) {
    case Mode::Simulate: return "simulate";
    case Mode::ConvergenceSpace: return "convergence-space";
    case Mode::ConvergenceTime: return "convergence-time";
    case Mode::CheckInvariants: return "check-invariants";
  }
  return "?";
}

mbdiff_coeff_spec CoeffValue::spec() const {
  mbdiff_coeff_spec s{};
  s.kind = kind;
  s.value = value;
  s.xs = xs.empty() ? nullptr : xs.data();
  s.ys = ys.empty() ? nullptr : ys.data();
  s.n_points = xs.size();
  return s;
}

mbdiff_physical_spec RunConfig::physical_spec() const {
  mbdiff_physical_spec s{};
  s.diffusivity = diffusivity;
  s.surface_rate = surface_rate;
  s.henry = henry;
  s.kinetic_coefficient = kinetic_coefficient;
  s.initial_position = initial_position;
  s.concentration_scale = concentration_scale;
  s.max_position = max_position;
  s.final_time = final_time;
  s.boundary_concentration = boundary.spec();
  s.interface_resistance = resistance.spec();
  s.initial_concentration = initial.spec();
  s.has_resistance_plateau = resistance_plateau.has_value() ? 1 : 0;
  s.resistance_plateau = resistance_plateau.value_or(0.0);
  return s;
}

mbdiff_dimensionless_spec RunConfig::dimensionless_spec() const {
  mbdiff_dimensionless_spec s{};
  s.biot = biot;
  s.interface_kinetics = interface_kinetics;
  s.henry = henry;
  s.final_time = final_time_tau;
  s.h_max = h_max;
  s.boundary_value = boundary.spec();
  s.interface_resistance = resistance.spec();
  s.initial_profile = initial.spec();
  s.has_resistance_plateau = resistance_plateau.has_value() ? 1 : 0;
  s.resistance_plateau = resistance_plateau.value_or(0.0);
  return s;
}

RunConfig parse_config(const std::string& text, const std::optional<Mode>& mode_override) {
  std::map<std::string, RawEntry> entries;
  {
    std::stringstream ss(text);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(ss, raw_line)) {
      ++line_no;
      const auto hash = raw_line.find('#');
      if (hash != std::string::npos) raw_line.erase(hash);
      const std::string line = trim(raw_line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) fail(line_no, "missing key before '='");
      if (key_table().find(key) == key_table().end())
        fail(line_no, "unknown key '" + key + "'");
      if (entries.count(key)) fail(line_no, "duplicate key '" + key + "'");
      if (value.empty()) fail(line_no, "missing value for '" + key + "'");
      entries[key] = RawEntry{value, line_no};
    }
  }

  auto has = [&entries](const std::string& key) { return entries.count(key) != 0; };

  const bool any_physical = std::any_of(kPhysicalKeys.begin(), kPhysicalKeys.end(), has) ||
                            has("u0") || has("sigma_plateau");
  const bool any_dimensionless =
      std::any_of(kDimensionlessKeys.begin(), kDimensionlessKeys.end(), has) ||
      has("u0_scaled") || has("sigma_plateau_scaled");
  if (any_physical && any_dimensionless)
    throw ConfigError("physical and dimensionless parameter keys cannot be mixed");

  std::vector<std::string> missing;

  RunConfig cfg;
  if (mode_override) {
    cfg.mode = *mode_override;
  } else if (has("mode")) {
    const auto& entry = entries.at("mode");
    const auto mode = mode_from_string(entry.value);
    if (!mode)
      fail(entry.line, "unknown mode '" + entry.value +
                           "' (simulate, convergence-space, convergence-time, "
                           "check-invariants)");
    cfg.mode = *mode;
  } else {
    missing.push_back("mode (or pass --mode)");
  }

  cfg.physical_route = !any_dimensionless;
  const auto& route_keys = cfg.physical_route ? kPhysicalKeys : kDimensionlessKeys;
  if (!any_physical && !any_dimensionless) {
    missing.push_back(
        "parameter set: physical keys (D, beta, H, a0, s0, m0, L, Tf, b, sigma) or "
        "dimensionless keys (Bi, A0, H, T, h_max, b_scaled, sigma_scaled)");
  } else {
    for (const auto& key : route_keys)
      if (!has(key)) missing.push_back(key);
    if (!has("H")) missing.push_back("H");
  }

  const bool mode_known = mode_override.has_value() || has("mode");
  const bool needs_nodes = mode_known && cfg.mode != Mode::ConvergenceSpace;
  if (mode_known && !has("dt")) missing.push_back("dt");
  if (needs_nodes && !has("n_nodes")) missing.push_back("n_nodes");

  if (!missing.empty()) {
    std::string msg = "missing required keys: ";
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i > 0) msg += "; ";
      msg += missing[i];
    }
    throw ConfigError(msg);
  }

  auto number = [&entries](const std::string& key) {
    const auto& e = entries.at(key);
    return parse_number(e.value, e.line);
  };
  auto positive = [&entries, &number](const std::string& key) {
    const double v = number(key);
    if (!(v > 0.0)) fail(entries.at(key).line, key + " must be positive");
    return v;
  };
  auto function = [&entries](const std::string& key) {
    const auto& e = entries.at(key);
    return parse_function(e.value, e.line);
  };

  cfg.henry = positive("H");
  if (cfg.physical_route) {
    cfg.diffusivity = positive("D");
    cfg.surface_rate = positive("beta");
    cfg.kinetic_coefficient = positive("a0");
    cfg.initial_position = positive("s0");
    cfg.concentration_scale = positive("m0");
    cfg.max_position = positive("L");
    cfg.final_time = positive("Tf");
    cfg.boundary = function("b");
    cfg.resistance = function("sigma");
    if (has("u0")) {
      cfg.initial = function("u0");
    } else {
      cfg.initial.kind = MBDIFF_COEFF_CONSTANT;
      cfg.initial.value = cfg.concentration_scale;
    }
    if (has("sigma_plateau")) cfg.resistance_plateau = positive("sigma_plateau");
  } else {
    cfg.biot = positive("Bi");
    cfg.interface_kinetics = positive("A0");
    cfg.final_time_tau = positive("T");
    cfg.h_max = positive("h_max");
    cfg.boundary = function("b_scaled");
    cfg.resistance = function("sigma_scaled");
    if (has("u0_scaled")) {
      cfg.initial = function("u0_scaled");
    } else {
      cfg.initial.kind = MBDIFF_COEFF_CONSTANT;
      cfg.initial.value = 1.0;
    }
    if (has("sigma_plateau_scaled"))
      cfg.resistance_plateau = positive("sigma_plateau_scaled");
  }

  cfg.dt = positive("dt");
  if (has("n_nodes")) {
    cfg.n_nodes = parse_count(entries.at("n_nodes").value, entries.at("n_nodes").line);
    if (cfg.n_nodes < 2) fail(entries.at("n_nodes").line, "n_nodes must be at least 2");
  }
  if (has("record_every"))
    cfg.record_every =
        parse_count(entries.at("record_every").value, entries.at("record_every").line);
  if (has("output_dir")) cfg.output_dir = entries.at("output_dir").value;
  if (has("node_counts")) {
    const auto& e = entries.at("node_counts");
    cfg.node_counts = parse_count_list(e.value, e.line);
    for (std::size_t i = 0; i + 1 < cfg.node_counts.size(); ++i)
      if (cfg.node_counts[i] >= cfg.node_counts[i + 1])
        fail(e.line, "node_counts must be strictly increasing");
    for (const auto n : cfg.node_counts)
      if (n < 2) fail(e.line, "node counts must be at least 2");
  }
  if (has("ref_nodes"))
    cfg.ref_nodes = parse_count(entries.at("ref_nodes").value, entries.at("ref_nodes").line);
  if (has("halvings"))
    cfg.halvings = parse_count(entries.at("halvings").value, entries.at("halvings").line);
  if (has("ref_divisor"))
    cfg.ref_divisor =
        parse_count(entries.at("ref_divisor").value, entries.at("ref_divisor").line);
  if (has("gnuplot"))
    cfg.gnuplot = parse_bool(entries.at("gnuplot").value, entries.at("gnuplot").line);

  if (cfg.mode == Mode::ConvergenceSpace && cfg.ref_nodes <= cfg.node_counts.back())
    throw ConfigError("ref_nodes must exceed the largest entry of node_counts");
  if (cfg.mode == Mode::ConvergenceTime) {
    if (cfg.halvings >= 63) throw ConfigError("halvings is too large");
    const std::size_t finest = std::size_t{1} << cfg.halvings;
    if (cfg.ref_divisor < finest || cfg.ref_divisor % finest != 0)
      throw ConfigError("ref_divisor must be a multiple of 2^halvings");
  }

  return cfg;
}

RunConfig load_config_file(const std::string& path,
                           const std::optional<Mode>& mode_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), mode_override);
}

}  // namespace mbdiff_cli
