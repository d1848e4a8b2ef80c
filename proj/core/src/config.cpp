#include "fracopt/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "fracopt/catalog.hpp"
#include "fracopt/errors.hpp"

namespace fracopt {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line;
};

double to_number(const Entry& e, const std::string& key) {
  double v = 0.0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("'" + key + "' expects a number, got '" + e.value + "'", e.line);
  }
  return v;
}

int to_int(const Entry& e, const std::string& key) {
  const double v = to_number(e, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ConfigError("'" + key + "' expects an integer, got '" + e.value + "'", e.line);
  }
  return static_cast<int>(v);
}

std::vector<double> to_list(const Entry& e, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_number({trim(item), e.line}, key));
  if (out.empty()) throw ConfigError("'" + key + "' expects a comma-separated list", e.line);
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  static const char* const known[] = {
      "problem", "alpha", "a",         "cost_start", "M",        "N",           "x_a",
      "terminal", "T",    "x_T",       "K",          "t_bracket", "T_guess",    "curve",
      "pipeline", "expansion_N", "grid", "epsilon",  "tolerance"};

  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    bool recognised = false;
    for (const char* k : known) recognised = recognised || key == k;
    if (!recognised) throw ConfigError("unknown key '" + key + "'", line);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line);
    if (entries.count(key)) {
      throw ConfigError("duplicate key '" + key + "' (first on line " +
                            std::to_string(entries.at(key).line) + ")",
                        line);
    }
    entries.emplace(key, Entry{value, line});
  }

  const auto has = [&](const char* key) { return entries.count(key) > 0; };
  const auto number = [&](const char* key) { return to_number(entries.at(key), key); };
  if (!has("problem")) throw ConfigError("missing required key 'problem'", 0);

  RunConfig cfg;
  cfg.problem_name = entries.at("problem").value;
  const double alpha = has("alpha") ? number("alpha") : 0.5;
  CatalogEntry entry;
  try {
    entry = catalog_entry(cfg.problem_name, alpha);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what(), entries.at("problem").line);
  }
  cfg.problem = entry.problem;
  FocpProblem& p = cfg.problem;
  if (has("alpha")) p.alpha = alpha;

  bool modified = false;
  const auto override_number = [&](const char* key, double& target) {
    if (!has(key)) return;
    const double v = number(key);
    modified = modified || v != target;
    target = v;
  };
  override_number("a", p.a);
  override_number("M", p.M);
  override_number("N", p.N);
  override_number("x_a", p.x_a);
  if (has("cost_start")) p.cost_start = number("cost_start");

  if (has("terminal")) {
    const Entry& e = entries.at("terminal");
    const auto require = [&](const char* key) {
      if (!has(key)) {
        throw ConfigError("terminal '" + e.value + "' needs key '" + key + "'", e.line);
      }
      return number(key);
    };
    const auto bracket = [&]() {
      if (!has("t_bracket")) {
        throw ConfigError("terminal '" + e.value + "' needs key 't_bracket'", e.line);
      }
      const std::vector<double> b = to_list(entries.at("t_bracket"), "t_bracket");
      if (b.size() != 2) {
        throw ConfigError("'t_bracket' expects two values lo,hi", entries.at("t_bracket").line);
      }
      return std::make_pair(b[0], b[1]);
    };
    const std::optional<double> guess =
        has("T_guess") ? std::optional<double>(number("T_guess")) : std::nullopt;

    TerminalSpec spec;
    if (e.value == "fixed-free") {
      spec = terminal::FixedTimeFreeState{require("T")};
    } else if (e.value == "fixed-fixed") {
      spec = terminal::FixedTimeFixedState{require("T"), require("x_T")};
    } else if (e.value == "free-free") {
      const auto [lo, hi] = bracket();
      spec = terminal::FreeTimeFreeState{lo, hi, guess};
    } else if (e.value == "free-fixed") {
      const double x_T = require("x_T");
      const auto [lo, hi] = bracket();
      spec = terminal::FreeTimeFixedState{x_T, lo, hi, guess};
    } else if (e.value == "curve") {
      if (!has("curve")) throw ConfigError("terminal 'curve' needs key 'curve'", e.line);
      const std::vector<double> c = to_list(entries.at("curve"), "curve");
      const auto [lo, hi] = bracket();
      terminal::Curve curve;
      curve.gamma = [c](double t) {
        double v = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
        return v;
      };
      curve.gamma_dot = [c](double t) {
        double v = 0.0;
        for (std::size_t k = c.size(); k-- > 1;) v = v * t + static_cast<double>(k) * c[k];
        return v;
      };
      curve.lower = lo;
      curve.upper = hi;
      curve.guess = guess;
      spec = curve;
    } else if (e.value == "inequality") {
      spec = terminal::FixedTimeInequality{require("T"), require("K")};
    } else {
      throw ConfigError("unknown terminal kind '" + e.value + "'", e.line);
    }
    p.terminal = spec;
    modified = true;
  } else {
    for (const char* key : {"T", "x_T", "K", "t_bracket", "T_guess", "curve"}) {
      if (has(key)) {
        throw ConfigError("'" + std::string(key) + "' needs an explicit 'terminal'",
                          entries.at(key).line);
      }
    }
  }

  if (has("pipeline")) {
    const Entry& e = entries.at("pipeline");
    if (e.value == "both") {
      cfg.pipelines = {Pipeline::FractionalConditions, Pipeline::ReduceThenClassical};
    } else if (auto pl = parse_pipeline(e.value)) {
      cfg.pipelines = {*pl};
    } else {
      throw ConfigError("unknown pipeline '" + e.value + "'", e.line);
    }
  }
  if (has("expansion_N")) cfg.N = to_int(entries.at("expansion_N"), "expansion_N");
  if (has("grid")) cfg.grid = to_int(entries.at("grid"), "grid");
  if (has("epsilon")) cfg.epsilon = number("epsilon");
  if (has("tolerance")) cfg.tolerance = number("tolerance");
  if (cfg.N < 2) throw ConfigError("'expansion_N' must be >= 2", entries.at("expansion_N").line);
  if (cfg.grid < 2) throw ConfigError("'grid' must be >= 2", entries.at("grid").line);
  if (cfg.tolerance <= 0.0) {
    throw ConfigError("'tolerance' must be positive", entries.at("tolerance").line);
  }

  if (!modified) {
    cfg.exact_x = entry.exact_x;
    cfg.exact_u = entry.exact_u;
  }
  p.validate();
  return cfg;
}

}  // namespace fracopt
