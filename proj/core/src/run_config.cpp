#include "midas/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "midas/errors.hpp"

namespace midas {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

struct RawEntry {
  std::string value;
  int line;
};

std::map<std::string, RawEntry> tokenize(const std::string& text) {
  std::map<std::string, RawEntry> entries;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key or value");
    }
    if (entries.count(key)) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
    entries[key] = RawEntry{value, line_no};
  }
  return entries;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(value);
  while (std::getline(stream, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& text, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) + ": field '" + key +
                      "' is not a number: '" + text + "'");
  }
}

long parse_long(const std::string& key, const std::string& text, int line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) + ": field '" + key +
                      "' is not an integer: '" + text + "'");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  static const std::vector<std::string> kKnownKeys = {
      "mode",     "T",        "jmax",     "theta",    "sigma_u2", "sigma_v2",
      "sigma_eps2", "p",      "m",        "reps",     "seed",     "theta_lo",
      "theta_hi", "gss_iters", "out_dir", "threads",  "low_csv",  "high_csv"};

  const auto entries = tokenize(text);
  for (const auto& [key, entry] : entries) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ConfigError("config line " + std::to_string(entry.line) +
                        ": unknown key '" + key + "'");
    }
  }

  RunConfig cfg;
  auto get = [&](const char* key) -> const RawEntry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  const RawEntry* mode = get("mode");
  if (!mode) throw ConfigError("config: missing required field 'mode'");
  if (mode->value == "simulate") cfg.mode = RunMode::kSimulate;
  else if (mode->value == "diagnose") cfg.mode = RunMode::kDiagnose;
  else if (mode->value == "fit") cfg.mode = RunMode::kFit;
  else {
    throw ConfigError("config: field 'mode' must be simulate, diagnose or fit");
  }

  if (const RawEntry* e = get("T")) {
    for (const std::string& item : split_list(e->value)) {
      cfg.T.push_back(static_cast<int>(parse_long("T", item, e->line)));
    }
  }
  if (const RawEntry* e = get("jmax")) {
    for (const std::string& item : split_list(e->value)) {
      cfg.jmax.push_back(static_cast<int>(parse_long("jmax", item, e->line)));
    }
  }
  if (const RawEntry* e = get("theta")) {
    for (const std::string& item : split_list(e->value)) {
      cfg.theta.push_back(parse_double("theta", item, e->line));
    }
  }
  if (const RawEntry* e = get("sigma_u2")) {
    for (const std::string& item : split_list(e->value)) {
      cfg.sigma_u2.push_back(parse_double("sigma_u2", item, e->line));
    }
  }
  if (const RawEntry* e = get("sigma_v2")) {
    for (const std::string& item : split_list(e->value)) {
      cfg.sigma_v2.push_back(parse_double("sigma_v2", item, e->line));
    }
  }
  if (const RawEntry* e = get("sigma_eps2")) {
    cfg.sigma_eps2 = parse_double("sigma_eps2", e->value, e->line);
  }
  if (const RawEntry* e = get("p")) {
    cfg.p = static_cast<int>(parse_long("p", e->value, e->line));
  }
  if (const RawEntry* e = get("m")) {
    cfg.m = static_cast<int>(parse_long("m", e->value, e->line));
  }
  if (const RawEntry* e = get("reps")) {
    cfg.reps = static_cast<int>(parse_long("reps", e->value, e->line));
  }
  if (const RawEntry* e = get("seed")) {
    cfg.seed = static_cast<std::uint64_t>(parse_long("seed", e->value, e->line));
  }
  if (const RawEntry* e = get("theta_lo")) {
    cfg.theta_lo = parse_double("theta_lo", e->value, e->line);
  }
  if (const RawEntry* e = get("theta_hi")) {
    cfg.theta_hi = parse_double("theta_hi", e->value, e->line);
  }
  if (const RawEntry* e = get("gss_iters")) {
    cfg.gss_iters = static_cast<int>(parse_long("gss_iters", e->value, e->line));
  }
  if (const RawEntry* e = get("out_dir")) cfg.out_dir = e->value;
  if (const RawEntry* e = get("threads")) {
    cfg.threads = static_cast<int>(parse_long("threads", e->value, e->line));
  }
  if (const RawEntry* e = get("low_csv")) cfg.low_csv = e->value;
  if (const RawEntry* e = get("high_csv")) cfg.high_csv = e->value;

  // Cross-field validation, naming the offending field.
  auto require = [&](bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ConfigError("config: field '" + field + "' " + why);
  };

  require(!(cfg.theta_lo <= 1.0), "theta_lo", "must exceed 1");
  require(cfg.theta_hi > cfg.theta_lo, "theta_hi", "must exceed theta_lo");
  require(cfg.gss_iters >= 1, "gss_iters", "must be >= 1");
  require(cfg.p >= 0, "p", "must be >= 0");
  require(cfg.m >= 1, "m", "must be >= 1");
  require(cfg.threads >= 0, "threads", "must be >= 0");
  for (double th : cfg.theta) require(th > 1.0, "theta", "values must exceed 1");
  for (double v : cfg.sigma_u2) require(v >= 0.0, "sigma_u2", "values must be >= 0");
  for (double v : cfg.sigma_v2) require(v >= 0.0, "sigma_v2", "values must be >= 0");
  require(cfg.sigma_eps2 > 0.0, "sigma_eps2", "must be > 0");

  if (cfg.mode == RunMode::kSimulate || cfg.mode == RunMode::kDiagnose) {
    require(!cfg.T.empty(), "T", "is required");
    require(!cfg.jmax.empty(), "jmax", "is required");
    require(!cfg.theta.empty(), "theta", "is required");
    require(!cfg.sigma_u2.empty(), "sigma_u2", "is required");
    require(!cfg.sigma_v2.empty(), "sigma_v2", "is required");
    require(cfg.seed.has_value(), "seed", "is required in simulate/diagnose modes");
    require(cfg.reps >= 1, "reps", "must be >= 1");
    for (int t : cfg.T) require(t >= 4, "T", "values must be >= 4");
    for (int j : cfg.jmax) require(j >= 1, "jmax", "values must be >= 1");
    require(cfg.low_csv.empty() && cfg.high_csv.empty(), "low_csv",
            "is only valid in fit mode");
  } else {
    require(!cfg.low_csv.empty(), "low_csv", "is required in fit mode");
    require(!cfg.high_csv.empty(), "high_csv", "is required in fit mode");
    require(cfg.jmax.size() == 1, "jmax", "must be a single value in fit mode");
    require(cfg.sigma_u2.size() <= 1, "sigma_u2", "must be a single value in fit mode");
    require(cfg.sigma_v2.size() <= 1, "sigma_v2", "must be a single value in fit mode");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_config(buffer.str());
}

std::vector<Scenario> expand_grid(const RunConfig& cfg) {
  std::vector<Scenario> grid;
  for (int t : cfg.T) {
    for (int jmax : cfg.jmax) {
      for (double theta : cfg.theta) {
        for (double su : cfg.sigma_u2) {
          for (double sv : cfg.sigma_v2) {
            Scenario sc;
            sc.T = t;
            sc.jmax = jmax;
            sc.theta2 = theta;
            sc.sigma_u2 = su;
            sc.sigma_v2 = sv;
            sc.p = cfg.p;
            sc.m = cfg.m;
            sc.reps = cfg.reps;
            sc.master_seed = cfg.seed.value_or(0);
            sc.sigma_eps2 = cfg.sigma_eps2;
            sc.search = SearchConfig{cfg.theta_lo, cfg.theta_hi, cfg.gss_iters};
            grid.push_back(sc);
          }
        }
      }
    }
  }
  return grid;
}

}  // namespace midas
