#pragma once

// Run configuration shared by the CLI subcommands, plus config-file
// loading.  JSON is supported in full; TOML in the flat subset documented
// in the README (key = value pairs, [section] headers flattened to dotted
// keys, strings, numbers, booleans and one-line arrays).

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bcglpm/engine.hpp"
#include "bcglpm/errors.hpp"
#include "bcglpm/io.hpp"

namespace bcglpm {

struct RunConfig {
  FitConfig fit;
  std::string input_path;
  std::string out_dir;
  std::vector<std::string> market_cols;
  bool log_rv = true;
  long window_len = 252;
  long step = 21;
  int jobs = 1;

  void validate_market_cols() const {
    // endogenous/market disjointness holds by construction (split_market
    // removes the named columns), but duplicates in the list are an error
    for (std::size_t i = 0; i < market_cols.size(); ++i) {
      for (std::size_t j = i + 1; j < market_cols.size(); ++j) {
        if (market_cols[i] == market_cols[j]) {
          throw validation_error("duplicate market column: " + market_cols[i]);
        }
      }
    }
  }
};

namespace detail {

// Minimal TOML reader for flat configs; parses into a JSON object so the
// application code below is shared with the JSON path.
inline nlohmann::json parse_toml_subset(const std::string& text,
                                        const std::string& path) {
  nlohmann::json doc = nlohmann::json::object();
  std::string prefix;
  std::istringstream in(text);
  std::string raw;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    // strip comments outside strings
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_str = !in_str;
      if (line[i] == '#' && !in_str) {
        line = line.substr(0, i);
        break;
      }
    }
    line = strip(line);
    if (line.empty()) continue;
    const std::string where = path + " line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw validation_error(where + ": bad section");
      prefix = strip(line.substr(1, line.size() - 2));
      if (!prefix.empty()) prefix += ".";
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw validation_error(where + ": expected key = value");
    }
    const std::string key = prefix + strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (value.empty()) throw validation_error(where + ": empty value");

    auto parse_scalar = [&](const std::string& v) -> nlohmann::json {
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        return v.substr(1, v.size() - 2);
      }
      if (v == "true") return true;
      if (v == "false") return false;
      try {
        if (v.find_first_of(".eE") == std::string::npos) {
          return static_cast<std::int64_t>(std::stoll(v));
        }
        return std::stod(v);
      } catch (const std::exception&) {
        throw validation_error(where + ": cannot parse value '" + v + "'");
      }
    };

    if (value.front() == '[') {
      if (value.back() != ']') throw validation_error(where + ": bad array");
      nlohmann::json arr = nlohmann::json::array();
      std::string body = value.substr(1, value.size() - 2);
      std::string item;
      std::istringstream items(body);
      while (std::getline(items, item, ',')) {
        item = strip(item);
        if (!item.empty()) arr.push_back(parse_scalar(item));
      }
      doc[key] = arr;
    } else {
      doc[key] = parse_scalar(value);
    }
  }
  return doc;
}

inline std::vector<double> to_double_vector(const nlohmann::json& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.get<double>());
  return out;
}

inline std::vector<std::string> to_string_vector(const nlohmann::json& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.get<std::string>());
  return out;
}

}  // namespace detail

// Applies config-file values over the current settings (documented
// precedence: defaults < flags < config file).
inline void apply_config_json(RunConfig& config, const nlohmann::json& doc) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "mode") config.fit.mode = model_mode_from_string(value.get<std::string>());
    else if (key == "iters" || key == "n_iter") config.fit.n_iter = value.get<long>();
    else if (key == "burnin" || key == "burn_in") config.fit.burn_in = value.get<long>();
    else if (key == "chains" || key == "n_chains") config.fit.n_chains = value.get<int>();
    else if (key == "v0") config.fit.v0 = value.get<double>();
    else if (key == "h") config.fit.h = value.get<double>();
    else if (key == "theta0") config.fit.theta0 = value.get<double>();
    else if (key == "tau_theta_sq") config.fit.tau_theta_sq = value.get<double>();
    else if (key == "tau_lambda_sq") config.fit.tau_lambda_sq = value.get<double>();
    else if (key == "ridge_grid") config.fit.ridge_grid = detail::to_double_vector(value);
    else if (key == "ridge_split") config.fit.ridge_split = value.get<double>();
    else if (key == "ridge_tol") config.fit.ridge_tol = value.get<double>();
    else if (key == "standardize") config.fit.standardize = value.get<bool>();
    else if (key == "random_column_order") config.fit.random_column_order = value.get<bool>();
    else if (key == "thin") config.fit.thin = value.get<long>();
    else if (key == "seed") config.fit.seed = value.get<std::uint64_t>();
    else if (key == "align_to_last") config.fit.align_to_last = value.get<bool>();
    else if (key == "input") config.input_path = value.get<std::string>();
    else if (key == "out") config.out_dir = value.get<std::string>();
    else if (key == "market_cols") config.market_cols = detail::to_string_vector(value);
    else if (key == "log_rv") config.log_rv = value.get<bool>();
    else if (key == "window") config.window_len = value.get<long>();
    else if (key == "step") config.step = value.get<long>();
    else if (key == "jobs") config.jobs = value.get<int>();
    else throw validation_error("config: unknown key '" + key + "'");
  }
}

inline void load_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  nlohmann::json doc;
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "json") {
    doc = nlohmann::json::parse(text, nullptr, true, true);
    if (!doc.is_object()) throw validation_error(path + ": expected a JSON object");
  } else if (ext == "toml") {
    doc = detail::parse_toml_subset(text, path);
  } else {
    throw validation_error(path + ": config must end in .json or .toml");
  }
  apply_config_json(config, doc);
}

}  // namespace bcglpm
