#include "poikit/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "poikit/csv.hpp"

namespace poikit {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out))
    throw ConfigError("config key '" + key + "': bad number '" + value + "'");
  return out;
}

}  // namespace

void validate(const PipelineConfig& cfg) {
  auto positive = [](const char* name, double v) {
    if (!std::isfinite(v) || v <= 0.0)
      throw ConfigError(std::string(name) + " must be strictly positive");
  };
  positive("theta_t_min_stay", cfg.theta_t_min_stay);
  positive("theta_t_gap", cfg.theta_t_gap);
  positive("theta_d_valid", cfg.theta_d_valid);
  positive("theta_l_eps_cap", cfg.theta_l_eps_cap);
  positive("th_g", cfg.th_g);
  positive("th_n", cfg.th_n);
  positive("th_l", cfg.th_l);
  positive("slot_len", static_cast<double>(cfg.slot_len));
  positive("earth_radius", cfg.earth_radius);
  positive("label_margin_warn", cfg.label_margin_warn);
  positive("noise_window", static_cast<double>(cfg.noise_window));
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  PipelineConfig cfg;
  std::map<std::string, std::function<void(double)>> setters = {
      {"theta_t_min_stay", [&](double v) { cfg.theta_t_min_stay = v; }},
      {"theta_t_gap", [&](double v) { cfg.theta_t_gap = v; }},
      {"theta_d_valid", [&](double v) { cfg.theta_d_valid = v; }},
      {"theta_l_eps_cap", [&](double v) { cfg.theta_l_eps_cap = v; }},
      {"th_g", [&](double v) { cfg.th_g = v; }},
      {"th_n", [&](double v) { cfg.th_n = v; }},
      {"th_l", [&](double v) { cfg.th_l = v; }},
      {"slot_len", [&](double v) { cfg.slot_len = static_cast<std::int64_t>(v); }},
      {"earth_radius", [&](double v) { cfg.earth_radius = v; }},
      {"label_margin_warn", [&](double v) { cfg.label_margin_warn = v; }},
      {"noise_window", [&](double v) { cfg.noise_window = static_cast<std::int64_t>(v); }},
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown config key '" + key + "'");
    it->second(parse_number(key, value));
  }

  validate(cfg);
  return cfg;
}

std::string config_to_text(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "theta_t_min_stay = " << io::format_double(cfg.theta_t_min_stay) << "\n"
      << "theta_t_gap = " << io::format_double(cfg.theta_t_gap) << "\n"
      << "theta_d_valid = " << io::format_double(cfg.theta_d_valid) << "\n"
      << "theta_l_eps_cap = " << io::format_double(cfg.theta_l_eps_cap) << "\n"
      << "th_g = " << io::format_double(cfg.th_g) << "\n"
      << "th_n = " << io::format_double(cfg.th_n) << "\n"
      << "th_l = " << io::format_double(cfg.th_l) << "\n"
      << "slot_len = " << cfg.slot_len << "\n"
      << "earth_radius = " << io::format_double(cfg.earth_radius) << "\n"
      << "label_margin_warn = " << io::format_double(cfg.label_margin_warn) << "\n"
      << "noise_window = " << cfg.noise_window << "\n";
  return out.str();
}

}  // namespace poikit
