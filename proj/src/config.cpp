#include "mirrordrag/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mirrordrag/error.hpp"

namespace mirrordrag {

namespace {

constexpr std::string_view kModelPrefix = "model.";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(std::string_view key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
  });
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::config, msg); }

double parse_number(std::string_view text, const std::string& key) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    config_error("key '" + key + "': expected a finite number, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> user_to_natural_coefficients(std::vector<double> coeffs, double hbar) {
  // sum c_k (i w_user)^k with w_user = w / hbar
  double scale = 1.0;
  for (double& c : coeffs) {
    c *= scale;
    scale /= hbar;
  }
  return coeffs;
}

}  // namespace

Config Config::parse(std::string_view text, std::string origin) {
  Config cfg;
  cfg.origin_ = std::move(origin);
  std::string section;
  bool seen_model = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto where = [&] { return cfg.origin_ + ":" + std::to_string(line_no) + ": "; };
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_error(where() + "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (name != "model") config_error(where() + "unknown section [" + std::string(name) + "]");
      if (seen_model) config_error(where() + "[model] section given twice");
      seen_model = true;
      section = "model";
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) config_error(where() + "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!valid_key(key)) config_error(where() + "invalid key '" + std::string(key) + "'");
    if (value.empty()) config_error(where() + "empty value for '" + std::string(key) + "'");
    std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (!cfg.values_.emplace(full, std::string(value)).second) {
      config_error(where() + "duplicate key '" + full + "'");
    }
  }
  return cfg;
}

Config Config::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Config cfg = parse(buf.str(), path.string());
  cfg.base_ = path.parent_path();
  return cfg;
}

void Config::set(const std::string& key, std::string value) {
  const std::string_view bare =
      key.rfind(kModelPrefix, 0) == 0 ? std::string_view(key).substr(kModelPrefix.size()) : key;
  if (!valid_key(bare)) config_error("invalid key '" + key + "'");
  values_[key] = std::string(trim(value));
}

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) config_error(origin_ + ": missing required key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  return parse_number(get_string(key), key);
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::size_t Config::get_count(const std::string& key) const {
  const double v = get_double(key);
  if (v < 0.0 || v != std::floor(v) || v > 1e9) {
    config_error("key '" + key + "': expected a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

std::size_t Config::get_count(const std::string& key, std::size_t fallback) const {
  return has(key) ? get_count(key) : fallback;
}

std::vector<double> Config::get_list(const std::string& key) const {
  const std::string text = get_string(key);
  std::vector<double> out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_number(rest.substr(0, comma), key));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::filesystem::path Config::get_path(const std::string& key) const {
  std::filesystem::path p = get_string(key);
  if (p.is_relative() && !base_.empty()) p = base_ / p;
  return p;
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

UnitSystem units_from_config(const Config& cfg) {
  const double hbar = cfg.get_double("hbar", 1.0);
  const double c = cfg.get_double("c", 1.0);
  if (!(hbar > 0.0) || !(c > 0.0)) config_error("hbar and c must be positive");
  return UnitSystem(hbar, c);
}

QuadratureConfig quadrature_from_config(const Config& cfg) {
  QuadratureConfig q;
  q.rel_tol = cfg.get_double("rel_tol", q.rel_tol);
  q.abs_tol = cfg.get_double("abs_tol", q.abs_tol);
  q.max_subdivisions = cfg.get_count("max_subdivisions", q.max_subdivisions);
  try {
    q.check();
  } catch (const Error& e) {
    config_error(e.what());
  }
  return q;
}

std::unique_ptr<MirrorModel> model_from_config(const Config& cfg, const UnitSystem& units) {
  static const std::set<std::string> known = {"model.kind",  "model.tau0",  "model.r_num",
                                              "model.r_den", "model.s_num", "model.s_den"};
  for (const auto& key : cfg.keys()) {
    if (key.rfind(kModelPrefix, 0) == 0 && known.count(key) == 0) {
      config_error("unknown model key '" + key.substr(kModelPrefix.size()) + "'");
    }
  }
  const std::string kind = cfg.get_string("model.kind", "lorentzian");
  const auto reject = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (cfg.has(std::string(kModelPrefix) + k)) {
        config_error("model key '" + std::string(k) + "' does not apply to kind '" + kind + "'");
      }
    }
  };
  if (kind == "perfect") {
    reject({"tau0", "r_num", "r_den", "s_num", "s_den"});
    return std::make_unique<PerfectMirror>();
  }
  if (kind == "lorentzian") {
    reject({"r_num", "r_den", "s_num", "s_den"});
    const double tau0 = cfg.get_double("model.tau0", 1.0);
    if (!(tau0 > 0.0)) config_error("model tau0 must be positive");
    return std::make_unique<LorentzianMirror>(units.to_natural(Quantity::time, tau0));
  }
  if (kind == "rational") {
    reject({"tau0"});
    RationalMirror::Coefficients c;
    c.r_num = user_to_natural_coefficients(cfg.get_list("model.r_num"), units.hbar());
    c.r_den = user_to_natural_coefficients(cfg.get_list("model.r_den"), units.hbar());
    c.s_num = user_to_natural_coefficients(cfg.get_list("model.s_num"), units.hbar());
    c.s_den = user_to_natural_coefficients(cfg.get_list("model.s_den"), units.hbar());
    try {
      return std::make_unique<RationalMirror>(std::move(c));
    } catch (const Error& e) {
      config_error(e.what());
    }
  }
  config_error("unknown model kind '" + kind + "' (expected lorentzian, perfect or rational)");
}

}  // namespace mirrordrag
