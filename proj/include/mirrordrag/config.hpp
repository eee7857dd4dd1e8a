#pragma once

// Run configuration: flat "key = value" text with '#' comments and at most
// one [model] section. Keys inside the section are stored as "model.<key>".
//
//   temperature = 1.0
//   hbar = 1.0          # optional unit system, natural units by default
//   [model]
//   kind = rational
//   r_num = 0, -0.1     # ascending powers of i*omega
//
// Lists are comma separated. Duplicate keys and other sections are errors.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mirrordrag/models.hpp"
#include "mirrordrag/physics.hpp"
#include "mirrordrag/quadrature.hpp"

namespace mirrordrag {

class Config {
 public:
  Config() = default;

  // `origin` names the source in error messages.
  static Config parse(std::string_view text, std::string origin = "<string>");
  static Config load_file(const std::filesystem::path& path);

  // Directory of the loaded file; relative paths in values resolve against it.
  const std::filesystem::path& base_directory() const { return base_; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  // Replaces or adds a value, as a command-line override would.
  void set(const std::string& key, std::string value);

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_count(const std::string& key) const;
  std::size_t get_count(const std::string& key, std::size_t fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  std::filesystem::path get_path(const std::string& key) const;

  std::vector<std::string> keys() const;

 private:
  std::map<std::string, std::string> values_;
  std::string origin_ = "<string>";
  std::filesystem::path base_;
};

// hbar and c keys, defaulting to natural units.
UnitSystem units_from_config(const Config& cfg);

// rel_tol, abs_tol and max_subdivisions keys over the library defaults.
QuadratureConfig quadrature_from_config(const Config& cfg);

// Builds the [model] section. Parameters are given in the configured units:
// tau0 is a time and rational coefficients multiply powers of i*omega in user
// frequency units. Without a [model] section, or without a kind, the model is
// the lorentzian mirror with tau0 = 1.
std::unique_ptr<MirrorModel> model_from_config(const Config& cfg, const UnitSystem& units);

}  // namespace mirrordrag
