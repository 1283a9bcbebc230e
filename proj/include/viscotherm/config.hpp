#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "viscotherm/coefficients.hpp"
#include "viscotherm/convergence.hpp"
#include "viscotherm/state.hpp"
#include "viscotherm/stepper.hpp"

namespace viscotherm {

/// Raised for schema violations; `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line, std::string key)
      : std::runtime_error(format(what, line, key)), line_(line), key_(std::move(key)) {}
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  static std::string format(const std::string& what, int line, const std::string& key);
  int line_;
  std::string key_;
};

struct GridConfig {
  double length = 3.14159265358979323846;
  int n_nodes = 401;
};

struct CoefficientConfig {
  std::vector<std::string> presets{"rational-visc", "linear-dilation"};
  PresetParams params;
};

struct InitialConfig {
  std::string preset = "sine-mode";
  InitialParams params;
  double smoothing = 0.0;  // Gaussian width in nodes; 0 disables
};

struct DiagnosticsConfig {
  bool energy = true;
  bool identity = true;
  bool estimates = true;
  std::vector<double> p{0.5};
  std::vector<double> q{2.0};
  std::vector<double> r{1.2};
  bool weak_residuals = true;
  bool localized = true;
  double zeta_t0 = 0.5;
  double zeta_t1 = 0.9;
};

struct SweepConfig {
  std::vector<double> epsilons{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  double q = 2.0;
};

struct OutputConfig {
  std::string dir = "out";
  int states_stride = 100;  // write every states_stride-th recorded state (and the last)
  bool plots = true;
};

struct RunConfig {
  GridConfig grid;
  CoefficientConfig coefficients;
  InitialConfig initial;
  StepConfig step;
  DiagnosticsConfig diagnostics;
  std::optional<SweepConfig> sweep;
  RefinementConfig refine;
  OutputConfig output;
  std::uint64_t seed = 0;
  /// Non-fatal findings (alpha threshold, exponent ranges, ...), copied into the manifest.
  std::vector<std::string> warnings;
  std::string source;  // path the config was read from, empty for defaults

  Grid make_grid() const;
  Coefficients make_coefficients() const;
  InitialData make_initial(const Grid& grid) const;
};

/// Reads a YAML file of flat sections (grid, coefficients, initial, step, diagnostics,
/// sweep, refine, output, seed). Unknown keys and invalid values raise ConfigError naming
/// the line and key; missing values take the RunConfig defaults.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_string(const std::string& text);

}  // namespace viscotherm
