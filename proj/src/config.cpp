#include "viscotherm/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace viscotherm {

std::string ConfigError::format(const std::string& what, int line, const std::string& key) {
  std::ostringstream out;
  out << "config";
  if (line > 0) out << " line " << line;
  if (!key.empty()) out << " key '" << key << "'";
  out << ": " << what;
  return out.str();
}

namespace {

int line_of(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  return m.is_null() ? 0 : m.line + 1;
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError("expected a scalar value", line_of(node), key);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("cannot read value '" + node.Scalar() + "'", line_of(node), key);
  }
}

double number(const YAML::Node& node, const std::string& key) {
  const double v = scalar<double>(node, key);
  if (!std::isfinite(v)) throw ConfigError("value is not finite", line_of(node), key);
  return v;
}

std::vector<double> number_list(const YAML::Node& node, const std::string& key) {
  std::vector<double> out;
  if (node.IsScalar()) {
    out.push_back(number(node, key));
  } else if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(number(item, key));
  } else {
    throw ConfigError("expected a number or a list of numbers", line_of(node), key);
  }
  return out;
}

std::vector<std::string> string_list(const YAML::Node& node, const std::string& key) {
  std::vector<std::string> out;
  if (node.IsScalar()) {
    out.push_back(node.Scalar());
  } else if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(scalar<std::string>(item, key));
  } else {
    throw ConfigError("expected a name or a list of names", line_of(node), key);
  }
  return out;
}

using Handler = std::function<void(const YAML::Node& value, const std::string& key)>;

// Applies handlers to a mapping section; keys with no handler go to `other` when given,
// and are errors otherwise.
void each_key(const YAML::Node& section, const std::string& name,
              const std::map<std::string, Handler>& handlers, const Handler& other = {}) {
  if (!section.IsMap()) throw ConfigError("section must be a mapping", line_of(section), name);
  for (const auto& kv : section) {
    const std::string key = kv.first.Scalar();
    const std::string path = name + "." + key;
    auto it = handlers.find(key);
    if (it != handlers.end()) {
      it->second(kv.second, path);
    } else if (other) {
      other(kv.second, path);
    } else {
      throw ConfigError("unknown key", line_of(kv.first), path);
    }
  }
}

std::string leaf(const std::string& path) { return path.substr(path.rfind('.') + 1); }

void check_exponents(RunConfig& cfg) {
  for (double p : cfg.diagnostics.p) {
    if (!(p > 0.0 && p < 1.0)) {
      cfg.warnings.push_back("estimate exponent p = " + std::to_string(p) + " outside (0, 1)");
    }
  }
  for (double q : cfg.diagnostics.q) {
    if (!(q > 0.0 && q < 3.0)) {
      cfg.warnings.push_back("estimate exponent q = " + std::to_string(q) + " outside (0, 3)");
    }
  }
  for (double r : cfg.diagnostics.r) {
    if (!(r >= 1.0 && r < 1.5)) {
      cfg.warnings.push_back("estimate exponent r = " + std::to_string(r) + " outside [1, 3/2)");
    }
  }
}

RunConfig from_yaml(const YAML::Node& root) {
  RunConfig cfg;
  if (!root || root.IsNull()) return cfg;
  if (!root.IsMap()) throw ConfigError("top level must be a mapping", line_of(root), "");

  std::map<std::string, int> section_line;
  std::map<std::string, Handler> top;
  top["grid"] = [&](const YAML::Node& s, const std::string& name) {
    each_key(s, name, {
      {"L", [&](const YAML::Node& v, const std::string& k) { cfg.grid.length = number(v, k); }},
      {"n_nodes", [&](const YAML::Node& v, const std::string& k) { cfg.grid.n_nodes = scalar<int>(v, k); }},
    });
  };
  top["coefficients"] = [&](const YAML::Node& s, const std::string& name) {
    each_key(s, name,
             {{"preset", [&](const YAML::Node& v, const std::string& k) {
                 cfg.coefficients.presets = string_list(v, k);
               }}},
             [&](const YAML::Node& v, const std::string& k) {
               cfg.coefficients.params[leaf(k)] = number(v, k);
             });
  };
  top["initial"] = [&](const YAML::Node& s, const std::string& name) {
    each_key(s, name,
             {{"preset", [&](const YAML::Node& v, const std::string& k) {
                 cfg.initial.preset = scalar<std::string>(v, k);
               }},
              {"smoothing", [&](const YAML::Node& v, const std::string& k) {
                 cfg.initial.smoothing = number(v, k);
               }}},
             [&](const YAML::Node& v, const std::string& k) {
               cfg.initial.params[leaf(k)] = number(v, k);
             });
  };
  top["step"] = [&](const YAML::Node& s, const std::string& name) {
    StepConfig& st = cfg.step;
    each_key(s, name, {
      {"dt", [&](const YAML::Node& v, const std::string& k) { st.dt = number(v, k); }},
      {"epsilon", [&](const YAML::Node& v, const std::string& k) { st.epsilon = number(v, k); }},
      {"t_end", [&](const YAML::Node& v, const std::string& k) { st.t_end = number(v, k); }},
      {"theta_clip", [&](const YAML::Node& v, const std::string& k) { st.theta_clip = scalar<bool>(v, k); }},
      {"record_every", [&](const YAML::Node& v, const std::string& k) { st.record_every = scalar<int>(v, k); }},
      {"picard_iters", [&](const YAML::Node& v, const std::string& k) { st.picard_iters = scalar<int>(v, k); }},
    });
  };
  top["diagnostics"] = [&](const YAML::Node& s, const std::string& name) {
    DiagnosticsConfig& d = cfg.diagnostics;
    each_key(s, name, {
      {"energy", [&](const YAML::Node& v, const std::string& k) { d.energy = scalar<bool>(v, k); }},
      {"identity", [&](const YAML::Node& v, const std::string& k) { d.identity = scalar<bool>(v, k); }},
      {"estimates", [&](const YAML::Node& v, const std::string& k) { d.estimates = scalar<bool>(v, k); }},
      {"p", [&](const YAML::Node& v, const std::string& k) { d.p = number_list(v, k); }},
      {"q", [&](const YAML::Node& v, const std::string& k) { d.q = number_list(v, k); }},
      {"r", [&](const YAML::Node& v, const std::string& k) { d.r = number_list(v, k); }},
      {"weak_residuals", [&](const YAML::Node& v, const std::string& k) { d.weak_residuals = scalar<bool>(v, k); }},
      {"localized", [&](const YAML::Node& v, const std::string& k) { d.localized = scalar<bool>(v, k); }},
      {"zeta_t0", [&](const YAML::Node& v, const std::string& k) { d.zeta_t0 = number(v, k); }},
      {"zeta_t1", [&](const YAML::Node& v, const std::string& k) { d.zeta_t1 = number(v, k); }},
    });
  };
  top["sweep"] = [&](const YAML::Node& s, const std::string& name) {
    SweepConfig sw;
    each_key(s, name, {
      {"epsilons", [&](const YAML::Node& v, const std::string& k) { sw.epsilons = number_list(v, k); }},
      {"q", [&](const YAML::Node& v, const std::string& k) { sw.q = number(v, k); }},
    });
    cfg.sweep = sw;
  };
  top["refine"] = [&](const YAML::Node& s, const std::string& name) {
    RefinementConfig& r = cfg.refine;
    each_key(s, name, {
      {"levels", [&](const YAML::Node& v, const std::string& k) { r.levels = scalar<int>(v, k); }},
      {"n0", [&](const YAML::Node& v, const std::string& k) { r.n0 = scalar<int>(v, k); }},
      {"dt0", [&](const YAML::Node& v, const std::string& k) { r.dt0 = number(v, k); }},
      {"dt_ratio", [&](const YAML::Node& v, const std::string& k) { r.dt_ratio = number(v, k); }},
      {"t_end", [&](const YAML::Node& v, const std::string& k) { r.t_end = number(v, k); }},
      {"epsilon", [&](const YAML::Node& v, const std::string& k) { r.epsilon = number(v, k); }},
    });
  };
  top["output"] = [&](const YAML::Node& s, const std::string& name) {
    OutputConfig& o = cfg.output;
    each_key(s, name, {
      {"dir", [&](const YAML::Node& v, const std::string& k) { o.dir = scalar<std::string>(v, k); }},
      {"states_stride", [&](const YAML::Node& v, const std::string& k) { o.states_stride = scalar<int>(v, k); }},
      {"plots", [&](const YAML::Node& v, const std::string& k) { o.plots = scalar<bool>(v, k); }},
    });
  };
  top["seed"] = [&](const YAML::Node& v, const std::string& k) {
    cfg.seed = scalar<std::uint64_t>(v, k);
  };

  for (const auto& kv : root) {
    const std::string key = kv.first.Scalar();
    auto it = top.find(key);
    if (it == top.end()) throw ConfigError("unknown section", line_of(kv.first), key);
    section_line[key] = line_of(kv.first);
    it->second(kv.second, key);
  }

  // Semantic validation, reported against the section that carries the value.
  auto at = [&](const char* section) {
    auto it = section_line.find(section);
    return it == section_line.end() ? 0 : it->second;
  };
  try {
    cfg.make_grid();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), at("grid"), "grid");
  }
  Coefficients coeffs;
  try {
    coeffs = cfg.make_coefficients();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), at("coefficients"), "coefficients");
  }
  const BoundCheck bounds = check_bounds(coeffs);
  if (!bounds.ok()) {
    throw ConfigError("coefficient bounds fail on the test lattice", at("coefficients"),
                      "coefficients");
  }
  try {
    cfg.make_initial(cfg.make_grid()).validate(cfg.make_grid());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), at("initial"), "initial");
  }
  try {
    cfg.step.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), at("step"), "step");
  }
  if (cfg.output.states_stride < 1) {
    throw ConfigError("states_stride must be >= 1", at("output"), "output.states_stride");
  }
  if (!(cfg.diagnostics.zeta_t0 >= 0.0 && cfg.diagnostics.zeta_t1 > cfg.diagnostics.zeta_t0)) {
    throw ConfigError("need 0 <= zeta_t0 < zeta_t1", at("diagnostics"), "diagnostics.zeta_t1");
  }
  if (coeffs.alpha_warning()) {
    cfg.warnings.push_back("growth exponent alpha = " + std::to_string(coeffs.alpha) +
                           " >= 3/2 (outside the existence theory)");
  }
  check_exponents(cfg);
  return cfg;
}

}  // namespace

Grid RunConfig::make_grid() const { return viscotherm::make_grid(grid.length, grid.n_nodes); }

Coefficients RunConfig::make_coefficients() const {
  return coefficient_presets(coefficients.presets, coefficients.params);
}

InitialData RunConfig::make_initial(const Grid& g) const {
  InitialData data = initial_preset(initial.preset, g, initial.params, seed);
  if (initial.smoothing > 0.0) data = smooth_initial_data(data, g, initial.smoothing);
  return data;
}

RunConfig parse_config_string(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.is_null() ? 0 : e.mark.line + 1, "");
  }
  return from_yaml(root);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string(), 0, "");
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config_string(buf.str());
  cfg.source = path.string();
  return cfg;
}

}  // namespace viscotherm
