#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "risd2d/core.hpp"
#include "risd2d/params.hpp"
#include "risd2d/sinr_approx.hpp"

namespace risd2d::experiment {

using nlohmann::json;

struct SweepAxis {
  std::string path;  // e.g. "system.p_s_max"
  std::string unit;  // "linear" or "db" (values already converted at load)
  std::vector<double> values;
};

struct FixedLink {
  double d_sr = 1.5;
  double d_rd = 1.5;
};

struct ExperimentConfig {
  SystemParams system;
  Topology topology;
  std::optional<double> placement;  // RIS coordinate; empty means optimal placement
  std::optional<FixedLink> fixed_link;  // pins d_sr, d_rd and bypasses the topology
  std::vector<SweepAxis> sweep;
  std::optional<MomentMode> moment_mode;  // empty means automatic by M
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  json normalized;  // linear-unit view used for the config hash
};

namespace detail {

inline double number_at(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.get<double>();
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Strips an optional "_db" suffix. The value is converted to linear exactly here.
inline std::pair<std::string, double> linear_entry(const std::string& key, const json& v) {
  const double x = number_at(v, key);
  if (ends_with(key, "_db")) return {key.substr(0, key.size() - 3), db_to_linear(x)};
  return {key, x};
}

inline int as_count(double v, const std::string& key) {
  if (!(v >= 0.0) || std::floor(v) != v || v > 1e9) throw ConfigError("'" + key + "' must be a non-negative integer");
  return static_cast<int>(v);
}

}  // namespace detail

// Assigns a linear-unit value to a parameter path. Throws ConfigError for
// unknown paths so sweeps never silently target nothing.
inline void set_parameter(ExperimentConfig& c, const std::string& path, double v) {
  auto& s = c.system;
  auto& t = c.topology;
  if (path == "system.n_elements") s.n_elements = detail::as_count(v, path);
  else if (path == "system.element_amplitude") s.element_amplitude = v;
  else if (path == "system.n_antennas") s.n_antennas = detail::as_count(v, path);
  else if (path == "system.p_s_max") s.p_s_max = v;
  else if (path == "system.p_b") s.p_b = v;
  else if (path == "system.noise_power") s.noise_power = v;
  else if (path == "system.path_loss_exponent") s.path_loss_exponent = v;
  else if (path == "system.ref_distance") s.ref_distance = v;
  else if (path == "system.ref_path_loss") s.ref_path_loss = v;
  else if (path == "system.sinr_threshold") s.sinr_threshold = v;
  else if (path == "system.interference_threshold") s.interference_threshold = v;
  else if (path == "system.d_bd") s.d_bd = v;
  else if (path == "system.d_sc") s.d_sc = v;
  else if (path == "system.d_sd" || path == "topology.d_sd") s.d_sd = t.d_sd = v;
  else if (path == "topology.y") t.y = v;
  else if (path == "topology.eccentricity") t.eccentricity = v;
  else if (path == "topology.min_separation") t.min_separation = v;
  else if (path == "placement.d") c.placement = v;
  else throw ConfigError("unknown parameter path '" + path + "'");
}

inline ExperimentConfig parse_config(const json& root) {
  if (!root.is_object()) throw ConfigError("config root must be an object");
  ExperimentConfig c;
  json norm = json::object();
  for (const auto& [key, val] : root.items()) {
    if (key == "system") {
      if (!val.is_object()) throw ConfigError("'system' must be an object");
      std::optional<double> rate;
      bool has_threshold = false;
      for (const auto& [k, v] : val.items()) {
        if (k == "apply_ref_loss_local" || k == "apply_ref_loss_long" || k == "direct_link") {
          if (!v.is_boolean()) throw ConfigError("'" + k + "' must be a boolean");
          const bool b = v.get<bool>();
          if (k == "apply_ref_loss_local") c.system.apply_ref_loss_local = b;
          else if (k == "apply_ref_loss_long") c.system.apply_ref_loss_long = b;
          else c.system.direct_link = b;
          norm["system"][k] = b;
          continue;
        }
        if (k == "rate_threshold") {
          rate = detail::number_at(v, k);
          norm["system"][k] = *rate;
          continue;
        }
        const auto [name, lin] = detail::linear_entry(k, v);
        if (norm.contains("system") && norm["system"].contains(name))
          throw ConfigError("'" + name + "' given twice (linear and dB)");
        if (name == "sinr_threshold") has_threshold = true;
        set_parameter(c, "system." + name, lin);
        norm["system"][name] = lin;
      }
      if (rate) {
        const double from_rate = sinr_threshold_from_rate(*rate);
        if (has_threshold && std::abs(from_rate - c.system.sinr_threshold) > 1e-9 * from_rate)
          throw ConfigError("sinr_threshold inconsistent with rate_threshold (2^R - 1)");
        c.system.sinr_threshold = from_rate;
        norm["system"]["sinr_threshold"] = from_rate;
      }
    } else if (key == "topology") {
      if (!val.is_object()) throw ConfigError("'topology' must be an object");
      for (const auto& [k, v] : val.items()) {
        if (k == "kind") {
          const auto s = v.get<std::string>();
          if (s == "parallel") c.topology.kind = TopologyKind::Parallel;
          else if (s == "elliptical") c.topology.kind = TopologyKind::Elliptical;
          else throw ConfigError("topology.kind must be 'parallel' or 'elliptical'");
          norm["topology"][k] = s;
        } else if (k == "fraunhofer") {
          const double f = detail::number_at(v.at("frequency_hz"), "frequency_hz");
          const double l = detail::number_at(v.at("aperture_m"), "aperture_m");
          c.topology.min_separation = fraunhofer_distance(f, l);
          norm["topology"]["min_separation"] = c.topology.min_separation;
        } else {
          const double x = detail::number_at(v, k);
          set_parameter(c, "topology." + k, x);
          norm["topology"][k] = x;
        }
      }
    } else if (key == "placement") {
      if (val.is_string() && val.get<std::string>() == "optimal") {
        c.placement.reset();
      } else {
        c.placement = detail::number_at(val, key);
      }
      norm[key] = val;
    } else if (key == "fixed_link") {
      if (val.is_null()) {
        c.fixed_link.reset();
      } else {
        FixedLink fl;
        for (const auto& [k, v] : val.items()) {
          if (k == "d_sr") fl.d_sr = detail::number_at(v, k);
          else if (k == "d_rd") fl.d_rd = detail::number_at(v, k);
          else throw ConfigError("unknown fixed_link key '" + k + "'");
        }
        if (!(fl.d_sr > 0.0 && fl.d_rd > 0.0)) throw ConfigError("fixed_link distances must be > 0");
        c.fixed_link = fl;
        norm[key] = {{"d_sr", fl.d_sr}, {"d_rd", fl.d_rd}};
      }
    } else if (key == "sweep") {
      if (!val.is_array()) throw ConfigError("'sweep' must be an array");
      for (const auto& ax : val) {
        SweepAxis a;
        a.path = ax.at("path").get<std::string>();
        a.unit = ax.value("unit", std::string("linear"));
        if (a.unit != "linear" && a.unit != "db") throw ConfigError("sweep unit must be 'linear' or 'db'");
        for (const auto& v : ax.at("values")) {
          const double x = detail::number_at(v, a.path);
          a.values.push_back(a.unit == "db" ? db_to_linear(x) : x);
        }
        if (a.values.empty()) throw ConfigError("sweep axis '" + a.path + "' has no values");
        ExperimentConfig probe = c;
        set_parameter(probe, a.path, a.values.front());  // path must resolve
        norm["sweep"].push_back({{"path", a.path}, {"values", a.values}});
        c.sweep.push_back(std::move(a));
      }
    } else if (key == "moment_mode") {
      const auto s = val.get<std::string>();
      if (s == "exact") c.moment_mode = MomentMode::ExactSum;
      else if (s == "gumbel") c.moment_mode = MomentMode::Gumbel;
      else if (s != "auto") throw ConfigError("moment_mode must be 'auto', 'exact' or 'gumbel'");
      norm[key] = s;
    } else if (key == "trials") {
      c.trials = val.get<std::uint64_t>();
      norm[key] = c.trials;
    } else if (key == "seed") {
      c.seed = val.get<std::uint64_t>();
      norm[key] = c.seed;
    } else if (key == "output_dir") {
      c.output_dir = val.get<std::string>();
    } else if (key == "description") {
      // free text, ignored
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  // The topology owns d_sd whenever both are given.
  if (root.contains("topology") && root["topology"].contains("d_sd")) c.system.d_sd = c.topology.d_sd;
  else c.topology.d_sd = c.system.d_sd;
  try {
    c.system.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid system parameters: ") + e.what());
  }
  c.normalized = std::move(norm);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  json root;
  try {
    root = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  try {
    return parse_config(root);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string config_hash(const ExperimentConfig& c) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a(c.normalized.dump());
  return os.str();
}

}  // namespace risd2d::experiment
