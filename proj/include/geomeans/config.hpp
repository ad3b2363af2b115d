#ifndef GEOMEANS_CONFIG_HPP
#define GEOMEANS_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "inversion.hpp"
#include "phantoms.hpp"
#include "spaces.hpp"

namespace geomeans {

/** \brief Malformed configuration; the message starts with the offending field path. */
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what) : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct GridConfig {
  std::size_t boundary_points = 0;  ///< 0: default for the dimension
  std::size_t t_points = 0;         ///< 0: default for the space
  int quadrature_order = 48;
  ReconGridSpec recon;
  double fd_step = 0.0;  ///< 0: 1e-2 times the chart radius
};

struct RunConfig {
  SpaceSpec space;
  Phantom phantom;
  GridConfig grids;
  Formula method = Formula::direct;
  HyperbolicWeight hyperbolic_weight = HyperbolicWeight::invariant;
  std::optional<double> alpha;
  std::uint64_t seed = 1;
};

/** \brief Boundary resolution used when the config leaves it open. */
inline std::size_t default_boundary_points(const SpaceSpec& s) {
  switch (s.n) {
    case 2: return 256;
    case 3: return 48;
    default: return 40;
  }
}

/** \brief t-grid size used when the config leaves it open. */
inline std::size_t default_t_points(const SpaceSpec& s) {
  if (s.n >= 4) return 128;
  if (s.kind == SpaceKind::euclidean) return s.n == 2 ? 800 : 400;
  return 600;
}

inline std::size_t boundary_points(const RunConfig& c) {
  return c.grids.boundary_points ? c.grids.boundary_points : default_boundary_points(c.space);
}

inline TGrid t_grid(const RunConfig& c) {
  return default_tgrid(c.space, c.grids.t_points ? c.grids.t_points : default_t_points(c.space));
}

inline InversionOptions inversion_options(const RunConfig& c) {
  InversionOptions o;
  o.formula = c.method;
  o.fd_step = c.grids.fd_step;
  o.hyperbolic_weight = c.hyperbolic_weight;
  return o;
}

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "." + key, "missing");
  return *it;
}

inline double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

inline std::size_t get_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline std::vector<double> get_vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

inline void reject_unknown(const json& j, const std::vector<std::string>& known, const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError(path + "." + it.key(), "unknown field");
}

inline SpaceKind parse_kind(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  const auto s = j.get<std::string>();
  if (s == "euclidean") return SpaceKind::euclidean;
  if (s == "sphere") return SpaceKind::sphere;
  if (s == "hyperbolic") return SpaceKind::hyperbolic;
  throw ConfigError(path, "expected one of euclidean, sphere, hyperbolic; got \"" + s + "\"");
}

}  // namespace detail

/**
 * \brief Parses a run configuration.
 *
 *   {"space": {"kind": "euclidean", "n": 2, "radius": 1.0},
 *    "phantom": [{"center": [0.2, 0.1], "radius": 0.5, "amplitude": 1.0}],
 *    "grids": {"boundary_points": 256, "t_points": 800, "quadrature_order": 48,
 *              "recon": {"points_per_axis": 41, "extent": 0.9, "offsets": []}, "fd_step": 0.01},
 *    "method": "direct", "alpha": 1.0, "seed": 1}
 *
 * Only "space" is required.  Bump centres are chart coordinates (n numbers) or
 * full points of the space; a missing phantom selects default_phantom.
 */
inline RunConfig parse_config(const nlohmann::json& j) {
  using namespace detail;
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  reject_unknown(j, {"space", "phantom", "grids", "method", "alpha", "seed", "hyperbolic_weight"}, "config");
  RunConfig c;
  {
    const json& s = require(j, "space", "config");
    reject_unknown(s, {"kind", "n", "radius"}, "config.space");
    c.space.kind = parse_kind(require(s, "kind", "config.space"), "config.space.kind");
    const json& n = require(s, "n", "config.space");
    if (!n.is_number_integer() || n.get<int>() < 2) throw ConfigError("config.space.n", "expected an integer >= 2");
    c.space.n = n.get<int>();
    c.space.radius = s.contains("radius") ? get_number(s["radius"], "config.space.radius") : 1.0;
    try {
      c.space.validate();
    } catch (const std::exception& e) {
      throw ConfigError("config.space", e.what());
    }
  }
  c.phantom.space = c.space;
  if (j.contains("phantom")) {
    const json& p = j["phantom"];
    if (!p.is_array() || p.empty()) throw ConfigError("config.phantom", "expected a non-empty array of bumps");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::string path = "config.phantom[" + std::to_string(i) + "]";
      reject_unknown(p[i], {"center", "radius", "amplitude"}, path);
      auto center = get_vector(require(p[i], "center", path), path + ".center");
      Bump b;
      if (center.size() == static_cast<std::size_t>(c.space.n) && c.space.kind != SpaceKind::euclidean) {
        if (std::sqrt(detail::norm2(center)) >= c.space.chart_radius())
          throw ConfigError(path + ".center", "chart point outside B");
        center = lift(c.space, center);
      }
      try {
        check_point(c.space, center);
      } catch (const std::exception& e) {
        throw ConfigError(path + ".center", e.what());
      }
      b.center = center;
      b.radius = get_number(require(p[i], "radius", path), path + ".radius");
      b.amplitude = p[i].contains("amplitude") ? get_number(p[i]["amplitude"], path + ".amplitude") : 1.0;
      c.phantom.bumps.push_back(b);
    }
  } else {
    try {
      c.phantom = default_phantom(c.space);
    } catch (const std::exception& e) {
      throw ConfigError("config.phantom", std::string("no default phantom fits this space: ") + e.what());
    }
  }
  try {
    validate(c.phantom);
  } catch (const std::exception& e) {
    throw ConfigError("config.phantom", e.what());
  }
  if (j.contains("grids")) {
    const json& g = j["grids"];
    reject_unknown(g, {"boundary_points", "t_points", "quadrature_order", "recon", "fd_step"}, "config.grids");
    if (g.contains("boundary_points")) c.grids.boundary_points = get_count(g["boundary_points"], "config.grids.boundary_points");
    if (g.contains("t_points")) {
      c.grids.t_points = get_count(g["t_points"], "config.grids.t_points");
      if (c.grids.t_points < 64) throw ConfigError("config.grids.t_points", "need at least 64 points");
    }
    if (g.contains("quadrature_order")) {
      const std::size_t o = get_count(g["quadrature_order"], "config.grids.quadrature_order");
      if (o < 1) throw ConfigError("config.grids.quadrature_order", "must be >= 1");
      c.grids.quadrature_order = static_cast<int>(o);
    }
    if (g.contains("fd_step")) {
      c.grids.fd_step = get_number(g["fd_step"], "config.grids.fd_step");
      if (!(c.grids.fd_step > 0.0)) throw ConfigError("config.grids.fd_step", "must be > 0");
    }
    if (g.contains("recon")) {
      const json& r = g["recon"];
      reject_unknown(r, {"points_per_axis", "extent", "offsets"}, "config.grids.recon");
      if (r.contains("points_per_axis")) {
        c.grids.recon.points_per_axis = get_count(r["points_per_axis"], "config.grids.recon.points_per_axis");
        if (c.grids.recon.points_per_axis < 2) throw ConfigError("config.grids.recon.points_per_axis", "must be >= 2");
      }
      if (r.contains("extent")) {
        c.grids.recon.extent = get_number(r["extent"], "config.grids.recon.extent");
        if (!(c.grids.recon.extent > 0.0 && c.grids.recon.extent < 1.0))
          throw ConfigError("config.grids.recon.extent", "must lie in (0, 1)");
      }
      if (r.contains("offsets")) c.grids.recon.offsets = get_vector(r["offsets"], "config.grids.recon.offsets");
    }
  }
  const std::size_t m = boundary_points(c);
  if (m < 4 || (c.space.n >= 3 && m % 2 != 0))
    throw ConfigError("config.grids.boundary_points", "need at least 4 points, and an even count for n >= 3");
  if (j.contains("method")) {
    const json& mj = j["method"];
    if (mj == "direct")
      c.method = Formula::direct;
    else if (mj == "modified")
      c.method = Formula::modified;
    else
      throw ConfigError("config.method", "expected \"direct\" or \"modified\"");
    if (c.method == Formula::modified && c.space.kind != SpaceKind::euclidean)
      throw ConfigError("config.method", "the modified formula exists only for the Euclidean space");
  }
  if (j.contains("hyperbolic_weight")) {
    const json& w = j["hyperbolic_weight"];
    if (w == "invariant")
      c.hyperbolic_weight = HyperbolicWeight::invariant;
    else if (w == "surface")
      c.hyperbolic_weight = HyperbolicWeight::surface;
    else
      throw ConfigError("config.hyperbolic_weight", "expected \"invariant\" or \"surface\"");
  }
  if (j.contains("alpha") && !j["alpha"].is_null()) {
    c.alpha = get_number(j["alpha"], "config.alpha");
    if (c.space.kind == SpaceKind::euclidean && *c.alpha < 0.5 * (1 - c.space.n))
      throw ConfigError("config.alpha", "must be >= (1-n)/2 for the Euclidean EPD trace");
    if (c.space.kind == SpaceKind::sphere && !(*c.alpha > 0.0))
      throw ConfigError("config.alpha", "spherical EPD traces need alpha > 0");
    if (c.space.kind == SpaceKind::hyperbolic) throw ConfigError("config.alpha", "no EPD trace for the hyperbolic space");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("config.seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  return c;
}

inline RunConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace geomeans

#endif
