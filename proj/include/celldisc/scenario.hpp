// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration and its key=value file format:
//
//   [scenario]
//   users = 1000
//   algorithm = edp
//   ...
//   [radio]
//   threshold_dbm = -73
//   [db]
//   db_range_m = 30
//
// Unknown sections or keys are rejected.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "celldisc/codebook.hpp"
#include "celldisc/geometry.hpp"
#include "celldisc/radio.hpp"
#include "celldisc/search.hpp"

namespace celldisc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DistributionKind { Uniform, Normal, RingNormal };

struct UserDistribution {
  DistributionKind kind{DistributionKind::Uniform};
  double sigma_m{100.0};
  double hole_radius_m{0.0};
};

struct ScenarioConfig {
  double width_m{450.0};
  double height_m{350.0};
  std::optional<Point2D> bs_pos;  // defaults to the area center
  std::size_t users{1000};
  UserDistribution distribution;
  double location_error_m{0.0};
  Algorithm algorithm{Algorithm::Edp};
  std::size_t edp_sectors{1};
  std::size_t obstacles{0};
  double obstacle_side_m{20.0};
  std::optional<std::vector<Obstacle>> obstacle_list;  // fixed layout instead of a random drop
  std::optional<bool> reflective_boundary;  // default: only when obstacles are present
  double db_range_m{0.0};
  std::string db_load;
  std::string db_save;
  std::uint64_t seed{1};
  std::size_t replications{1};
  std::size_t mt_beams{12};
  std::vector<double> codebook_widths{default_width_levels()};
  std::size_t analytic_samples{2000};
  LinkBudgetParams radio;

  Point2D bs() const { return bs_pos.value_or(Point2D{width_m / 2.0, height_m / 2.0}); }
  double sigma_loc() const { return location_error_m / 3.0; }
  double mt_width() const { return 2.0 * std::numbers::pi / static_cast<double>(mt_beams); }
  SequenceRequest sequence_request() const { return {algorithm, edp_sectors, mt_width()}; }
  bool has_obstacles() const { return obstacle_list ? !obstacle_list->empty() : obstacles > 0; }

  void validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (!(width_m > 0.0) || !(height_m > 0.0)) fail("area dimensions must be positive");
    if (location_error_m < 0.0) fail("location_error_m must be non-negative");
    if (distribution.kind != DistributionKind::Uniform && !(distribution.sigma_m > 0.0))
      fail("dist_sigma_m must be positive");
    if (distribution.hole_radius_m < 0.0) fail("hole_radius_m must be non-negative");
    if (edp_sectors < 1) fail("edp_sectors must be at least 1");
    if (!(obstacle_side_m > 0.0)) fail("obstacle_side_m must be positive");
    if (db_range_m < 0.0) fail("db_range_m must be non-negative");
    if (mt_beams < 1) fail("mt_beams must be at least 1");
    if (replications < 1) fail("replications must be at least 1");
    if (analytic_samples < 1) fail("analytic_samples must be at least 1");
    try {
      radio.validate();
      Codebook check(codebook_widths);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    const Point2D b = bs();
    if (b.x < 0.0 || b.x > width_m || b.y < 0.0 || b.y > height_m) fail("base station outside the area");
  }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': integer out of range");
  }
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("key '" + key + "': empty list item");
    out.push_back(parse_double(key, item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

}  // namespace detail

// Applies one key to the config. Keys are unique across sections.
inline void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value) {
  using namespace detail;
  auto d = [&] { return parse_double(key, value); };
  auto u = [&] { return static_cast<std::size_t>(parse_uint(key, value)); };
  if (key == "width_m") c.width_m = d();
  else if (key == "height_m") c.height_m = d();
  else if (key == "bs_x") c.bs_pos = Point2D{d(), c.bs().y};
  else if (key == "bs_y") c.bs_pos = Point2D{c.bs().x, d()};
  else if (key == "users") c.users = u();
  else if (key == "distribution") {
    if (value == "uniform") c.distribution.kind = DistributionKind::Uniform;
    else if (value == "normal") c.distribution.kind = DistributionKind::Normal;
    else if (value == "ring_normal") c.distribution.kind = DistributionKind::RingNormal;
    else throw ConfigError("key 'distribution': unknown kind '" + value + "'");
  } else if (key == "dist_sigma_m") c.distribution.sigma_m = d();
  else if (key == "hole_radius_m") c.distribution.hole_radius_m = d();
  else if (key == "location_error_m") c.location_error_m = d();
  else if (key == "algorithm") {
    try {
      c.algorithm = parse_algorithm(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "edp_sectors") c.edp_sectors = u();
  else if (key == "obstacles") c.obstacles = u();
  else if (key == "obstacle_side_m") c.obstacle_side_m = d();
  else if (key == "obstacle_list") {
    try {
      c.obstacle_list = Environment::parse_obstacles(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "reflective_boundary") {
    if (value == "true" || value == "1") c.reflective_boundary = true;
    else if (value == "false" || value == "0") c.reflective_boundary = false;
    else if (value == "auto") c.reflective_boundary.reset();
    else throw ConfigError("key 'reflective_boundary': expected true, false or auto");
  } else if (key == "seed") c.seed = parse_uint(key, value);
  else if (key == "replications") c.replications = u();
  else if (key == "mt_beams") c.mt_beams = u();
  else if (key == "codebook_widths") c.codebook_widths = parse_list(key, value);
  else if (key == "analytic_samples") c.analytic_samples = u();
  else if (key == "tx_power_dbm") c.radio.tx_power_dbm = d();
  else if (key == "threshold_dbm") c.radio.threshold_dbm = d();
  else if (key == "pl_ref_db") c.radio.pl_ref_db = d();
  else if (key == "l0_m") c.radio.l0_m = d();
  else if (key == "k_far") c.radio.k_far = d();
  else if (key == "k_near") c.radio.k_near = d();
  else if (key == "wavelength_m") c.radio.wavelength_m = d();
  else if (key == "roughness_m") c.radio.roughness_m = d();
  else if (key == "permittivity_re") c.radio.permittivity.real(d());
  else if (key == "permittivity_im") c.radio.permittivity.imag(d());
  else if (key == "eta") c.radio.eta = d();
  else if (key == "db_range_m") c.db_range_m = d();
  else if (key == "db_load") c.db_load = value;
  else if (key == "db_save") c.db_save = value;
  else throw ConfigError("unknown key '" + key + "'");
}

inline const std::map<std::string, std::vector<std::string>>& config_sections() {
  static const std::map<std::string, std::vector<std::string>> sections{
      {"scenario",
       {"width_m", "height_m", "bs_x", "bs_y", "users", "distribution", "dist_sigma_m", "hole_radius_m",
        "location_error_m", "algorithm", "edp_sectors", "obstacles", "obstacle_side_m", "obstacle_list", "reflective_boundary", "seed",
        "replications", "mt_beams", "codebook_widths", "analytic_samples"}},
      {"radio",
       {"tx_power_dbm", "threshold_dbm", "pl_ref_db", "l0_m", "k_far", "k_near", "wavelength_m", "roughness_m",
        "permittivity_re", "permittivity_im", "eta"}},
      {"db", {"db_range_m", "db_load", "db_save"}},
  };
  return sections;
}

inline ScenarioConfig parse_config(std::istream& is) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  ScenarioConfig cfg;
  const auto& sections = config_sections();
  // bs_x/bs_y must see the final area when the position defaults to center.
  for (const std::string pass : {"area", "rest"}) {
    for (const auto& [section, body] : tree) {
      const auto it = sections.find(section);
      if (it == sections.end())
        throw ConfigError("unknown section or top-level key '" + section + "'");
      for (const auto& [key, node] : body) {
        if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
          throw ConfigError("unknown key '" + key + "' in [" + section + "]");
        const bool area_key = key == "width_m" || key == "height_m";
        if (area_key == (pass == "area")) set_config_value(cfg, key, node.get_value<std::string>());
      }
    }
  }
  cfg.validate();
  return cfg;
}

inline ScenarioConfig parse_config_string(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  return parse_config(is);
}

}  // namespace celldisc
