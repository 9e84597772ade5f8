// SPDX-License-Identifier: Apache-2.0
//
// Discrete BS beam codebook: width levels, pointing directions and the
// search sequences built from them.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "celldisc/geometry.hpp"
#include "celldisc/radio.hpp"

namespace celldisc {

struct BeamConfig {
  std::size_t level{0};
  std::size_t dir{0};

  friend bool operator==(const BeamConfig&, const BeamConfig&) = default;
  friend auto operator<=>(const BeamConfig&, const BeamConfig&) = default;
};

inline const std::vector<double>& default_width_levels() {
  static const std::vector<double> widths{360, 120, 90, 45, 30, 15, 10, 5, 3};
  return widths;
}

class Codebook {
 public:
  Codebook() : Codebook(default_width_levels()) {}

  explicit Codebook(std::vector<double> width_degrees) : widths_deg_(std::move(width_degrees)) {
    if (widths_deg_.empty()) throw std::invalid_argument("codebook: no width levels");
    std::sort(widths_deg_.begin(), widths_deg_.end(), std::greater<>());
    if (std::adjacent_find(widths_deg_.begin(), widths_deg_.end()) != widths_deg_.end())
      throw std::invalid_argument("codebook: repeated width level");
    std::size_t offset = 0;
    for (double w : widths_deg_) {
      const double ratio = 360.0 / w;
      const double rounded = std::round(ratio);
      if (!(w > 0.0) || w > 360.0 || std::abs(ratio - rounded) > 1e-9)
        throw std::invalid_argument("codebook: width " + std::to_string(w) + " does not divide 360");
      counts_.push_back(static_cast<std::size_t>(rounded));
      offsets_.push_back(offset);
      offset += counts_.back();
    }
    total_ = offset;
  }

  std::size_t levels() const { return widths_deg_.size(); }
  std::size_t narrowest() const { return widths_deg_.size() - 1; }
  const std::vector<double>& width_levels_deg() const { return widths_deg_; }
  double width_deg(std::size_t level) const { return widths_deg_.at(level); }
  double width_rad(std::size_t level) const { return widths_deg_.at(level) * kDegToRad; }
  std::size_t directions(std::size_t level) const { return counts_.at(level); }
  std::size_t total_configs() const { return total_; }

  bool valid(BeamConfig c) const { return c.level < levels() && c.dir < counts_[c.level]; }

  // Dense id in [0, total_configs()).
  std::size_t index(BeamConfig c) const { return offsets_[c.level] + c.dir; }

  double boresight_deg(BeamConfig c) const { return (static_cast<double>(c.dir) + 0.5) * widths_deg_[c.level]; }
  double boresight_rad(BeamConfig c) const { return boresight_deg(c) * kDegToRad; }

  AntennaBeam beam(BeamConfig c) const { return {width_rad(c.level), boresight_rad(c)}; }

  std::vector<BeamConfig> all_configs() const {
    std::vector<BeamConfig> out;
    out.reserve(total_);
    for (std::size_t l = 0; l < levels(); ++l)
      for (std::size_t d = 0; d < counts_[l]; ++d) out.push_back({l, d});
    return out;
  }

  // Level index holding an exact width, if present.
  std::size_t level_of_width(double width_deg) const {
    for (std::size_t l = 0; l < levels(); ++l)
      if (std::abs(widths_deg_[l] - width_deg) < 1e-9) return l;
    throw std::invalid_argument("codebook: no level of width " + std::to_string(width_deg));
  }

 private:
  std::vector<double> widths_deg_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> offsets_;
  std::size_t total_{0};
};

inline Codebook build_codebook(const std::vector<double>& width_degrees) { return Codebook(width_degrees); }

// Direction index at `level` whose sector contains the bearing of pos.
inline std::size_t covering_dir(const Codebook& cb, std::size_t level, Point2D pos, Point2D bs_pos) {
  if (pos == bs_pos) return 0;
  const double ang_deg = bearing(bs_pos, pos) * kRadToDeg;
  const auto dir = static_cast<std::size_t>(std::floor(ang_deg / cb.width_deg(level)));
  return std::min(dir, cb.directions(level) - 1);
}

struct SearchSequence {
  std::vector<BeamConfig> configs;

  std::size_t size() const { return configs.size(); }
  bool empty() const { return configs.empty(); }
  const BeamConfig& operator[](std::size_t i) const { return configs[i]; }
  auto begin() const { return configs.begin(); }
  auto end() const { return configs.end(); }

  bool has_duplicates(const Codebook& cb) const {
    std::vector<char> seen(cb.total_configs(), 0);
    for (const auto& c : configs) {
      auto& s = seen[cb.index(c)];
      if (s) return true;
      s = 1;
    }
    return false;
  }

  // Every config is valid, none repeats and the length fits the codebook.
  bool well_formed(const Codebook& cb) const {
    return configs.size() <= cb.total_configs() &&
           std::all_of(configs.begin(), configs.end(), [&](BeamConfig c) { return cb.valid(c); }) &&
           !has_duplicates(cb);
  }
};

inline void write_sequence_csv(std::ostream& os, const Codebook& cb, const SearchSequence& seq) {
  os << "step,width_deg,dir_index\n";
  for (std::size_t i = 0; i < seq.size(); ++i)
    os << i << ',' << cb.width_deg(seq[i].level) << ',' << seq[i].dir << '\n';
}

}  // namespace celldisc
