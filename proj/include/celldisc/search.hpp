// SPDX-License-Identifier: Apache-2.0
//
// BS search-sequence generators: Random, SLS, D-SLS and EDP.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "celldisc/codebook.hpp"
#include "celldisc/radio.hpp"

namespace celldisc {

using Rng = std::mt19937_64;

enum class Algorithm { Random, Sls, Dsls, Edp };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Random: return "random";
    case Algorithm::Sls: return "sls";
    case Algorithm::Dsls: return "dsls";
    case Algorithm::Edp: return "edp";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "random") return Algorithm::Random;
  if (s == "sls") return Algorithm::Sls;
  if (s == "dsls" || s == "d-sls") return Algorithm::Dsls;
  if (s == "edp") return Algorithm::Edp;
  throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

inline constexpr double kDefaultMtWidth = 2.0 * std::numbers::pi / 12.0;

inline SearchSequence seq_random(const Codebook& cb, Rng& rng) {
  SearchSequence seq{cb.all_configs()};
  std::shuffle(seq.configs.begin(), seq.configs.end(), rng);
  return seq;
}

inline SearchSequence seq_sls(const Codebook& cb, Point2D nominal, Point2D bs_pos) {
  const std::size_t level = cb.narrowest();
  const std::size_t n = cb.directions(level);
  const std::size_t start = covering_dir(cb, level, nominal, bs_pos);
  SearchSequence seq;
  seq.configs.reserve(n);
  for (std::size_t k = 0; k < n; ++k) seq.configs.push_back({level, (start + k) % n});
  return seq;
}

// Widest level whose perfectly aligned range reaches the nominal position;
// the narrowest level when none does.
inline std::size_t initial_level(const Codebook& cb, Point2D nominal, Point2D bs_pos,
                                 const LinkBudgetParams& params, double mt_width = kDefaultMtWidth) {
  const double dist = distance(bs_pos, nominal);
  for (std::size_t l = 0; l < cb.levels(); ++l)
    if (max_aligned_range(params, cb.width_rad(l), mt_width) >= dist) return l;
  return cb.narrowest();
}

// w0 narrowing to the narrowest level, then the wider levels widest-first.
inline std::vector<std::size_t> level_order(const Codebook& cb, std::size_t w0) {
  std::vector<std::size_t> order;
  for (std::size_t l = w0; l < cb.levels(); ++l) order.push_back(l);
  for (std::size_t l = 0; l < w0; ++l) order.push_back(l);
  return order;
}

inline SearchSequence seq_dsls(const Codebook& cb, Point2D nominal, Point2D bs_pos,
                               const LinkBudgetParams& params, double mt_width = kDefaultMtWidth) {
  SearchSequence seq;
  seq.configs.reserve(cb.total_configs());
  for (std::size_t level : level_order(cb, initial_level(cb, nominal, bs_pos, params, mt_width))) {
    const std::size_t n = cb.directions(level);
    const std::size_t start = covering_dir(cb, level, nominal, bs_pos);
    for (std::size_t k = 0; k < n; ++k) seq.configs.push_back({level, (start + k) % n});
  }
  return seq;
}

// True iff the beam's angular span and the sector share a positive-measure
// arc. A beam is tested in the first visited sector it overlaps.
inline bool edp_beam_overlaps(const Codebook& cb, BeamConfig c, std::size_t sector, std::size_t n_sectors) {
  const double sector_deg = 360.0 / static_cast<double>(n_sectors);
  const double w = cb.width_deg(c.level);
  const double b0 = static_cast<double>(c.dir) * w;
  const double s0 = static_cast<double>(sector) * sector_deg;
  constexpr double tol = 1e-9;
  for (double shift : {-360.0, 0.0, 360.0}) {
    const double lo = std::max(b0 + shift, s0);
    const double hi = std::min(b0 + shift + w, s0 + sector_deg);
    if (hi - lo > tol) return true;
  }
  return false;
}

// r, r+1, r-1, r+2, r-2, ... (mod n), each sector once.
inline std::vector<std::size_t> edp_sector_order(std::size_t first, std::size_t n_sectors) {
  std::vector<std::size_t> order{first};
  std::vector<char> used(n_sectors, 0);
  used[first] = 1;
  const auto n = static_cast<long long>(n_sectors);
  for (long long k = 1; order.size() < n_sectors; ++k) {
    const auto f = static_cast<long long>(first);
    for (long long cand : {f + k, f - k}) {
      const auto s = static_cast<std::size_t>(((cand % n) + n) % n);
      if (!used[s]) {
        used[s] = 1;
        order.push_back(s);
      }
    }
  }
  return order;
}

inline SearchSequence seq_edp(const Codebook& cb, Point2D nominal, Point2D bs_pos, std::size_t n_sectors,
                              const LinkBudgetParams& params, double mt_width = kDefaultMtWidth) {
  if (n_sectors < 1) throw std::invalid_argument("edp: sector count must be at least 1");
  const double sector_deg = 360.0 / static_cast<double>(n_sectors);
  const double nominal_deg = nominal == bs_pos ? 0.0 : bearing(bs_pos, nominal) * kRadToDeg;
  const auto first = static_cast<std::size_t>(std::floor(nominal_deg / sector_deg + 1e-9)) % n_sectors;
  const auto levels = level_order(cb, initial_level(cb, nominal, bs_pos, params, mt_width));

  std::vector<std::size_t> anchors(cb.levels());
  for (std::size_t l = 0; l < cb.levels(); ++l) anchors[l] = covering_dir(cb, l, nominal, bs_pos);

  SearchSequence seq;
  seq.configs.reserve(cb.total_configs());
  std::vector<char> emitted(cb.total_configs(), 0);

  for (std::size_t sector : edp_sector_order(first, n_sectors)) {
    const std::size_t shift = (sector + n_sectors - first) % n_sectors;
    for (std::size_t level : levels) {
      const std::size_t n = cb.directions(level);
      const double w = cb.width_deg(level);
      const double anchor_deg =
          std::fmod(cb.boresight_deg({level, anchors[level]}) + static_cast<double>(shift) * sector_deg, 360.0);
      const std::size_t d0 = std::min(static_cast<std::size_t>(std::floor(anchor_deg / w)), n - 1);

      std::size_t pending = 0;
      for (std::size_t d = 0; d < n; ++d)
        pending += !emitted[cb.index({level, d})] && edp_beam_overlaps(cb, {level, d}, sector, n_sectors);

      auto try_emit = [&](std::size_t d) {
        const BeamConfig c{level, d};
        auto& e = emitted[cb.index(c)];
        if (e || !edp_beam_overlaps(cb, c, sector, n_sectors)) return;
        e = 1;
        seq.configs.push_back(c);
        --pending;
      };
      for (std::size_t k = 0; k <= n && pending > 0; ++k) {
        try_emit((d0 + k) % n);
        if (k > 0) try_emit((d0 + n - k % n) % n);
      }
    }
  }
  return seq;
}

struct SequenceRequest {
  Algorithm algorithm{Algorithm::Edp};
  std::size_t edp_sectors{1};
  double mt_width{kDefaultMtWidth};
};

inline SearchSequence build_sequence(const SequenceRequest& req, const Codebook& cb, Point2D nominal,
                                     Point2D bs_pos, const LinkBudgetParams& params, Rng& rng) {
  switch (req.algorithm) {
    case Algorithm::Random: return seq_random(cb, rng);
    case Algorithm::Sls: return seq_sls(cb, nominal, bs_pos);
    case Algorithm::Dsls: return seq_dsls(cb, nominal, bs_pos, params, req.mt_width);
    case Algorithm::Edp: return seq_edp(cb, nominal, bs_pos, req.edp_sectors, params, req.mt_width);
  }
  throw std::logic_error("unreachable");
}

}  // namespace celldisc
