// SPDX-License-Identifier: Apache-2.0
//
// BS/MT rendezvous: for each BS beam in the search sequence the MT runs a
// full circular sweep of its M beams until the beacon is decoded.

#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "celldisc/codebook.hpp"
#include "celldisc/geometry.hpp"
#include "celldisc/radio.hpp"

namespace celldisc {

struct MTModel {
  std::size_t beams{12};
  double orientation{0.0};
  std::size_t start_index{0};

  double width() const { return 2.0 * std::numbers::pi / static_cast<double>(beams); }
  double boresight(std::size_t i) const {
    return wrap_two_pi(orientation + (static_cast<double>(i) + 0.5) * width());
  }
  AntennaBeam beam(std::size_t i) const { return {width(), boresight(i)}; }
};

struct RendezvousResult {
  bool success{false};
  std::size_t bs_switches{0};
  std::size_t mt_switches{0};
  std::optional<BeamConfig> config;
  std::optional<std::size_t> mt_beam_index;
  std::optional<PathKind> path_kind;
  bool via_db{false};
  std::size_t db_candidates{0};
  std::size_t step_index{0};  // position of the successful config in the sequence

  friend bool operator==(const RendezvousResult&, const RendezvousResult&) = default;
};

// Runs the sweep against precomputed BS->MT paths.
inline RendezvousResult run_rendezvous_on_paths(const LinkBudgetParams& params, const Codebook& cb,
                                                const SearchSequence& seq, std::span<const PathGeometry> paths,
                                                const MTModel& mt) {
  if (seq.empty()) throw std::invalid_argument("rendezvous: empty search sequence");
  if (mt.beams < 1 || mt.start_index >= mt.beams) throw std::invalid_argument("rendezvous: invalid MT model");
  RendezvousResult res;

  std::vector<AntennaBeam> mt_beams(mt.beams);
  for (std::size_t i = 0; i < mt.beams; ++i) mt_beams[i] = mt.beam(i);

  if (!paths.empty()) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const AntennaBeam bs_beam = cb.beam(seq[i]);
      for (std::size_t j = 0; j < mt.beams; ++j) {
        const std::size_t mt_idx = (mt.start_index + j) % mt.beams;
        const int p = best_detecting_path(params, bs_beam, mt_beams[mt_idx], paths);
        if (p < 0) continue;
        res.success = true;
        res.bs_switches = i + 1;
        res.mt_switches = i * mt.beams + j + 1;
        res.config = seq[i];
        res.mt_beam_index = mt_idx;
        res.path_kind = paths[static_cast<std::size_t>(p)].kind;
        res.step_index = i;
        return res;
      }
    }
  }
  res.bs_switches = seq.size();
  res.mt_switches = seq.size() * mt.beams;
  return res;
}

inline RendezvousResult run_rendezvous(const Environment& env, const LinkBudgetParams& params, const Codebook& cb,
                                       const SearchSequence& seq, Point2D mt_true_pos, const MTModel& mt) {
  const auto paths = single_bounce_paths(env, env.bs_pos(), mt_true_pos);
  return run_rendezvous_on_paths(params, cb, seq, paths, mt);
}

}  // namespace celldisc
