// SPDX-License-Identifier: Apache-2.0
//
// Geo-located context database of past successful discoveries, and the
// DB-assisted discovery wrapper around any fallback search sequence.

#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "celldisc/codebook.hpp"
#include "celldisc/geometry.hpp"
#include "celldisc/rendezvous.hpp"

namespace celldisc {

struct DbEntry {
  Point2D nominal_pos;
  BeamConfig config;
};

class GeoContextDb {
 public:
  void insert(Point2D nominal_pos, BeamConfig config) { entries_.push_back({nominal_pos, config}); }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<DbEntry>& entries() const { return entries_; }

  // Configs of entries within m of p, nearest first (ties keep insertion
  // order), each config listed once at its closest entry.
  std::vector<BeamConfig> query(Point2D p, double m) const {
    if (m < 0.0) throw std::invalid_argument("db query: range must be non-negative");
    std::vector<BeamConfig> out;
    if (m == 0.0) return out;
    struct Hit {
      double dist;
      std::size_t order;
    };
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const double d = distance(entries_[i].nominal_pos, p);
      if (d <= m) hits.push_back({d, i});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.dist < b.dist; });
    for (const auto& h : hits) {
      const BeamConfig c = entries_[h.order].config;
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
  }

  // One record per line: x,y,width_deg,dir_index
  void save(std::ostream& os, const Codebook& cb) const {
    os.precision(17);
    for (const auto& e : entries_)
      os << e.nominal_pos.x << ',' << e.nominal_pos.y << ',' << cb.width_deg(e.config.level) << ','
         << e.config.dir << '\n';
  }

  void save(const std::string& path, const Codebook& cb) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write db file '" + path + "'");
    save(os, cb);
    if (!os) throw std::runtime_error("error writing db file '" + path + "'");
  }

  static GeoContextDb load(std::istream& is, const Codebook& cb) {
    GeoContextDb db;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double x = 0, y = 0, w = 0;
      long long dir = -1;
      if (!(ls >> x >> y >> w >> dir) || dir < 0)
        throw std::runtime_error("db record " + std::to_string(lineno) + ": malformed");
      const BeamConfig c{cb.level_of_width(w), static_cast<std::size_t>(dir)};
      if (!cb.valid(c)) throw std::runtime_error("db record " + std::to_string(lineno) + ": invalid direction");
      db.insert({x, y}, c);
    }
    return db;
  }

  static GeoContextDb load(const std::string& path, const Codebook& cb) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read db file '" + path + "'");
    return load(is, cb);
  }

 private:
  std::vector<DbEntry> entries_;
};

// Candidates followed by the fallback minus anything already tried.
inline SearchSequence effective_sequence(const Codebook& cb, std::span<const BeamConfig> candidates,
                                         const SearchSequence& fallback) {
  SearchSequence seq;
  seq.configs.reserve(candidates.size() + fallback.size());
  std::vector<char> used(cb.total_configs(), 0);
  for (const auto& c : candidates) {
    used[cb.index(c)] = 1;
    seq.configs.push_back(c);
  }
  for (const auto& c : fallback)
    if (!used[cb.index(c)]) seq.configs.push_back(c);
  return seq;
}

inline RendezvousResult db_assisted_discovery_on_paths(const LinkBudgetParams& params, const Codebook& cb,
                                                       GeoContextDb& db, double m, Point2D p_nominal,
                                                       const SearchSequence& fallback,
                                                       std::span<const PathGeometry> paths, const MTModel& mt) {
  const auto candidates = db.query(p_nominal, m);
  const auto seq = effective_sequence(cb, candidates, fallback);
  auto res = run_rendezvous_on_paths(params, cb, seq, paths, mt);
  res.db_candidates = candidates.size();
  if (res.success) {
    res.via_db = res.step_index < candidates.size();
    db.insert(p_nominal, *res.config);
  }
  return res;
}

inline RendezvousResult db_assisted_discovery(const Environment& env, const LinkBudgetParams& params,
                                              const Codebook& cb, GeoContextDb& db, double m, Point2D p_nominal,
                                              const SearchSequence& fallback, Point2D mt_true_pos,
                                              const MTModel& mt) {
  const auto paths = single_bounce_paths(env, env.bs_pos(), mt_true_pos);
  return db_assisted_discovery_on_paths(params, cb, db, m, p_nominal, fallback, paths, mt);
}

}  // namespace celldisc
