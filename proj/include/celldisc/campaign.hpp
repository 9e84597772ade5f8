// SPDX-License-Identifier: Apache-2.0
//
// Population sampling, campaign execution, sweeps and model comparison.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "celldisc/analytic.hpp"
#include "celldisc/codebook.hpp"
#include "celldisc/context_db.hpp"
#include "celldisc/geometry.hpp"
#include "celldisc/parallel.hpp"
#include "celldisc/radio.hpp"
#include "celldisc/rendezvous.hpp"
#include "celldisc/scenario.hpp"
#include "celldisc/search.hpp"

namespace celldisc {

// Independent streams derived from the master seed.
enum class Stream : std::uint64_t { Obstacles = 1, Population = 2, User = 3, Analytic = 4 };

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

class Sampler {
 public:
  // Draws until pred accepts. Fails when acceptance falls below 1e-3.
  template <typename Draw, typename Pred>
  Point2D draw(Draw&& draw_fn, Pred&& accept) {
    for (;;) {
      const Point2D p = draw_fn();
      ++tries_;
      if (accept(p)) {
        ++accepted_;
        return p;
      }
      if (tries_ > 1000 && static_cast<double>(accepted_ + 1) / static_cast<double>(tries_) < 1e-3)
        throw std::runtime_error("rejection sampling acceptance below 1e-3; check the scenario");
    }
  }

 private:
  std::size_t tries_{0};
  std::size_t accepted_{0};
};

inline std::vector<Obstacle> drop_obstacles(const ScenarioConfig& cfg, Rng& rng) {
  if (cfg.obstacle_list) return *cfg.obstacle_list;
  const double half = cfg.obstacle_side_m / 2.0;
  if (2.0 * half > cfg.width_m || 2.0 * half > cfg.height_m) throw ConfigError("obstacles do not fit in the area");
  std::uniform_real_distribution<double> ux(half, cfg.width_m - half);
  std::uniform_real_distribution<double> uy(half, cfg.height_m - half);
  const Point2D bs = cfg.bs();
  std::vector<Obstacle> out;
  Sampler sampler;
  for (std::size_t i = 0; i < cfg.obstacles; ++i) {
    const Point2D c = sampler.draw([&] { return Point2D{ux(rng), uy(rng)}; },
                                   [&](Point2D p) { return !Obstacle{p, cfg.obstacle_side_m}.contains(bs); });
    out.push_back({c, cfg.obstacle_side_m});
  }
  return out;
}

inline Environment make_environment(const ScenarioConfig& cfg, std::uint64_t seed) {
  auto rng = make_rng(seed, Stream::Obstacles);
  try {
    auto obstacles = drop_obstacles(cfg, rng);
    const bool walls = cfg.reflective_boundary.value_or(!obstacles.empty());
    return Environment(cfg.width_m, cfg.height_m, cfg.bs(), std::move(obstacles), walls);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// Nominal position drawn from the user distribution, truncated to the area
// and kept out of obstacles.
inline Point2D sample_nominal(const ScenarioConfig& cfg, const Environment& env, Rng& rng, Sampler& sampler) {
  const Point2D bs = env.bs_pos();
  const auto& dist = cfg.distribution;
  auto accept = [&](Point2D p) {
    if (!env.inside(p) || env.in_obstacle(p)) return false;
    return dist.kind != DistributionKind::RingNormal || distance(p, bs) >= dist.hole_radius_m;
  };
  if (dist.kind == DistributionKind::Uniform) {
    std::uniform_real_distribution<double> ux(0.0, env.width()), uy(0.0, env.height());
    return sampler.draw([&] { return Point2D{ux(rng), uy(rng)}; }, accept);
  }
  std::normal_distribution<double> n(0.0, dist.sigma_m);
  return sampler.draw([&] { return Point2D{bs.x + n(rng), bs.y + n(rng)}; }, accept);
}

struct UserDraw {
  Point2D nominal;
  Point2D real;
  double orientation{0.0};
};

inline std::vector<UserDraw> sample_population(const ScenarioConfig& cfg, const Environment& env, Rng& rng) {
  std::vector<UserDraw> out;
  out.reserve(cfg.users);
  Sampler nominal_sampler, real_sampler;
  const double sigma = cfg.sigma_loc();
  std::normal_distribution<double> err(0.0, sigma > 0.0 ? sigma : 1.0);
  std::uniform_real_distribution<double> orient(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < cfg.users; ++i) {
    UserDraw u;
    u.nominal = sample_nominal(cfg, env, rng, nominal_sampler);
    if (sigma > 0.0)
      u.real = real_sampler.draw([&] { return Point2D{u.nominal.x + err(rng), u.nominal.y + err(rng)}; },
                                 [&](Point2D p) { return env.inside(p) && !env.in_obstacle(p) && !(p == env.bs_pos()); });
    else
      u.real = u.nominal;
    u.orientation = orient(rng);
    out.push_back(u);
  }
  return out;
}

struct UserRecord {
  std::size_t user_id{0};
  Point2D nominal;
  Point2D real;
  RendezvousResult result;
};

struct Summary {
  double mean{std::numeric_limits<double>::quiet_NaN()};
  double median{std::numeric_limits<double>::quiet_NaN()};
  double p10{std::numeric_limits<double>::quiet_NaN()};
  double p90{std::numeric_limits<double>::quiet_NaN()};
  double max{std::numeric_limits<double>::quiet_NaN()};
};

inline Summary summarize(std::vector<double> v) {
  Summary s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  auto q = [&](double f) {
    const double pos = f * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  s.median = q(0.5);
  s.p10 = q(0.1);
  s.p90 = q(0.9);
  s.max = v.back();
  return s;
}

struct CdfPoint {
  double switches;
  double probability;
};

struct RunStats {
  std::uint64_t seed{0};
  std::vector<UserRecord> records;
  std::size_t discovered{0};
  double unreachable_fraction{0.0};
  Summary bs;  // over discovered users
  Summary mt;
  std::vector<CdfPoint> mt_cdf;
  double db_hit_rate{0.0};                // discovered via a db candidate / discovered
  double mean_db_candidates{std::numeric_limits<double>::quiet_NaN()};  // over users discovered via db
  double db_conditional_success{std::numeric_limits<double>::quiet_NaN()};  // via db / users with candidates
};

inline RunStats compute_stats(std::uint64_t seed, std::vector<UserRecord> records) {
  RunStats st;
  st.seed = seed;
  st.records = std::move(records);
  std::vector<double> bs, mt;
  std::size_t via_db = 0, with_candidates = 0;
  double candidate_sum = 0.0;
  for (const auto& r : st.records) {
    if (r.result.db_candidates > 0) ++with_candidates;
    if (!r.result.success) continue;
    bs.push_back(static_cast<double>(r.result.bs_switches));
    mt.push_back(static_cast<double>(r.result.mt_switches));
    if (r.result.via_db) {
      ++via_db;
      candidate_sum += static_cast<double>(r.result.db_candidates);
    }
  }
  st.discovered = bs.size();
  if (!st.records.empty())
    st.unreachable_fraction = 1.0 - static_cast<double>(st.discovered) / static_cast<double>(st.records.size());
  st.bs = summarize(bs);
  st.mt = summarize(mt);
  std::sort(mt.begin(), mt.end());
  for (std::size_t i = 0; i < mt.size(); ++i)
    if (i + 1 == mt.size() || mt[i + 1] != mt[i])
      st.mt_cdf.push_back({mt[i], static_cast<double>(i + 1) / static_cast<double>(mt.size())});
  if (st.discovered) st.db_hit_rate = static_cast<double>(via_db) / static_cast<double>(st.discovered);
  if (via_db) st.mean_db_candidates = candidate_sum / static_cast<double>(via_db);
  if (with_candidates) st.db_conditional_success = static_cast<double>(via_db) / static_cast<double>(with_candidates);
  return st;
}

// One campaign for one seed. With db_range_m > 0 users run sequentially
// against `db`, which accumulates across users (and across calls when the
// caller keeps it).
inline RunStats run_campaign(const ScenarioConfig& cfg, std::uint64_t seed, GeoContextDb& db) {
  cfg.validate();
  const Codebook cb(cfg.codebook_widths);
  const Environment env = make_environment(cfg, seed);
  auto pop_rng = make_rng(seed, Stream::Population);
  const auto population = sample_population(cfg, env, pop_rng);
  const auto req = cfg.sequence_request();
  const bool use_db = cfg.db_range_m > 0.0;

  std::vector<UserRecord> records(population.size());
  auto run_user = [&](std::size_t i) {
    const auto& u = population[i];
    auto rng = make_rng(seed, Stream::User, i);
    MTModel mt{cfg.mt_beams, u.orientation, 0};
    mt.start_index = std::uniform_int_distribution<std::size_t>(0, cfg.mt_beams - 1)(rng);
    const auto seq = build_sequence(req, cb, u.nominal, env.bs_pos(), cfg.radio, rng);
    const auto paths = single_bounce_paths(env, env.bs_pos(), u.real);
    records[i].user_id = i;
    records[i].nominal = u.nominal;
    records[i].real = u.real;
    records[i].result = use_db ? db_assisted_discovery_on_paths(cfg.radio, cb, db, cfg.db_range_m, u.nominal, seq,
                                                                paths, mt)
                               : run_rendezvous_on_paths(cfg.radio, cb, seq, paths, mt);
  };
  if (use_db)
    for (std::size_t i = 0; i < population.size(); ++i) run_user(i);
  else
    parallel_for(population.size(), run_user);
  return compute_stats(seed, std::move(records));
}

inline RunStats run_campaign(const ScenarioConfig& cfg) {
  GeoContextDb db;
  if (!cfg.db_load.empty()) {
    try {
      db = GeoContextDb::load(cfg.db_load, Codebook(cfg.codebook_widths));
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  auto stats = run_campaign(cfg, cfg.seed, db);
  if (!cfg.db_save.empty()) db.save(cfg.db_save, Codebook(cfg.codebook_widths));
  return stats;
}

// Means over `replications` seeds: seed, seed+1, ... each with a fresh
// obstacle layout, population and empty db.
struct Aggregate {
  std::size_t runs{0};
  double mean_bs{0.0};
  double mean_mt{0.0};
  double unreachable_fraction{0.0};
  double db_hit_rate{0.0};
  double mean_db_candidates{std::numeric_limits<double>::quiet_NaN()};
  double db_conditional_success{std::numeric_limits<double>::quiet_NaN()};
};

inline Aggregate aggregate(const std::vector<RunStats>& runs) {
  Aggregate a;
  a.runs = runs.size();
  if (runs.empty()) return a;
  auto avg = [&](auto field) {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& r : runs) {
      const double v = field(r);
      if (std::isfinite(v)) {
        s += v;
        ++n;
      }
    }
    return n ? s / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
  };
  a.mean_bs = avg([](const RunStats& r) { return r.bs.mean; });
  a.mean_mt = avg([](const RunStats& r) { return r.mt.mean; });
  a.unreachable_fraction = avg([](const RunStats& r) { return r.unreachable_fraction; });
  a.db_hit_rate = avg([](const RunStats& r) { return r.db_hit_rate; });
  a.mean_db_candidates = avg([](const RunStats& r) { return r.mean_db_candidates; });
  a.db_conditional_success = avg([](const RunStats& r) { return r.db_conditional_success; });
  return a;
}

inline std::vector<RunStats> run_replicated(const ScenarioConfig& cfg) {
  std::vector<RunStats> runs;
  for (std::size_t k = 0; k < cfg.replications; ++k) {
    GeoContextDb db;
    runs.push_back(run_campaign(cfg, cfg.seed + k, db));
  }
  return runs;
}

enum class SweepAxis { LocationError, EdpSectors, DbRange, Obstacles };

inline SweepAxis parse_axis(const std::string& s) {
  if (s == "location_error") return SweepAxis::LocationError;
  if (s == "edp_sectors") return SweepAxis::EdpSectors;
  if (s == "db_range") return SweepAxis::DbRange;
  if (s == "obstacles") return SweepAxis::Obstacles;
  throw ConfigError("unknown sweep axis '" + s + "'");
}

inline std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::LocationError: return "location_error";
    case SweepAxis::EdpSectors: return "edp_sectors";
    case SweepAxis::DbRange: return "db_range";
    case SweepAxis::Obstacles: return "obstacles";
  }
  return "?";
}

inline ScenarioConfig with_axis_value(ScenarioConfig cfg, SweepAxis axis, double value) {
  auto count = [&] {
    if (value < 0.0 || value != std::floor(value)) throw ConfigError("sweep value must be a non-negative integer");
    return static_cast<std::size_t>(value);
  };
  switch (axis) {
    case SweepAxis::LocationError: cfg.location_error_m = value; break;
    case SweepAxis::EdpSectors: cfg.edp_sectors = count(); break;
    case SweepAxis::DbRange: cfg.db_range_m = value; break;
    case SweepAxis::Obstacles:
      cfg.obstacles = count();
      cfg.obstacle_list.reset();
      break;
  }
  cfg.validate();
  return cfg;
}

struct SweepRow {
  double value{0.0};
  Aggregate agg;
};

inline std::vector<SweepRow> sweep(const ScenarioConfig& cfg, SweepAxis axis, const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  for (double v : values) rows.push_back({v, aggregate(run_replicated(with_axis_value(cfg, axis, v)))});
  return rows;
}

// Nominal-position sampler for the analytic model (obstacle-free area).
inline PositionSampler analytic_sampler(const ScenarioConfig& cfg) {
  return [cfg, env = Environment(cfg.width_m, cfg.height_m, cfg.bs()), sampler = Sampler{}](Rng& rng) mutable {
    return sample_nominal(cfg, env, rng, sampler);
  };
}

inline PmfResult run_analytic(const ScenarioConfig& cfg, double tol = 1e-4) {
  cfg.validate();
  if (cfg.has_obstacles()) throw ConfigError("the analytic model covers obstacle-free scenarios only");
  const SectorApprox approx(Codebook(cfg.codebook_widths), cfg.radio, cfg.mt_width(), cfg.bs());
  auto rng = make_rng(cfg.seed, Stream::Analytic);
  const double sigma = cfg.location_error_m > 0.0 ? cfg.sigma_loc() : 1e-6;
  return pmf_overall(approx, cfg.sequence_request(), cfg.radio, analytic_sampler(cfg), sigma, cfg.analytic_samples,
                     rng, cfg.mt_beams, tol);
}

struct ModelComparison {
  PmfResult analytic;
  Aggregate simulated;
  double gap_bs{0.0};  // |analytic - simulated| / simulated
  double gap_mt{0.0};
};

inline ModelComparison compare_model(const ScenarioConfig& cfg) {
  if (cfg.has_obstacles()) throw ConfigError("compare: scenario must be obstacle-free");
  ModelComparison out;
  out.analytic = run_analytic(cfg);
  out.simulated = aggregate(run_replicated(cfg));
  out.gap_bs = std::abs(out.analytic.mean_bs_switches - out.simulated.mean_bs) / out.simulated.mean_bs;
  out.gap_mt = std::abs(out.analytic.mean_mt_switches - out.simulated.mean_mt) / out.simulated.mean_mt;
  return out;
}

}  // namespace celldisc
