// SPDX-License-Identifier: Apache-2.0
//
// Stochastic sector model of the discovery time.
//
// Every BS beam is approximated by a circular sector apexed at the BS with
// the beam's angular span and a radius equal to eta times the perfectly
// aligned range. Step n of a search sequence can only discover users lying
// in the part of its sector not covered by any earlier step (the residual
// region). The probability of discovery at step n given a nominal position
// is the mass of the location-error Gaussian over that residual region; the
// unconditional PMF averages this over the user distribution.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "celldisc/codebook.hpp"
#include "celldisc/geometry.hpp"
#include "celldisc/parallel.hpp"
#include "celldisc/radio.hpp"
#include "celldisc/search.hpp"

namespace celldisc {

struct AnnularSector {
  double r_in{0.0};
  double r_out{0.0};
  double theta_start{0.0};  // radians
  double theta_end{0.0};

  double span() const { return theta_end - theta_start; }
  double area() const { return 0.5 * span() * (r_out * r_out - r_in * r_in); }
};

struct AnnularRegion {
  std::vector<AnnularSector> parts;

  double area() const {
    double a = 0.0;
    for (const auto& p : parts) a += p.area();
    return a;
  }
};

// Area shared by two annular sectors with angles in [0, 2*pi].
inline double overlap_area(const AnnularSector& a, const AnnularSector& b) {
  const double t0 = std::max(a.theta_start, b.theta_start);
  const double t1 = std::min(a.theta_end, b.theta_end);
  const double r0 = std::max(a.r_in, b.r_in);
  const double r1 = std::min(a.r_out, b.r_out);
  if (t1 <= t0 || r1 <= r0) return 0.0;
  return 0.5 * (t1 - t0) * (r1 * r1 - r0 * r0);
}

class SectorApprox {
 public:
  SectorApprox(Codebook cb, const LinkBudgetParams& params, double mt_width, Point2D bs_pos)
      : cb_(std::move(cb)), bs_pos_(bs_pos) {
    params.validate();
    for (std::size_t l = 0; l < cb_.levels(); ++l)
      radii_.push_back(params.eta * max_aligned_range(params, cb_.width_rad(l), mt_width));
  }

  const Codebook& codebook() const { return cb_; }
  Point2D bs_pos() const { return bs_pos_; }
  double radius(std::size_t level) const { return radii_.at(level); }
  double radius(BeamConfig c) const { return radii_.at(c.level); }

 private:
  Codebook cb_;
  Point2D bs_pos_;
  std::vector<double> radii_;
};

inline AnnularSector sector_for_config(const SectorApprox& approx, BeamConfig c) {
  const auto& cb = approx.codebook();
  const double w = cb.width_deg(c.level);
  return {0.0, approx.radius(c), static_cast<double>(c.dir) * w * kDegToRad,
          static_cast<double>(c.dir + 1) * w * kDegToRad};
}

// Walks a search sequence keeping, per elementary angular cell, the radius
// already explored by earlier steps. Cell edges are the union of all level
// edges, so every sector is a whole number of cells and no sector crosses 0.
class ResidualTracker {
 public:
  explicit ResidualTracker(const SectorApprox& approx) : approx_(approx) {
    const auto& cb = approx.codebook();
    std::vector<double> edges;
    for (std::size_t l = 0; l < cb.levels(); ++l)
      for (std::size_t k = 0; k <= cb.directions(l); ++k) edges.push_back(static_cast<double>(k) * cb.width_deg(l));
    std::sort(edges.begin(), edges.end());
    for (double e : edges)
      if (edges_deg_.empty() || e - edges_deg_.back() > 1e-9) edges_deg_.push_back(e);
    explored_.assign(edges_deg_.size() - 1, 0.0);
  }

  // Residual region of config c given everything seen so far; marks c explored.
  AnnularRegion next(BeamConfig c) {
    const auto& cb = approx_.codebook();
    const double w = cb.width_deg(c.level);
    const std::size_t first = cell_at(static_cast<double>(c.dir) * w);
    const std::size_t last = cell_at(static_cast<double>(c.dir + 1) * w);
    const double r = approx_.radius(c);

    AnnularRegion region;
    for (std::size_t i = first; i < last; ++i) {
      const double r_in = explored_[i];
      if (r_in < r) {
        const double t0 = edges_deg_[i] * kDegToRad;
        const double t1 = edges_deg_[i + 1] * kDegToRad;
        if (!region.parts.empty() && region.parts.back().r_in == r_in &&
            std::abs(region.parts.back().theta_end - t0) < 1e-12)
          region.parts.back().theta_end = t1;
        else
          region.parts.push_back({r_in, r, t0, t1});
      }
      explored_[i] = std::max(explored_[i], r);
    }
    return region;
  }

 private:
  std::size_t cell_at(double deg) const {
    const auto it = std::lower_bound(edges_deg_.begin(), edges_deg_.end(), deg - 1e-9);
    return static_cast<std::size_t>(it - edges_deg_.begin());
  }

  const SectorApprox& approx_;
  std::vector<double> edges_deg_;
  std::vector<double> explored_;
};

inline AnnularRegion residual_region(const SectorApprox& approx, const SearchSequence& seq, std::size_t n) {
  if (n >= seq.size()) throw std::out_of_range("residual_region: step beyond sequence");
  ResidualTracker tracker(approx);
  for (std::size_t i = 0; i < n; ++i) tracker.next(seq[i]);
  return tracker.next(seq[n]);
}

namespace detail {

// erf(hi) - erf(lo) without cancellation in either tail.
inline double erf_diff(double lo, double hi) {
  if (lo >= 0.0) return std::erfc(lo) - std::erfc(hi);
  if (hi <= 0.0) return std::erfc(-hi) - std::erfc(-lo);
  return std::erf(hi) - std::erf(lo);
}

// Gaussian mass along the ray at angle theta from the BS, between r_in and
// r_out, per unit angle. d is the Gaussian mean relative to the BS.
inline double ray_mass(double theta, double r_in, double r_out, Point2D d, double sigma) {
  const double a = d.x * std::cos(theta) + d.y * std::sin(theta);
  const double b2 = std::max(0.0, dot(d, d) - a * a);
  const double s2 = sigma * sigma;
  const double e_in = std::exp(-(b2 + (r_in - a) * (r_in - a)) / (2.0 * s2));
  const double e_out = std::exp(-(b2 + (r_out - a) * (r_out - a)) / (2.0 * s2));
  const double inv = 1.0 / (sigma * std::numbers::sqrt2);
  const double lateral = std::exp(-b2 / (2.0 * s2));
  const double along = lateral == 0.0 ? 0.0
                                      : a * sigma * std::sqrt(std::numbers::pi / 2.0) * lateral *
                                            erf_diff((r_in - a) * inv, (r_out - a) * inv);
  return (s2 * (e_in - e_out) + along) / (2.0 * std::numbers::pi * s2);
}

inline double point_to_segment(Point2D p, Point2D a, Point2D b) {
  const Point2D ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + t * ab);
}

// Euclidean distance from q (relative to the apex) to an annular sector.
inline double distance_to_sector(Point2D q, const AnnularSector& s) {
  const double rho = norm(q);
  const double phi = rho > 0.0 ? wrap_two_pi(std::atan2(q.y, q.x)) : s.theta_start;
  const bool in_span = (phi >= s.theta_start && phi <= s.theta_end) ||
                       (phi + 2.0 * std::numbers::pi <= s.theta_end);
  if (in_span) return std::max({s.r_in - rho, rho - s.r_out, 0.0});
  auto edge = [&](double t) {
    const Point2D u{std::cos(t), std::sin(t)};
    return point_to_segment(q, s.r_in * u, s.r_out * u);
  };
  return std::min(edge(s.theta_start), edge(s.theta_end));
}

inline double sector_mass(const AnnularSector& s, Point2D d, double sigma, double tol) {
  if (distance_to_sector(d, s) > 8.5 * sigma) return 0.0;
  auto f = [&](double t) { return ray_mass(t, s.r_in, s.r_out, d, sigma); };

  std::vector<double> cuts{s.theta_start, s.theta_end};
  const double dn = norm(d);
  if (dn > 0.0) {
    const double tc = std::atan2(d.y, d.x);
    const double spread = sigma / dn;
    for (double shift : {-2.0 * std::numbers::pi, 0.0, 2.0 * std::numbers::pi, 4.0 * std::numbers::pi})
      for (double k : {0.0, -3.0, 3.0, -8.0, 8.0}) {
        const double c = tc + shift + k * spread;
        if (c > s.theta_start && c < s.theta_end) cuts.push_back(c);
      }
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 0.0) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, cuts[i], cuts[i + 1], 15, tol);
  }
  return std::max(total, 0.0);
}

}  // namespace detail

// Mass of the isotropic Gaussian N(center, sigma^2 I) over the region, with
// the region expressed in polar coordinates about bs_pos.
inline double normal_mass(const AnnularRegion& region, Point2D center, double sigma, Point2D bs_pos,
                          double tol = 1e-4) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normal_mass: sigma must be positive");
  const Point2D d = center - bs_pos;
  double total = 0.0;
  for (const auto& part : region.parts) total += detail::sector_mass(part, d, sigma, tol);
  return total;
}

struct PositionPmf {
  std::vector<double> p;
  double unreachable{0.0};
};

inline PositionPmf pmf_given_position(const SectorApprox& approx, const SearchSequence& seq, Point2D nominal,
                                      double sigma, double tol = 1e-4) {
  PositionPmf out;
  out.p.reserve(seq.size());
  ResidualTracker tracker(approx);
  double sum = 0.0;
  for (const auto& c : seq) {
    out.p.push_back(normal_mass(tracker.next(c), nominal, sigma, approx.bs_pos(), tol));
    sum += out.p.back();
  }
  out.unreachable = std::max(0.0, 1.0 - sum);
  return out;
}

struct PmfResult {
  std::vector<double> p_bs;
  std::vector<double> p_mt;
  double p_unreachable{0.0};
  double mean_bs_switches{0.0};
  double mean_mt_switches{0.0};
  double se_mean_bs_switches{0.0};
  double se_mean_mt_switches{0.0};
  std::size_t mt_beams{12};
};

using PositionSampler = std::function<Point2D(Rng&)>;

// Outer average over nominal positions by Monte Carlo. Positions and
// sequences are drawn serially from rng; the per-sample quadrature may run
// on several workers and is summed in sample order.
inline PmfResult pmf_overall(const SectorApprox& approx, const SequenceRequest& req, const LinkBudgetParams& params,
                             const PositionSampler& sample_nominal, double sigma, std::size_t n_samples, Rng& rng,
                             std::size_t mt_beams = 12, double tol = 1e-4) {
  if (n_samples < 1) throw std::invalid_argument("pmf_overall: need at least one sample");
  if (mt_beams < 1) throw std::invalid_argument("pmf_overall: need at least one MT beam");
  const auto& cb = approx.codebook();

  std::vector<Point2D> nominals(n_samples);
  std::vector<SearchSequence> seqs(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    nominals[i] = sample_nominal(rng);
    seqs[i] = build_sequence(req, cb, nominals[i], approx.bs_pos(), params, rng);
  }
  std::vector<PositionPmf> per(n_samples);
  parallel_for(n_samples, [&](std::size_t i) { per[i] = pmf_given_position(approx, seqs[i], nominals[i], sigma, tol); });

  std::size_t len = 0;
  for (const auto& s : seqs) len = std::max(len, s.size());

  const double M = static_cast<double>(mt_beams);
  PmfResult res;
  res.mt_beams = mt_beams;
  res.p_bs.assign(len, 0.0);
  std::vector<double> reach(n_samples, 0.0), bs_moment(n_samples, 0.0), mt_moment(n_samples, 0.0);
  for (std::size_t i = 0; i < n_samples; ++i) {
    for (std::size_t n = 0; n < per[i].p.size(); ++n) {
      const double p = per[i].p[n];
      res.p_bs[n] += p;
      reach[i] += p;
      bs_moment[i] += static_cast<double>(n + 1) * p;
      mt_moment[i] += (static_cast<double>(n) * M + (M + 1.0) / 2.0) * p;
    }
  }
  const double N = static_cast<double>(n_samples);
  double reach_sum = 0.0;
  for (auto& p : res.p_bs) {
    p /= N;
    reach_sum += p;
  }
  res.p_unreachable = std::max(0.0, 1.0 - reach_sum);

  res.p_mt.assign(len * mt_beams, 0.0);
  for (std::size_t n = 0; n < res.p_mt.size(); ++n) res.p_mt[n] = res.p_bs[n / mt_beams] / M;

  // Ratio estimators E[moment]/E[reach] with delta-method standard errors.
  auto ratio = [&](const std::vector<double>& num, double& mean, double& se) {
    double sn = 0.0, sd = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
      sn += num[i];
      sd += reach[i];
    }
    if (sd <= 0.0) {
      mean = std::numeric_limits<double>::quiet_NaN();
      se = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    mean = sn / sd;
    if (n_samples < 2) {
      se = 0.0;
      return;
    }
    const double dbar = sd / N;
    double var = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double r = num[i] - mean * reach[i];
      var += r * r;
    }
    var /= (N - 1.0);
    se = std::sqrt(var / N) / dbar;
  };
  ratio(bs_moment, res.mean_bs_switches, res.se_mean_bs_switches);
  ratio(mt_moment, res.mean_mt_switches, res.se_mean_mt_switches);
  return res;
}

}  // namespace celldisc
