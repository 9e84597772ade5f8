// SPDX-License-Identifier: Apache-2.0
//
// Antenna gain, path loss and beacon detectability.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "celldisc/geometry.hpp"

namespace celldisc {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct AntennaBeam {
  double width{2.0 * std::numbers::pi};  // half-power width, radians
  double boresight{0.0};                 // absolute azimuth, radians
};

struct LinkBudgetParams {
  double tx_power_dbm = 30.0;
  double threshold_dbm = -73.0;
  double pl_ref_db = 82.02;
  double l0_m = 5.0;
  double k_far = 2.36;
  double k_near = 2.00;
  double wavelength_m = 0.005;
  double roughness_m = 0.0002;
  std::complex<double> permittivity{4.0, 0.2};
  // Range shrink for a worst-case 3 dB MT misalignment under k_far.
  double eta = std::pow(10.0, -3.0 / (10.0 * 2.36));

  void validate() const {
    if (!(threshold_dbm < tx_power_dbm)) throw std::invalid_argument("threshold must be below tx power");
    if (!(l0_m > 0.0)) throw std::invalid_argument("l0 must be positive");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in (0, 1]");
    if (!(k_far > 0.0) || !(k_near > 0.0)) throw std::invalid_argument("propagation exponents must be positive");
    if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be positive");
    if (roughness_m < 0.0) throw std::invalid_argument("roughness must be non-negative");
  }
};

// Gaussian main-lobe gain in dBi for an azimuth-symmetric pencil beam.
inline double antenna_gain_db(double width, double offset) {
  const double peak = 10.0 * std::log10(16.0 * std::numbers::pi / (6.76 * width * width));
  const double x = offset / width;
  return peak - 12.0 * x * x;
}

inline double distance_loss_db(const LinkBudgetParams& p, double length) {
  const double k = length > p.l0_m ? p.k_far : p.k_near;
  return p.pl_ref_db + k * 10.0 * std::log10(length / p.l0_m);
}

// |R| + |F| for a grazing angle theta in (0, pi/2].
inline double reflection_extra_loss_db(const LinkBudgetParams& p, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const std::complex<double> root = std::sqrt(p.permittivity - c * c);
  const double r_db = 20.0 * std::log10(std::abs(s - root) / std::abs(s + root));
  const double rough = std::numbers::pi * p.roughness_m * s / p.wavelength_m;
  const double f_db = -80.0 / std::numbers::ln10 * rough * rough;
  return std::abs(r_db) + std::abs(f_db);
}

inline double path_loss_db(const LinkBudgetParams& p, const PathGeometry& path) {
  double loss = distance_loss_db(p, path.length);
  if (path.kind == PathKind::Reflected) loss += reflection_extra_loss_db(p, path.grazing_angle);
  return loss;
}

inline double received_power_dbm(const LinkBudgetParams& p, const AntennaBeam& bs_beam,
                                 const AntennaBeam& mt_beam, const PathGeometry& path) {
  return p.tx_power_dbm + antenna_gain_db(bs_beam.width, wrap_pi(path.departure_angle - bs_beam.boresight)) +
         antenna_gain_db(mt_beam.width, wrap_pi(path.arrival_angle - mt_beam.boresight)) -
         path_loss_db(p, path);
}

// Index of the strongest path that clears the threshold, or -1.
inline int best_detecting_path(const LinkBudgetParams& p, const AntennaBeam& bs_beam,
                               const AntennaBeam& mt_beam, std::span<const PathGeometry> paths) {
  int best = -1;
  double best_power = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const double pw = received_power_dbm(p, bs_beam, mt_beam, paths[i]);
    if (pw > best_power) {
      best_power = pw;
      best = static_cast<int>(i);
    }
  }
  return best_power >= p.threshold_dbm ? best : -1;
}

inline bool detectable(const Environment& env, const LinkBudgetParams& p, const AntennaBeam& bs_beam,
                       const AntennaBeam& mt_beam, Point2D bs_pos, Point2D mt_pos) {
  const auto paths = single_bounce_paths(env, bs_pos, mt_pos);
  return best_detecting_path(p, bs_beam, mt_beam, paths) >= 0;
}

// Perfectly aligned range on the far-field branch, before any eta scaling.
inline double max_aligned_range(const LinkBudgetParams& p, double bs_width, double mt_width) {
  const double budget = p.tx_power_dbm + antenna_gain_db(bs_width, 0.0) + antenna_gain_db(mt_width, 0.0) -
                        p.threshold_dbm - p.pl_ref_db;
  return p.l0_m * std::pow(10.0, budget / (10.0 * p.k_far));
}

}  // namespace celldisc
