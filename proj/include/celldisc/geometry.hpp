// SPDX-License-Identifier: Apache-2.0
//
// 2D deployment area: square obstacles with reflecting edges, reflecting
// boundary walls, line-of-sight tests and single-bounce specular paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace celldisc {

struct Point2D {
  double x{0.0};
  double y{0.0};

  friend Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2D operator*(double s, Point2D a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2D a) { return std::hypot(a.x, a.y); }
inline double distance(Point2D a, Point2D b) { return norm(b - a); }

// Angle of the vector a->b in [0, 2*pi).
inline double bearing(Point2D from, Point2D to) {
  double ang = std::atan2(to.y - from.y, to.x - from.x);
  if (ang < 0.0) ang += 2.0 * std::numbers::pi;
  if (ang >= 2.0 * std::numbers::pi) ang = 0.0;
  return ang;
}

// Wraps an angle into [-pi, pi].
inline double wrap_pi(double ang) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  ang = std::fmod(ang, two_pi);
  if (ang > std::numbers::pi) ang -= two_pi;
  if (ang < -std::numbers::pi) ang += two_pi;
  return ang;
}

// Wraps an angle into [0, 2*pi).
inline double wrap_two_pi(double ang) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  ang = std::fmod(ang, two_pi);
  if (ang < 0.0) ang += two_pi;
  if (ang >= two_pi) ang = 0.0;
  return ang;
}

// Axis-aligned square obstacle, opaque, with four reflecting edges.
struct Obstacle {
  Point2D center;
  double side{20.0};

  double xmin() const { return center.x - side / 2.0; }
  double xmax() const { return center.x + side / 2.0; }
  double ymin() const { return center.y - side / 2.0; }
  double ymax() const { return center.y + side / 2.0; }

  // Closed containment; points on an edge count as inside.
  bool contains(Point2D p) const {
    return p.x >= xmin() && p.x <= xmax() && p.y >= ymin() && p.y <= ymax();
  }
  bool contains_strictly(Point2D p) const {
    return p.x > xmin() && p.x < xmax() && p.y > ymin() && p.y < ymax();
  }
};

// True iff the open segment (a,b) passes through the open interior of the
// square. Touching an edge or a corner does not count.
inline bool segment_hits_interior(const Obstacle& ob, Point2D a, Point2D b) {
  const Point2D d = b - a;
  double t0 = 0.0;
  double t1 = 1.0;
  auto clip = [&](double p, double dp, double lo, double hi) {
    if (dp == 0.0) return p > lo && p < hi;
    double ta = (lo - p) / dp;
    double tb = (hi - p) / dp;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    return true;
  };
  if (!clip(a.x, d.x, ob.xmin(), ob.xmax())) return false;
  if (!clip(a.y, d.y, ob.ymin(), ob.ymax())) return false;
  return t1 - t0 > 1e-12;
}

inline constexpr std::size_t kBoundary = std::numeric_limits<std::size_t>::max();

struct ReflectionSurface {
  Point2D p1;
  Point2D p2;
  std::size_t owner{kBoundary};  // obstacle index or kBoundary
  Point2D inward_normal;         // unit, pointing into free space

  double length() const { return distance(p1, p2); }
};

enum class PathKind { Los, Reflected };

struct PathGeometry {
  PathKind kind{PathKind::Los};
  double length{0.0};
  double departure_angle{0.0};  // at the transmitter, toward the first hop
  double arrival_angle{0.0};    // at the receiver, toward where the signal comes from
  double grazing_angle{0.0};    // reflected only
  std::size_t surface_id{kBoundary};
  Point2D reflection_point{};   // reflected only
};

class Environment {
 public:
  Environment(double width, double height, Point2D bs_pos, std::vector<Obstacle> obstacles = {},
              bool reflective_boundary = true)
      : width_(width),
        height_(height),
        bs_pos_(bs_pos),
        obstacles_(std::move(obstacles)),
        reflective_boundary_(reflective_boundary) {
    if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height))
      throw std::invalid_argument("environment: area dimensions must be positive and finite");
    if (!inside(bs_pos))
      throw std::invalid_argument("environment: base station outside the area");
    for (const auto& ob : obstacles_) {
      if (!(ob.side > 0.0)) throw std::invalid_argument("environment: obstacle side must be positive");
      if (ob.xmin() < 0.0 || ob.ymin() < 0.0 || ob.xmax() > width_ || ob.ymax() > height_)
        throw std::invalid_argument("environment: obstacle not fully inside the area");
      if (ob.contains(bs_pos_))
        throw std::invalid_argument("environment: obstacle covers the base station");
    }
    build_surfaces();
  }

  double width() const { return width_; }
  double height() const { return height_; }
  Point2D bs_pos() const { return bs_pos_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  const std::vector<ReflectionSurface>& surfaces() const { return surfaces_; }
  bool reflective_boundary() const { return reflective_boundary_; }

  bool inside(Point2D p) const {
    return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= 0.0 && p.x <= width_ && p.y >= 0.0 &&
           p.y <= height_;
  }

  bool in_obstacle(Point2D p) const {
    return std::any_of(obstacles_.begin(), obstacles_.end(),
                       [&](const Obstacle& ob) { return ob.contains_strictly(p); });
  }

  // "cx,cy,side;cx,cy,side;..."
  std::string obstacles_to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
      if (i) os << ';';
      os << obstacles_[i].center.x << ',' << obstacles_[i].center.y << ',' << obstacles_[i].side;
    }
    return os.str();
  }

  static std::vector<Obstacle> parse_obstacles(const std::string& text) {
    std::vector<Obstacle> out;
    std::istringstream is(text);
    std::string triple;
    while (std::getline(is, triple, ';')) {
      if (triple.find_first_not_of(" \t") == std::string::npos) continue;
      std::istringstream ts(triple);
      Obstacle ob;
      char c1 = 0, c2 = 0;
      if (!(ts >> ob.center.x >> c1 >> ob.center.y >> c2 >> ob.side) || c1 != ',' || c2 != ',')
        throw std::invalid_argument("malformed obstacle triple '" + triple + "'");
      ts >> std::ws;
      if (!ts.eof()) throw std::invalid_argument("malformed obstacle triple '" + triple + "'");
      out.push_back(ob);
    }
    return out;
  }

 private:
  void build_surfaces() {
    surfaces_.clear();
    surfaces_.reserve(4 * obstacles_.size() + 4);
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
      const auto& ob = obstacles_[i];
      const Point2D ll{ob.xmin(), ob.ymin()}, lr{ob.xmax(), ob.ymin()};
      const Point2D ur{ob.xmax(), ob.ymax()}, ul{ob.xmin(), ob.ymax()};
      surfaces_.push_back({ll, lr, i, {0.0, -1.0}});
      surfaces_.push_back({lr, ur, i, {1.0, 0.0}});
      surfaces_.push_back({ur, ul, i, {0.0, 1.0}});
      surfaces_.push_back({ul, ll, i, {-1.0, 0.0}});
    }
    if (!reflective_boundary_) return;
    const Point2D o{0.0, 0.0}, bx{width_, 0.0}, bxy{width_, height_}, by{0.0, height_};
    surfaces_.push_back({o, bx, kBoundary, {0.0, 1.0}});
    surfaces_.push_back({bx, bxy, kBoundary, {-1.0, 0.0}});
    surfaces_.push_back({bxy, by, kBoundary, {0.0, -1.0}});
    surfaces_.push_back({by, o, kBoundary, {1.0, 0.0}});
  }

  double width_;
  double height_;
  Point2D bs_pos_;
  std::vector<Obstacle> obstacles_;
  bool reflective_boundary_;
  std::vector<ReflectionSurface> surfaces_;
};

inline bool is_los_clear(const Environment& env, Point2D a, Point2D b) {
  for (const auto& ob : env.obstacles())
    if (segment_hits_interior(ob, a, b)) return false;
  return true;
}

// Specular reflection of the a->b link off one surface, if it exists and
// both legs are unobstructed.
inline bool specular_path(const Environment& env, std::size_t surface_id, Point2D a, Point2D b,
                          PathGeometry& out) {
  const auto& s = env.surfaces()[surface_id];
  const Point2D n = s.inward_normal;
  const double da = dot(a - s.p1, n);
  const double db = dot(b - s.p1, n);
  if (!(da > 0.0) || !(db > 0.0)) return false;

  const Point2D image = a - 2.0 * da * n;
  const double t = da / (da + db);
  const Point2D q = image + t * (b - image);
  const Point2D seg = s.p2 - s.p1;
  const double u = dot(q - s.p1, seg) / dot(seg, seg);
  if (u < 0.0 || u > 1.0) return false;
  if (!is_los_clear(env, a, q) || !is_los_clear(env, q, b)) return false;

  const double leg_in = distance(a, q);
  out.kind = PathKind::Reflected;
  out.length = distance(image, b);
  out.departure_angle = bearing(a, q);
  out.arrival_angle = bearing(b, q);
  out.grazing_angle = std::asin(std::clamp(da / leg_in, 0.0, 1.0));
  out.surface_id = surface_id;
  out.reflection_point = q;
  return true;
}

// LOS path (when clear) followed by every valid single-bounce path, in
// surface order. Empty means the receiver is geometrically unreachable.
inline std::vector<PathGeometry> single_bounce_paths(const Environment& env, Point2D a, Point2D b) {
  std::vector<PathGeometry> paths;
  if (a == b) return paths;
  if (is_los_clear(env, a, b)) {
    PathGeometry los;
    los.kind = PathKind::Los;
    los.length = distance(a, b);
    los.departure_angle = bearing(a, b);
    los.arrival_angle = bearing(b, a);
    paths.push_back(los);
  }
  PathGeometry refl;
  for (std::size_t i = 0; i < env.surfaces().size(); ++i)
    if (specular_path(env, i, a, b, refl)) paths.push_back(refl);
  return paths;
}

}  // namespace celldisc
