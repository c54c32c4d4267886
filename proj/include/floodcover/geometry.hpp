#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace floodcover {

/// Planar position in meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2 &operator+=(Point2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Point2 &operator-=(Point2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
constexpr double squared_norm(Point2 a) { return dot(a, a); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Axis-aligned rectangle; the workspace is always one of these.
struct Rect {
  Point2 min;
  Point2 max;

  /// Throws std::invalid_argument unless min < max on both axes.
  static Rect make(Point2 min, Point2 max);

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double area() const { return width() * height(); }
  Point2 center() const { return 0.5 * (min + max); }

  bool contains(Point2 q) const {
    return q.x >= min.x && q.x <= max.x && q.y >= min.y && q.y <= max.y;
  }
  bool strictly_contains(Point2 q) const {
    return q.x > min.x && q.x < max.x && q.y > min.y && q.y < max.y;
  }
  /// Clamp into the rectangle shrunk by `margin` on every side.
  Point2 clamp(Point2 q, double margin = 0.0) const;
};

/// Convex polygon, counterclockwise, tagged with the site it belongs to.
struct Cell {
  std::vector<Point2> vertices;
  std::size_t site_index = 0;
};

Cell rect_cell(const Rect &r, std::size_t site_index = 0);

/// Shoelace area; positive for CCW input.
double polygon_area(const Cell &cell);

/// Vertex average, used only as a fallback centroid for slivers.
Point2 vertex_average(const Cell &cell);

/// Inclusive point-in-convex-polygon test (points on edges count as inside).
bool contains(const Cell &cell, Point2 q, double tol = 1e-12);

/// Keep the part of `cell` on the side of `a` relative to the perpendicular
/// bisector of segment ab. Returns nullopt when fewer than 3 vertices or less
/// than 1e-12 m^2 of area survive.
std::optional<Cell> clip_halfplane(const Cell &cell, Point2 a, Point2 b);

/// Separate sites closer than 1e-9 m by nudging the later-indexed one by 1e-7 m
/// in a direction derived from `seed`. Result stays strictly inside `domain`.
std::vector<Point2> separate_coincident(std::span<const Point2> sites, const Rect &domain,
                                        std::uint64_t seed);

/// Bounded Voronoi tessellation by successive bisector clipping of the domain.
/// Every site must lie strictly inside `domain` (std::invalid_argument otherwise).
/// Cell i belongs to site i; near-coincident sites are separated first.
std::vector<Cell> voronoi_partition(std::span<const Point2> sites, const Rect &domain,
                                    std::uint64_t seed = 0);

} // namespace floodcover
