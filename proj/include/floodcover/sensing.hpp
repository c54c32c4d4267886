#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "floodcover/density.hpp"
#include "floodcover/geometry.hpp"

namespace floodcover {

/// Default fraction of flooded footprint pixels that counts as a detection.
inline constexpr double kDefaultTau = 0.02;

/// level(t) = 1 + amplitude * sin(2 pi t / period).
struct Growth {
  double amplitude = 0.15;
  double period = 60.0;

  double level(double t) const;
};

enum class FloodKind { none, everywhere, band, blob, rotated_ellipse };

/// Ground-truth flooded set as a deterministic predicate of (q, t).
///
/// `band` is horizontal: |y - center.y| <= half_y * level.
/// `blob` is a disc of radius half_x * level.
/// `rotated_ellipse` has semi-axes (half_x, half_y) * level, with the
/// half_x axis rotated by `orientation` radians from +x.
/// `none` and `everywhere` are degenerate fields used to exercise the
/// search and pure-coverage branches.
struct FloodField {
  FloodKind kind = FloodKind::none;
  Point2 center;
  double half_x = 0.0;
  double half_y = 0.0;
  double orientation = 0.0;
  Growth growth;

  static FloodField band(double center_y, double half_height, Growth g = {});
  static FloodField blob(Point2 center, double radius, Growth g = {});
  static FloodField rotated_ellipse(Point2 center, double semi_major, double semi_minor,
                                    double orientation, Growth g = {});
  static FloodField none() { return {}; }
  static FloodField everywhere();

  bool flooded(Point2 q, double t) const;
};

/// Named scenarios on the default 20 x 20 m workspace: "band", "blob",
/// "ellipse", "none" and "all". Throws std::invalid_argument for anything else.
FloodField make_scenario(std::string_view id);
bool is_known_scenario(std::string_view id);

/// Square W x W boolean snapshot. Pixel (row, col) has its center at
/// origin + pixel_size * (col, row); rows grow northwards.
struct FloodMask {
  int width = 0;
  Point2 origin;
  double pixel_size = 0.0;
  std::vector<std::uint8_t> cells;

  FloodMask(int width, Point2 origin, double pixel_size);

  bool at(int row, int col) const { return cells[static_cast<std::size_t>(row) * width + col] != 0; }
  void set(int row, int col, bool value) {
    cells[static_cast<std::size_t>(row) * width + col] = value ? 1 : 0;
  }
  Point2 pixel_center(int row, int col) const {
    return origin + pixel_size * Point2{static_cast<double>(col), static_cast<double>(row)};
  }
  Point2 footprint_center() const {
    return origin + 0.5 * pixel_size * Point2{width - 1.0, width - 1.0};
  }
  double side() const { return width * pixel_size; }
  std::int64_t count() const;
};

/// Pixels whose centers fall outside `workspace` are never flooded.
FloodMask capture(const FloodField &field, double t, Point2 agent_pos, int width, double pixel_size,
                  const Rect &workspace);

/// Raw image moments in pixel units (x = column, y = row), normalized by m00.
struct ImageMoments {
  std::int64_t m00 = 0;
  Point2 mean;
  Mat2 covariance;
};

ImageMoments image_moments(const FloodMask &mask);

struct Detection {
  bool rho = false;
  double fraction = 0.0;
  Point2 mu;
  Mat2 sigma;
};

/// rho = 1 iff fraction >= tau (and at least one pixel is flooded). On
/// detection mu/sigma are the world-frame centroid and regularized
/// covariance of the flooded pixels; otherwise the footprint center and
/// kCovEpsilon * I as placeholders.
Detection detect(const FloodMask &mask, double tau = kDefaultTau);

/// Archimedean spiral r = a * theta traced at angular rate omega.
struct SpiralParams {
  double a = 0.3;
  double omega = 0.5;
};

Point2 spiral_point(Point2 origin, double theta, const SpiralParams &params);

/// Advance `theta` by omega * dt and return the new spiral position, clamped
/// 1e-3 m inside the workspace.
Point2 spiral_step(Point2 origin, double &theta, const SpiralParams &params, double dt,
                   const Rect &workspace);

/// Plain bitmap (P1) with 1 = flooded, north row first.
void write_mask_pbm(const FloodMask &mask, std::ostream &out);

} // namespace floodcover
