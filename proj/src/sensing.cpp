#include "floodcover/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace floodcover {

double Growth::level(double t) const {
  return 1.0 + amplitude * std::sin(2.0 * std::numbers::pi * t / period);
}

FloodField FloodField::band(double center_y, double half_height, Growth g) {
  return {FloodKind::band, {0.0, center_y}, 0.0, half_height, 0.0, g};
}

FloodField FloodField::blob(Point2 center, double radius, Growth g) {
  return {FloodKind::blob, center, radius, radius, 0.0, g};
}

FloodField FloodField::rotated_ellipse(Point2 center, double semi_major, double semi_minor,
                                       double orientation, Growth g) {
  return {FloodKind::rotated_ellipse, center, semi_major, semi_minor, orientation, g};
}

FloodField FloodField::everywhere() {
  FloodField f;
  f.kind = FloodKind::everywhere;
  return f;
}

bool FloodField::flooded(Point2 q, double t) const {
  switch (kind) {
  case FloodKind::none:
    return false;
  case FloodKind::everywhere:
    return true;
  case FloodKind::band:
    return std::abs(q.y - center.y) <= half_y * growth.level(t);
  case FloodKind::blob:
    return distance(q, center) <= half_x * growth.level(t);
  case FloodKind::rotated_ellipse: {
    const Point2 d = q - center;
    const double c = std::cos(orientation);
    const double s = std::sin(orientation);
    const double u = c * d.x + s * d.y;
    const double v = -s * d.x + c * d.y;
    const double level = growth.level(t);
    const double a = half_x * level;
    const double b = half_y * level;
    return (u * u) / (a * a) + (v * v) / (b * b) <= 1.0;
  }
  }
  return false;
}

namespace {

struct NamedScenario {
  std::string_view id;
  FloodField (*make)();
};

// All shapes are laid out for the default [0,20] x [0,20] m workspace.
constexpr NamedScenario kScenarios[] = {
    {"band", [] { return FloodField::band(10.0, 2.5); }},
    {"blob", [] { return FloodField::blob({4.5, 10.0}, 3.5); }},
    {"ellipse",
     [] { return FloodField::rotated_ellipse({10.0, 10.0}, 7.0, 1.0, std::numbers::pi / 5); }},
    {"none", [] { return FloodField::none(); }},
    {"all", [] { return FloodField::everywhere(); }},
};

} // namespace

FloodField make_scenario(std::string_view id) {
  for (const auto &s : kScenarios)
    if (s.id == id)
      return s.make();
  throw std::invalid_argument("unknown scenario: " + std::string(id));
}

bool is_known_scenario(std::string_view id) {
  return std::any_of(std::begin(kScenarios), std::end(kScenarios),
                     [&](const NamedScenario &s) { return s.id == id; });
}

FloodMask::FloodMask(int width, Point2 origin, double pixel_size)
    : width(width), origin(origin), pixel_size(pixel_size),
      cells(static_cast<std::size_t>(width) * width, 0) {
  if (width < 8)
    throw std::invalid_argument("FloodMask: width must be at least 8 pixels");
  if (!(pixel_size > 0.0))
    throw std::invalid_argument("FloodMask: pixel size must be positive");
}

std::int64_t FloodMask::count() const {
  return std::count(cells.begin(), cells.end(), std::uint8_t{1});
}

FloodMask capture(const FloodField &field, double t, Point2 agent_pos, int width, double pixel_size,
                  const Rect &workspace) {
  const double half = 0.5 * pixel_size * (width - 1);
  FloodMask mask(width, agent_pos - Point2{half, half}, pixel_size);
  for (int r = 0; r < width; ++r) {
    for (int c = 0; c < width; ++c) {
      const Point2 q = mask.pixel_center(r, c);
      mask.set(r, c, workspace.contains(q) && field.flooded(q, t));
    }
  }
  return mask;
}

ImageMoments image_moments(const FloodMask &mask) {
  std::int64_t m00 = 0, m10 = 0, m01 = 0, m20 = 0, m02 = 0, m11 = 0;
  for (std::int64_t r = 0; r < mask.width; ++r) {
    for (std::int64_t c = 0; c < mask.width; ++c) {
      if (!mask.at(static_cast<int>(r), static_cast<int>(c)))
        continue;
      ++m00;
      m10 += c;
      m01 += r;
      m20 += c * c;
      m02 += r * r;
      m11 += c * r;
    }
  }
  ImageMoments out;
  out.m00 = m00;
  if (m00 == 0)
    return out;
  // Central moments from integer raw moments: one rounding per entry.
  const auto n = static_cast<double>(m00);
  const auto n2 = n * n;
  out.mean = {static_cast<double>(m10) / n, static_cast<double>(m01) / n};
  out.covariance = {static_cast<double>(m00 * m20 - m10 * m10) / n2,
                    static_cast<double>(m00 * m11 - m10 * m01) / n2,
                    static_cast<double>(m00 * m02 - m01 * m01) / n2};
  return out;
}

Detection detect(const FloodMask &mask, double tau) {
  const ImageMoments m = image_moments(mask);
  Detection d;
  d.fraction = static_cast<double>(m.m00) / (static_cast<double>(mask.width) * mask.width);
  d.rho = m.m00 > 0 && d.fraction >= tau;
  if (!d.rho) {
    d.mu = mask.footprint_center();
    d.sigma = Mat2::identity(kCovEpsilon);
    return d;
  }
  const double ps = mask.pixel_size;
  d.mu = mask.origin + ps * m.mean;
  const double ps2 = ps * ps;
  d.sigma = regularize_covariance(
      {m.covariance.sxx * ps2, m.covariance.sxy * ps2, m.covariance.syy * ps2});
  return d;
}

Point2 spiral_point(Point2 origin, double theta, const SpiralParams &params) {
  const double r = params.a * theta;
  return origin + r * Point2{std::cos(theta), std::sin(theta)};
}

Point2 spiral_step(Point2 origin, double &theta, const SpiralParams &params, double dt,
                   const Rect &workspace) {
  theta += params.omega * dt;
  return workspace.clamp(spiral_point(origin, theta, params), 1e-3);
}

void write_mask_pbm(const FloodMask &mask, std::ostream &out) {
  out << "P1\n" << mask.width << ' ' << mask.width << '\n';
  for (int r = mask.width - 1; r >= 0; --r) {
    for (int c = 0; c < mask.width; ++c)
      out << (mask.at(r, c) ? '1' : '0') << (c + 1 < mask.width ? ' ' : '\n');
  }
}

} // namespace floodcover
