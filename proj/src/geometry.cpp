#include "floodcover/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "floodcover/rng.hpp"

namespace floodcover {

namespace {

constexpr double kMinSeparation = 1e-9;
constexpr double kJitter = 1e-7;
constexpr double kMinArea = 1e-12;

} // namespace

Rect Rect::make(Point2 min, Point2 max) {
  if (!(min.x < max.x) || !(min.y < max.y))
    throw std::invalid_argument("Rect: min must be strictly below max on both axes");
  return Rect{min, max};
}

Point2 Rect::clamp(Point2 q, double margin) const {
  return {std::clamp(q.x, min.x + margin, max.x - margin),
          std::clamp(q.y, min.y + margin, max.y - margin)};
}

Cell rect_cell(const Rect &r, std::size_t site_index) {
  return Cell{{r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}}, site_index};
}

double polygon_area(const Cell &cell) {
  const auto &v = cell.vertices;
  double twice = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i)
    twice += cross(v[i], v[(i + 1) % n]);
  return 0.5 * twice;
}

Point2 vertex_average(const Cell &cell) {
  Point2 sum;
  for (auto p : cell.vertices)
    sum += p;
  return sum / static_cast<double>(cell.vertices.size());
}

bool contains(const Cell &cell, Point2 q, double tol) {
  const auto &v = cell.vertices;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % n];
    if (cross(b - a, q - a) < -tol)
      return false;
  }
  return true;
}

std::optional<Cell> clip_halfplane(const Cell &cell, Point2 a, Point2 b) {
  const Point2 normal = b - a;
  const Point2 mid = 0.5 * (a + b);
  const auto side = [&](Point2 q) { return dot(q - mid, normal); };

  const auto &in = cell.vertices;
  Cell out{{}, cell.site_index};
  out.vertices.reserve(in.size() + 1);
  for (std::size_t i = 0, n = in.size(); i < n; ++i) {
    const Point2 p = in[i];
    const Point2 q = in[(i + 1) % n];
    const double fp = side(p);
    const double fq = side(q);
    if (fp <= 0.0)
      out.vertices.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double s = fp / (fp - fq);
      out.vertices.push_back(p + s * (q - p));
    }
  }

  // Drop repeated vertices produced when an edge endpoint sits on the line.
  auto &v = out.vertices;
  v.erase(std::unique(v.begin(), v.end(),
                      [](Point2 l, Point2 r) { return squared_norm(l - r) < 1e-28; }),
          v.end());
  while (v.size() > 1 && squared_norm(v.front() - v.back()) < 1e-28)
    v.pop_back();

  if (v.size() < 3 || polygon_area(out) < kMinArea)
    return std::nullopt;
  return out;
}

std::vector<Point2> separate_coincident(std::span<const Point2> sites, const Rect &domain,
                                        std::uint64_t seed) {
  std::vector<Point2> out(sites.begin(), sites.end());
  for (std::size_t j = 1; j < out.size(); ++j) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      bool clash = false;
      for (std::size_t i = 0; i < j && !clash; ++i)
        clash = distance(out[i], out[j]) < kMinSeparation;
      if (!clash)
        break;
      SplitMix64 gen(seed ^ (0x9e3779b97f4a7c15ULL * (j + 1)) ^ (attempt << 32));
      const double angle = 2.0 * std::numbers::pi * unit_double(gen.next());
      Point2 moved = out[j] + kJitter * Point2{std::cos(angle), std::sin(angle)};
      if (!domain.strictly_contains(moved))
        moved = out[j] - kJitter * Point2{std::cos(angle), std::sin(angle)};
      out[j] = moved;
    }
  }
  return out;
}

std::vector<Cell> voronoi_partition(std::span<const Point2> sites, const Rect &domain,
                                    std::uint64_t seed) {
  for (auto s : sites) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !domain.strictly_contains(s))
      throw std::invalid_argument("voronoi_partition: site outside the domain");
  }
  const std::vector<Point2> p = separate_coincident(sites, domain, seed);

  std::vector<Cell> cells;
  cells.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    Cell cell = rect_cell(domain, i);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j == i)
        continue;
      auto clipped = clip_halfplane(cell, p[i], p[j]);
      // A site strictly inside the domain always keeps a neighbourhood of
      // itself, so an empty cell means the inputs were not separable.
      if (!clipped)
        throw std::runtime_error("voronoi_partition: degenerate cell");
      cell = std::move(*clipped);
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

} // namespace floodcover
