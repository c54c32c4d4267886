#pragma once

#include <vector>

#include "floodcover/geometry.hpp"
#include "floodcover/rng.hpp"

namespace floodcover::test {

inline Point2 uniform_point(SplitMix64 &gen, const Rect &r) {
  return {r.min.x + r.width() * unit_double(gen.next()),
          r.min.y + r.height() * unit_double(gen.next())};
}

inline std::vector<Point2> random_sites(SplitMix64 &gen, const Rect &r, std::size_t n) {
  std::vector<Point2> sites;
  for (std::size_t i = 0; i < n; ++i)
    sites.push_back(uniform_point(gen, r));
  return sites;
}

// Brute-force owner of q under the Voronoi definition.
inline std::size_t nearest_site(const std::vector<Point2> &sites, Point2 q) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < sites.size(); ++i)
    if (distance(q, sites[i]) < distance(q, sites[best]))
      best = i;
  return best;
}

} // namespace floodcover::test
