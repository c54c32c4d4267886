#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "floodcover/geometry.hpp"
#include "test_support.hpp"

using namespace floodcover;
using floodcover::test::nearest_site;
using floodcover::test::random_sites;
using floodcover::test::uniform_point;

namespace {

const Rect kUnit{{0, 0}, {1, 1}};
const Rect kTen{{0, 0}, {10, 10}};

bool is_convex_ccw(const Cell &c) {
  const auto &v = c.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i], b = v[(i + 1) % v.size()], d = v[(i + 2) % v.size()];
    if (cross(b - a, d - b) < -1e-12)
      return false;
  }
  return polygon_area(c) > 0.0;
}

bool same_polygon(const Cell &a, const Cell &b, double tol) {
  if (a.vertices.size() != b.vertices.size())
    return false;
  // Compare as cyclic sequences.
  for (std::size_t shift = 0; shift < a.vertices.size(); ++shift) {
    bool all = true;
    for (std::size_t i = 0; i < a.vertices.size() && all; ++i)
      all = distance(a.vertices[i], b.vertices[(i + shift) % b.vertices.size()]) <= tol;
    if (all)
      return true;
  }
  return false;
}

} // namespace

TEST_SUITE("geometry") {
  TEST_CASE("Rect rejects inverted bounds") {
    CHECK_THROWS_AS(Rect::make({1, 0}, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Rect::make({0, 0}, {1, 0}), std::invalid_argument);
    CHECK(Rect::make({0, 0}, {2, 3}).area() == 6.0);
  }

  TEST_CASE("polygon_area") {
    CHECK(polygon_area(rect_cell(kUnit)) == doctest::Approx(1.0));
    CHECK(polygon_area(Cell{{{0, 0}, {2, 0}, {0, 2}}, 0}) == doctest::Approx(2.0));

    Cell hex;
    for (int k = 0; k < 6; ++k) {
      const double a = k * std::numbers::pi / 3;
      hex.vertices.push_back({std::cos(a), std::sin(a)});
    }
    // 3 sqrt(3) / 2
    CHECK(polygon_area(hex) == doctest::Approx(2.598076211).epsilon(1e-9));
  }

  TEST_CASE("clip_halfplane keeps the side of the first site") {
    SUBCASE("axis-aligned bisector") {
      const auto half = clip_halfplane(rect_cell(kUnit), {0.25, 0.5}, {0.75, 0.5});
      REQUIRE(half);
      CHECK(polygon_area(*half) == doctest::Approx(0.5));
      CHECK(is_convex_ccw(*half));
      for (auto v : half->vertices)
        CHECK(v.x <= 0.5 + 1e-12);
    }
    SUBCASE("bisector outside the cell is a no-op") {
      const auto same = clip_halfplane(rect_cell(kUnit), {0.5, 0.5}, {5.0, 0.5});
      REQUIRE(same);
      CHECK(same_polygon(*same, rect_cell(kUnit), 1e-12));
    }
    SUBCASE("diagonal bisector gives the lower-left triangle") {
      // Bisector of (0,0)-(1,1) is x + y = 1.
      const auto tri = clip_halfplane(rect_cell(kUnit), {0, 0}, {1, 1});
      REQUIRE(tri);
      CHECK(tri->vertices.size() == 3);
      CHECK(polygon_area(*tri) == doctest::Approx(0.5));
      CHECK(same_polygon(*tri, Cell{{{0, 0}, {1, 0}, {0, 1}}, 0}, 1e-12));
    }
    SUBCASE("bisector removing the whole cell is empty") {
      CHECK_FALSE(clip_halfplane(rect_cell(kUnit), {5.0, 0.5}, {0.5, 0.5}));
    }
    SUBCASE("sliver below the area floor is empty") {
      // Keeps only x <= 1e-13 of the unit square.
      CHECK_FALSE(clip_halfplane(rect_cell(kUnit), {-1.0, 0.5}, {1.0 + 2e-13, 0.5}));
    }
  }

  TEST_CASE("voronoi_partition basic cases") {
    SUBCASE("one site owns the whole square") {
      const std::vector<Point2> sites{{5, 5}};
      const auto cells = voronoi_partition(sites, kTen);
      REQUIRE(cells.size() == 1);
      CHECK(polygon_area(cells[0]) == doctest::Approx(100.0));
    }
    SUBCASE("two sites split at x = 5") {
      const std::vector<Point2> sites{{2.5, 5}, {7.5, 5}};
      const auto cells = voronoi_partition(sites, kTen);
      REQUIRE(cells.size() == 2);
      CHECK(same_polygon(cells[0], Cell{{{0, 0}, {5, 0}, {5, 10}, {0, 10}}, 0}, 1e-12));
      CHECK(same_polygon(cells[1], Cell{{{5, 0}, {10, 0}, {10, 10}, {5, 10}}, 1}, 1e-12));
      CHECK(cells[0].site_index == 0);
      CHECK(cells[1].site_index == 1);
    }
    SUBCASE("sites outside or on the boundary are rejected") {
      const std::vector<Point2> outside{{5, 5}, {11, 5}};
      CHECK_THROWS_AS(voronoi_partition(outside, kTen), std::invalid_argument);
      const std::vector<Point2> boundary{{0, 5}};
      CHECK_THROWS_AS(voronoi_partition(boundary, kTen), std::invalid_argument);
    }
    SUBCASE("coincident sites are separated deterministically") {
      const std::vector<Point2> sites{{5, 5}, {5, 5}, {2, 2}};
      const auto a = voronoi_partition(sites, kTen, 42);
      const auto b = voronoi_partition(sites, kTen, 42);
      REQUIRE(a.size() == 3);
      double total = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        total += polygon_area(a[i]);
        CHECK(same_polygon(a[i], b[i], 0.0));
      }
      CHECK(total == doctest::Approx(100.0).epsilon(1e-9));
      const auto moved = separate_coincident(sites, kTen, 42);
      CHECK(moved[0] == sites[0]);
      CHECK(distance(moved[0], moved[1]) == doctest::Approx(1e-7).epsilon(1e-6));
    }
  }

  TEST_CASE("nearest-site oracle on random instances") {
    SplitMix64 gen(2024);
    for (int instance = 0; instance < 5; ++instance) {
      const auto sites = random_sites(gen, kUnit, 10);
      const auto cells = voronoi_partition(sites, kUnit);
      double total = 0.0;
      for (const auto &c : cells) {
        CHECK(is_convex_ccw(c));
        for (auto v : c.vertices)
          CHECK(kUnit.contains(v));
        total += polygon_area(c);
      }
      CHECK(std::abs(total - 1.0) < 1e-6);

      int mismatches = 0;
      for (int k = 0; k < 10000; ++k) {
        const Point2 q = uniform_point(gen, kUnit);
        const std::size_t owner = nearest_site(sites, q);
        if (!contains(cells[owner], q, 1e-9))
          ++mismatches;
        // No other cell may claim q unless q is (numerically) equidistant.
        for (const auto &c : cells) {
          if (c.site_index != owner && contains(c, q, -1e-9))
            CHECK(distance(q, sites[c.site_index]) <= distance(q, sites[owner]) + 1e-9);
        }
      }
      CHECK(mismatches == 0);
    }
  }

  TEST_CASE("permutation and translation equivariance") {
    SplitMix64 gen(7);
    const Rect box{{0, 0}, {20, 20}};
    for (int instance = 0; instance < 10; ++instance) {
      const std::size_t n = 2 + gen.next() % 20;
      auto sites = random_sites(gen, box, n);
      const auto cells = voronoi_partition(sites, box);

      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i)
        perm[i] = n - 1 - i;
      std::vector<Point2> permuted(n);
      for (std::size_t i = 0; i < n; ++i)
        permuted[i] = sites[perm[i]];
      const auto pcells = voronoi_partition(permuted, box);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(same_polygon(pcells[i], cells[perm[i]], 1e-9));

      const Point2 shift{3.25, -7.5};
      std::vector<Point2> moved(n);
      for (std::size_t i = 0; i < n; ++i)
        moved[i] = sites[i] + shift;
      const auto tcells = voronoi_partition(moved, Rect{box.min + shift, box.max + shift});
      for (std::size_t i = 0; i < n; ++i) {
        Cell expected = cells[i];
        for (auto &v : expected.vertices)
          v += shift;
        CHECK(same_polygon(tcells[i], expected, 1e-9));
      }
    }
  }
}
