#include <doctest.h>

#include <cmath>
#include <sstream>

#include "floodcover/metrics.hpp"
#include "test_support.hpp"

using namespace floodcover;

namespace {

const Rect kWorkspace{{0, 0}, {20, 20}};
constexpr Growth kStatic{0.0, 60.0};

} // namespace

TEST_SUITE("metrics") {
  TEST_CASE("coverage_rate") {
    const auto band = FloodField::band(10, 2, kStatic);
    SUBCASE("nobody over the flood") {
      const std::vector<Point2> p{{3, 3}, {17, 17}};
      CHECK(coverage_rate(band, 0, p, 2.0, kWorkspace) == 0.0);
      CHECK(coverage_rate(band, 0, {}, 2.0, kWorkspace) == 0.0);
    }
    SUBCASE("no flood at all") {
      const std::vector<Point2> p{{3, 3}};
      CHECK(coverage_rate(FloodField::none(), 0, p, 2.0, kWorkspace) == 0.0);
    }
    SUBCASE("flood inside one footprint") {
      const std::vector<Point2> p{{10, 10}};
      CHECK(coverage_rate(FloodField::blob({10, 10}, 0.5, kStatic), 0, p, 2.0, kWorkspace) == 1.0);
    }
    SUBCASE("band slice") {
      // Footprint [4,6] x [10.5,12.5] meets the band y in [8,12] in a 2 x 1.5
      // rectangle: 3 m^2 of the 80 m^2 flooded.
      const std::vector<Point2> p{{5, 11.5}};
      CHECK(std::abs(coverage_rate(band, 0, p, 2.0, kWorkspace, 256) - 3.0 / 80.0) <= 2.0 / 256);
      CHECK(std::abs(coverage_rate(band, 0, p, 2.0, kWorkspace, 1024) - 3.0 / 80.0) <= 2.0 / 1024);
    }
  }

  TEST_CASE("coverage grows with the footprint") {
    SplitMix64 gen(77);
    const auto field = make_scenario("ellipse");
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = test::random_sites(gen, kWorkspace, 1 + gen.next() % 24);
      double last = 0.0;
      for (double side : {0.5, 1.0, 2.0, 3.0, 5.0}) {
        const double c = coverage_rate(field, 7.0, p, side, kWorkspace);
        CHECK(c >= last);
        last = c;
      }
    }
  }

  TEST_CASE("coverage is stable under grid refinement") {
    SplitMix64 gen(78);
    for (const char *id : {"band", "blob", "ellipse"}) {
      const auto field = make_scenario(id);
      for (int trial = 0; trial < 5; ++trial) {
        const auto p = test::random_sites(gen, kWorkspace, 16);
        const double coarse = coverage_rate(field, 25.0, p, 2.0, kWorkspace, 256);
        const double fine = coverage_rate(field, 25.0, p, 2.0, kWorkspace, 512);
        CHECK(std::abs(coarse - fine) < 0.01);
      }
    }
  }

  TEST_CASE("converged") {
    const std::vector<Point2> p{{1, 1}, {2, 3}, {5, 8}};
    CHECK(converged(p, p, 1e-12));
    auto c = p;
    c[1].x += 2e-3;
    CHECK_FALSE(converged(p, c, 1e-3));
    CHECK(max_centroid_gap(p, c) == doctest::Approx(2e-3));
    CHECK_THROWS(converged(p, std::vector<Point2>{{1, 1}}, 1e-3));

    SplitMix64 gen(5);
    for (int trial = 0; trial < 100; ++trial) {
      auto q = p;
      for (auto &v : q) {
        const double r = 0.99e-3 * unit_double(gen.next());
        const double a = 6.283185307179586 * unit_double(gen.next());
        v += r * Point2{std::cos(a), std::sin(a)};
      }
      CHECK(converged(p, q, 1e-3));
    }
  }

  TEST_CASE("metrics csv round trip") {
    const std::vector<StepMetrics> rows{{0.0, 0.25, 12.5, 3, 0.7},
                                        {0.30000000000000004, 1.0 / 3.0, 1e-7, 16, 0.0}};
    std::stringstream s;
    write_metrics_csv(rows, s);
    CHECK(s.str().rfind("t,coverage_rate,H,n_f,max_centroid_gap\n0,0.25,12.5,3,0.7\n", 0) == 0);
    const auto back = read_metrics_csv(s);
    REQUIRE(back.size() == 2);
    CHECK(back[1].t == rows[1].t);
    CHECK(back[1].coverage_rate == rows[1].coverage_rate);
    CHECK(back[1].cost == rows[1].cost);
    CHECK(back[1].n_f == 16);

    std::istringstream bad("time,coverage\n");
    CHECK_THROWS(read_metrics_csv(bad));
  }
}
