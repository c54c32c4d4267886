#include "floodcover/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "floodcover/rng.hpp"

namespace floodcover {

namespace {

constexpr double kWorkspaceMargin = 1e-3;
constexpr double kInsideTol = 1e-12;

struct IndexRange {
  int first;
  int last;
};

// Grid midpoints origin + (k + 0.5) h falling in [lo, hi].
IndexRange midpoints_within(double lo, double hi, double origin, double h, int count) {
  const int first = static_cast<int>(std::ceil((lo - origin) / h - 0.5));
  const int last = static_cast<int>(std::floor((hi - origin) / h - 0.5));
  return {std::max(first, 0), std::min(last, count - 1)};
}

struct Bounds {
  Point2 lo{INFINITY, INFINITY};
  Point2 hi{-INFINITY, -INFINITY};
};

Bounds bounds_of(const Cell &cell) {
  Bounds b;
  for (auto v : cell.vertices) {
    b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y)};
    b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y)};
  }
  return b;
}

CellMoments sliver_fallback(const Cell &cell, Point2 site, double phi0) {
  const Point2 c = vertex_average(cell);
  const double m = phi0 * polygon_area(cell);
  return {m, c, m * squared_norm(c - site)};
}

} // namespace

DensityGrid DensityGrid::sample(const DensityField &field, const Rect &domain, int res) {
  DensityGrid g{domain, res, field.phi0(),
                std::vector<double>(static_cast<std::size_t>(res) * res, field.phi0())};
  field.accumulate_grid(domain, res, res, g.values);
  return g;
}

CellMoments cell_mass_centroid(const Cell &cell, const DensityField &field, int res) {
  const Bounds b = bounds_of(cell);
  const double hx = (b.hi.x - b.lo.x) / res;
  const double hy = (b.hi.y - b.lo.y) / res;
  double mass = 0.0;
  Point2 first;
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      const Point2 q{b.lo.x + (i + 0.5) * hx, b.lo.y + (j + 0.5) * hy};
      if (!contains(cell, q, kInsideTol))
        continue;
      const double phi = field.evaluate(q);
      mass += phi;
      first += phi * q;
    }
  }
  if (mass == 0.0)
    return sliver_fallback(cell, vertex_average(cell), field.phi0());
  return {mass * hx * hy, first / mass, 0.0};
}

CellMoments cell_moments(const Cell &cell, Point2 site, const DensityGrid &grid) {
  const Bounds b = bounds_of(cell);
  const double hx = grid.dx();
  const double hy = grid.dy();
  const auto [i0, i1] = midpoints_within(b.lo.x, b.hi.x, grid.domain.min.x, hx, grid.res);
  const auto [j0, j1] = midpoints_within(b.lo.y, b.hi.y, grid.domain.min.y, hy, grid.res);

  double mass = 0.0;
  double mx = 0.0;
  double my = 0.0;
  double second = 0.0;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const Point2 q = grid.point(i, j);
      if (!contains(cell, q, kInsideTol))
        continue;
      const double phi = grid.at(i, j);
      mass += phi;
      mx += phi * q.x;
      my += phi * q.y;
      second += phi * squared_norm(q - site);
    }
  }
  if (mass == 0.0)
    return sliver_fallback(cell, site, grid.phi0);
  const double area = hx * hy;
  return {mass * area, {mx / mass, my / mass}, second * area};
}

double locational_cost(std::span<const Point2> positions, std::span<const Cell> cells,
                       const DensityField &field, const Rect &domain, int res) {
  const DensityGrid grid = DensityGrid::sample(field, domain, res);
  double h = 0.0;
  for (const auto &cell : cells)
    h += cell_moments(cell, positions[cell.site_index], grid).cost;
  return h;
}

std::vector<Point2> cost_gradient(std::span<const Point2> positions, std::span<const Cell> cells,
                                  const DensityField &field, const Rect &domain, int res) {
  const DensityGrid grid = DensityGrid::sample(field, domain, res);
  std::vector<Point2> grad(positions.size());
  for (const auto &cell : cells) {
    const Point2 p = positions[cell.site_index];
    const CellMoments m = cell_moments(cell, p, grid);
    grad[cell.site_index] = 2.0 * m.mass * (p - m.centroid);
  }
  return grad;
}

Point2 control_step(Point2 p, Point2 centroid, double k, double dt, const Rect &workspace) {
  return workspace.clamp(p + dt * (-k) * (p - centroid), kWorkspaceMargin);
}

std::vector<Point2> initial_positions(std::size_t n, const Rect &domain, std::uint64_t seed) {
  if (n == 0)
    throw std::invalid_argument("initial_positions: n must be at least 1");
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  const double pitch_x = domain.width() / static_cast<double>(side);
  const double pitch_y = domain.height() / static_cast<double>(side);
  SplitMix64 gen(seed ^ 0x5851f42d4c957f2dULL);
  std::vector<Point2> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double row = static_cast<double>(k / side);
    const double col = static_cast<double>(k % side);
    const double jx = 0.02 * pitch_x * (2.0 * unit_double(gen.next()) - 1.0);
    const double jy = 0.02 * pitch_y * (2.0 * unit_double(gen.next()) - 1.0);
    out.push_back({domain.min.x + (col + 0.5) * pitch_x + jx,
                   domain.min.y + (row + 0.5) * pitch_y + jy});
  }
  return out;
}

double Partition::cost() const {
  double h = 0.0;
  for (const auto &m : moments)
    h += m.cost;
  return h;
}

std::vector<Point2> Partition::centroids() const {
  std::vector<Point2> c;
  c.reserve(moments.size());
  for (const auto &m : moments)
    c.push_back(m.centroid);
  return c;
}

Partition partition(std::span<const Point2> positions, const DensityGrid &grid,
                    std::uint64_t seed) {
  Partition part;
  part.cells = voronoi_partition(positions, grid.domain, seed);
  part.moments.reserve(part.cells.size());
  for (const auto &cell : part.cells)
    part.moments.push_back(cell_moments(cell, positions[cell.site_index], grid));
  return part;
}

std::vector<Point2> lloyd_step(std::span<const Point2> positions, const Partition &part, double k,
                               double dt, const Rect &workspace) {
  std::vector<Point2> next(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i)
    next[i] = control_step(positions[i], part.moments[i].centroid, k, dt, workspace);
  return next;
}

std::size_t SimConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

void SimConfig::validate() const {
  const auto require = [](bool ok, const char *what) {
    if (!ok)
      throw std::invalid_argument(what);
  };
  require(n >= 1, "n must be at least 1");
  require(k > 0.0 && std::isfinite(k), "k must be positive");
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
  require(k * dt < 1.0, "k * dt must be below 1");
  require(t_end > 0.0 && std::isfinite(t_end), "t_end must be positive");
  require(quadrature_res >= 64, "quadrature_res must be at least 64");
  require(phi0 > 0.0 && std::isfinite(phi0), "phi0 must be positive");
  require(is_known_scenario(scenario), "unknown scenario");
  require(growth_period > 0.0, "growth_period must be positive");
  require(growth_amplitude >= 0.0 && growth_amplitude < 1.0, "growth_amplitude must be in [0, 1)");
  require(spiral.omega > 0.0 && spiral.a >= 0.0, "spiral parameters must be positive");
  require(tau >= 0.0 && tau <= 1.0, "tau must be in [0, 1]");
  require(mask_width >= 8, "mask_width must be at least 8");
  require(footprint > 0.0, "footprint must be positive");
  require(eval_res >= 256, "eval_res must be at least 256");
  require(convergence_tol > 0.0, "convergence_tol must be positive");
  require(workspace.min.x < workspace.max.x && workspace.min.y < workspace.max.y,
          "workspace must be non-empty");
}

FloodField scenario_field(const SimConfig &config) {
  FloodField field = make_scenario(config.scenario);
  field.growth = {config.growth_amplitude, config.growth_period};
  return field;
}

DensityField RunRecord::density_at(std::size_t index) const {
  const StepRecord &step = steps.at(index);
  DensityField field(step.components.size(), config.phi0, config.mode);
  for (std::size_t i = 0; i < step.components.size(); ++i) {
    const auto &c = step.components[i];
    field.set_component(i, c.mu, c.sigma, c.rho);
  }
  return field;
}

std::vector<StepMetrics> RunRecord::metrics() const {
  std::vector<StepMetrics> rows;
  rows.reserve(steps.size());
  for (const auto &s : steps)
    rows.push_back(s.metrics());
  return rows;
}

RunRecord simulate(const SimConfig &config, const FloodField &field) {
  config.validate();
  const Rect &ws = config.workspace;
  const std::size_t n = config.n;

  std::vector<AgentState> agents(n);
  {
    const auto start = initial_positions(n, ws, config.seed);
    for (std::size_t i = 0; i < n; ++i) {
      agents[i].position = ws.clamp(start[i], kWorkspaceMargin);
      agents[i].spiral_origin = agents[i].position;
      agents[i].goal = agents[i].position;
    }
  }

  DensityField density(n, config.phi0, config.mode);
  DensityGrid grid = DensityGrid::sample(density, ws, config.quadrature_res);
  bool frozen = false;  // every agent has detected; switching logic is over
  bool settled = false; // frozen and at a centroidal configuration

  RunRecord record{config, {}};
  const std::size_t steps = config.step_count();
  record.steps.reserve(steps + 1);
  std::vector<Point2> positions(n);

  for (std::size_t s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) * config.dt;
    for (std::size_t i = 0; i < n; ++i)
      positions[i] = agents[i].position;

    if (!frozen) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        auto &a = agents[i];
        const FloodMask mask =
            capture(field, t, a.position, config.mask_width, config.pixel_size(), ws);
        a.detection = detect(mask, config.tau);
        if (a.detection.rho) {
          a.rho = true;
          density.set_component(i, a.detection.mu, a.detection.sigma, true);
          changed = true;
        }
      }
      if (changed)
        grid = DensityGrid::sample(density, ws, config.quadrature_res);
    }

    int n_f = 0;
    for (const auto &a : agents)
      n_f += a.rho ? 1 : 0;
    if (static_cast<std::size_t>(n_f) == n)
      frozen = true;

    const Partition part = partition(positions, grid, config.seed);
    const std::vector<Point2> centroids = part.centroids();

    StepRecord rec;
    rec.t = t;
    rec.positions = positions;
    rec.rho.reserve(n);
    for (const auto &a : agents)
      rec.rho.push_back(a.rho ? 1 : 0);
    rec.n_f = n_f;
    rec.cost = part.cost();
    rec.coverage_rate =
        coverage_rate(field, t, positions, config.footprint, ws, config.eval_res);
    rec.max_centroid_gap = max_centroid_gap(positions, centroids);
    rec.components = density.components();
    record.steps.push_back(std::move(rec));

    if (s == steps)
      break;

    if (n_f == 0) {
      for (auto &a : agents) {
        a.position = spiral_step(a.spiral_origin, a.spiral_phase, config.spiral, config.dt, ws);
        a.goal = a.position;
      }
      continue;
    }
    if (frozen && !settled && converged(positions, centroids, config.convergence_tol))
      settled = true;
    if (settled)
      continue;
    for (std::size_t i = 0; i < n; ++i) {
      agents[i].goal = centroids[i];
      agents[i].position = control_step(positions[i], centroids[i], config.k, config.dt, ws);
    }
  }
  return record;
}

} // namespace floodcover
