#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "floodcover/density.hpp"
#include "floodcover/geometry.hpp"
#include "floodcover/metrics.hpp"
#include "floodcover/sensing.hpp"

namespace floodcover {

/// Midpoint samples of a density over a rectangle, row-major (j * res + i).
/// One grid is shared by every cell in a step, so phi is evaluated once per
/// sample rather than once per sample per cell.
struct DensityGrid {
  Rect domain;
  int res = 0;
  double phi0 = kDefaultPhi0;
  std::vector<double> values;

  static DensityGrid sample(const DensityField &field, const Rect &domain, int res);

  double dx() const { return domain.width() / res; }
  double dy() const { return domain.height() / res; }
  Point2 point(int i, int j) const {
    return {domain.min.x + (i + 0.5) * dx(), domain.min.y + (j + 0.5) * dy()};
  }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * res + i]; }
};

struct CellMoments {
  double mass = 0.0;
  Point2 centroid;
  /// Integral of |q - site|^2 phi(q) over the cell.
  double cost = 0.0;
};

/// Mass and density-weighted centroid of one cell from a res x res midpoint
/// grid over the cell's bounding box. A sliver that captures no sample falls
/// back to its vertex average with mass phi0 * area.
CellMoments cell_mass_centroid(const Cell &cell, const DensityField &field, int res);

/// Same integrals restricted to the samples of a shared grid. `site` is the
/// generator used for the cost term.
CellMoments cell_moments(const Cell &cell, Point2 site, const DensityGrid &grid);

/// H = sum_i int_{V_i} |q - p_i|^2 phi(q) dq on a res x res grid over `domain`.
double locational_cost(std::span<const Point2> positions, std::span<const Cell> cells,
                       const DensityField &field, const Rect &domain, int res);

/// dH/dp_i = 2 m_i (p_i - c_i).
std::vector<Point2> cost_gradient(std::span<const Point2> positions, std::span<const Cell> cells,
                                  const DensityField &field, const Rect &domain, int res);

/// Explicit Euler step of p' = -k (p - c), clamped 1e-3 m inside the workspace.
Point2 control_step(Point2 p, Point2 centroid, double k, double dt, const Rect &workspace);

/// ceil(sqrt(n))^2 lattice filled row by row from the south-west, with
/// seeded jitter of up to 2% of the pitch on each axis.
std::vector<Point2> initial_positions(std::size_t n, const Rect &domain, std::uint64_t seed);

/// Voronoi cells and their moments for one configuration.
struct Partition {
  std::vector<Cell> cells;
  std::vector<CellMoments> moments;

  double cost() const;
  std::vector<Point2> centroids() const;
};

Partition partition(std::span<const Point2> positions, const DensityGrid &grid,
                    std::uint64_t seed = 0);

/// One Lloyd iteration under the controller; returns the new positions.
std::vector<Point2> lloyd_step(std::span<const Point2> positions, const Partition &part, double k,
                               double dt, const Rect &workspace);

struct SimConfig {
  std::size_t n = 16;
  double k = 1.0;
  double dt = 0.1;
  double t_end = 50.0;
  int quadrature_res = 128;
  std::uint64_t seed = 0;
  DensityMode mode = DensityMode::full;
  double phi0 = kDefaultPhi0;
  std::string scenario = "blob";
  double growth_amplitude = 0.15;
  double growth_period = 60.0;
  SpiralParams spiral;
  double tau = kDefaultTau;
  int mask_width = 32;
  double footprint = 2.0;
  int eval_res = 256;
  double convergence_tol = 1e-3;
  Rect workspace{{0.0, 0.0}, {20.0, 20.0}};

  double pixel_size() const { return footprint / mask_width; }
  std::size_t step_count() const;
  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// The configured scenario with the configured growth law.
FloodField scenario_field(const SimConfig &config);

struct AgentState {
  Point2 position;
  bool rho = false;
  double spiral_phase = 0.0;
  Point2 spiral_origin;
  Point2 goal;
  Detection detection;
};

struct StepRecord {
  double t = 0.0;
  std::vector<Point2> positions;
  std::vector<std::uint8_t> rho;
  int n_f = 0;
  double cost = 0.0;
  double coverage_rate = 0.0;
  double max_centroid_gap = 0.0;
  /// Density components in force at this step (only rho=1 entries matter).
  std::vector<GaussianComponent> components;

  StepMetrics metrics() const { return {t, coverage_rate, cost, n_f, max_centroid_gap}; }
};

struct RunRecord {
  SimConfig config;
  std::vector<StepRecord> steps;

  /// Rebuilds the density field recorded at step `index`.
  DensityField density_at(std::size_t index) const;
  std::vector<StepMetrics> metrics() const;
};

/// The flood-monitoring loop. Each step records the state at time t, then
/// moves the fleet:
///  - every agent captures and runs detection; rho latches at 1 and (mu, Sigma)
///    refresh while flood stays in view;
///  - with no detections all agents follow their search spirals;
///  - otherwise the density is rebuilt and every agent steps towards the
///    centroid of its Voronoi cell;
///  - once every agent has detected, detection and density updates stop and
///    Lloyd iteration continues until converged (then agents hold) or t_end.
RunRecord simulate(const SimConfig &config, const FloodField &field);

} // namespace floodcover
