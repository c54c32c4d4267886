#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "floodcover/geometry.hpp"
#include "floodcover/sensing.hpp"

namespace floodcover {

struct StepMetrics {
  double t = 0.0;
  double coverage_rate = 0.0;
  double cost = 0.0;
  int n_f = 0;
  double max_centroid_gap = 0.0;
};

/// Fraction of flooded grid points (eval_res x eval_res midpoints over the
/// workspace) that lie inside at least one axis-aligned square footprint of
/// side `footprint_side` centered on an agent. Zero when nothing is flooded.
double coverage_rate(const FloodField &field, double t, std::span<const Point2> positions,
                     double footprint_side, const Rect &workspace, int eval_res = 256);

double max_centroid_gap(std::span<const Point2> positions, std::span<const Point2> centroids);

/// max_i |p_i - c_i| < tol. Throws std::invalid_argument on length mismatch.
bool converged(std::span<const Point2> positions, std::span<const Point2> centroids, double tol);

/// Columns t,coverage_rate,H,n_f,max_centroid_gap with shortest round-trip doubles.
void write_metrics_csv(std::span<const StepMetrics> rows, std::ostream &out);
std::vector<StepMetrics> read_metrics_csv(std::istream &in);

} // namespace floodcover
