#include "floodcover/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace floodcover {

double coverage_rate(const FloodField &field, double t, std::span<const Point2> positions,
                     double footprint_side, const Rect &workspace, int eval_res) {
  if (eval_res < 1)
    throw std::invalid_argument("coverage_rate: eval_res must be positive");
  const double hx = workspace.width() / eval_res;
  const double hy = workspace.height() / eval_res;
  const double half = 0.5 * footprint_side;

  // Rasterize the union of footprints: sample (i, j) is covered when its
  // midpoint lies in some closed square.
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(eval_res) * eval_res, 0);
  for (auto p : positions) {
    const auto first = [](double lo, double origin, double h) {
      return static_cast<int>(std::ceil((lo - origin) / h - 0.5));
    };
    const auto last = [](double hi, double origin, double h) {
      return static_cast<int>(std::floor((hi - origin) / h - 0.5));
    };
    const int i0 = std::max(0, first(p.x - half, workspace.min.x, hx));
    const int i1 = std::min(eval_res - 1, last(p.x + half, workspace.min.x, hx));
    const int j0 = std::max(0, first(p.y - half, workspace.min.y, hy));
    const int j1 = std::min(eval_res - 1, last(p.y + half, workspace.min.y, hy));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        covered[static_cast<std::size_t>(j) * eval_res + i] = 1;
  }

  std::size_t flooded = 0;
  std::size_t seen = 0;
  for (int j = 0; j < eval_res; ++j) {
    for (int i = 0; i < eval_res; ++i) {
      const Point2 q{workspace.min.x + (i + 0.5) * hx, workspace.min.y + (j + 0.5) * hy};
      if (!field.flooded(q, t))
        continue;
      ++flooded;
      seen += covered[static_cast<std::size_t>(j) * eval_res + i];
    }
  }
  return flooded == 0 ? 0.0 : static_cast<double>(seen) / static_cast<double>(flooded);
}

double max_centroid_gap(std::span<const Point2> positions, std::span<const Point2> centroids) {
  if (positions.size() != centroids.size())
    throw std::invalid_argument("max_centroid_gap: length mismatch");
  double gap = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i)
    gap = std::max(gap, distance(positions[i], centroids[i]));
  return gap;
}

bool converged(std::span<const Point2> positions, std::span<const Point2> centroids, double tol) {
  return max_centroid_gap(positions, centroids) < tol;
}

void write_metrics_csv(std::span<const StepMetrics> rows, std::ostream &out) {
  out << "t,coverage_rate,H,n_f,max_centroid_gap\n";
  for (const auto &r : rows)
    out << fmt::format("{},{},{},{},{}\n", r.t, r.coverage_rate, r.cost, r.n_f, r.max_centroid_gap);
}

std::vector<StepMetrics> read_metrics_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,coverage_rate,H,n_f,max_centroid_gap")
    throw std::runtime_error("metrics csv: unexpected header");
  std::vector<StepMetrics> rows;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    StepMetrics r;
    if (!(fields >> r.t >> r.coverage_rate >> r.cost >> r.n_f >> r.max_centroid_gap))
      throw std::runtime_error("metrics csv: malformed row");
    rows.push_back(r);
  }
  return rows;
}

} // namespace floodcover
