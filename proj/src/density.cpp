#include "floodcover/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace floodcover {

namespace {

constexpr double kTruncationSigmas = 12.0;

// Quadratic form and normalization for a covariance that has already been
// regularized.
struct Precision {
  double inv_xx, inv_xy, inv_yy, norm;
};

Precision precision_of(const Mat2 &s) {
  const double det = s.det();
  return {s.syy / det, -s.sxy / det, s.sxx / det,
          1.0 / (2.0 * std::numbers::pi * std::sqrt(det))};
}

double mahalanobis_sq(double ixx, double ixy, double iyy, double dx, double dy) {
  return ixx * dx * dx + 2.0 * ixy * dx * dy + iyy * dy * dy;
}

} // namespace

double principal_angle(const Mat2 &m) {
  double angle = 0.5 * std::atan2(2.0 * m.sxy, m.sxx - m.syy);
  if (angle <= -std::numbers::pi / 2)
    angle += std::numbers::pi;
  return angle;
}

Mat2 regularize_covariance(const Mat2 &m) {
  const double scale = std::max({std::abs(m.sxx), std::abs(m.syy), std::abs(m.sxy), 1.0});
  const double rounding = 1e-12 * scale * scale;
  if (!std::isfinite(m.sxx) || !std::isfinite(m.sxy) || !std::isfinite(m.syy) ||
      m.sxx < -rounding || m.syy < -rounding || m.det() < -rounding)
    throw std::invalid_argument("covariance is not positive semi-definite");
  Mat2 out = m;
  if (out.det() < kMinCovDet) {
    out.sxx += kCovEpsilon;
    out.syy += kCovEpsilon;
  }
  return out;
}

std::string_view to_string(DensityMode mode) {
  return mode == DensityMode::full ? "gmdf" : "axis";
}

DensityMode parse_density_mode(std::string_view text) {
  if (text == "gmdf" || text == "full")
    return DensityMode::full;
  if (text == "axis" || text == "axis_aligned")
    return DensityMode::axis_aligned;
  throw std::invalid_argument("unknown density mode: " + std::string(text));
}

double gaussian_pdf(const GaussianComponent &c, Point2 q) {
  const Precision p = precision_of(c.sigma);
  const Point2 d = q - c.mu;
  return p.norm * std::exp(-0.5 * mahalanobis_sq(p.inv_xx, p.inv_xy, p.inv_yy, d.x, d.y));
}

double component_integral(const GaussianComponent &c, const Rect &domain, int res) {
  if (!c.rho)
    return 0.0;
  const double hx = domain.width() / res;
  const double hy = domain.height() / res;
  double sum = 0.0;
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i)
      sum += gaussian_pdf(c, {domain.min.x + (i + 0.5) * hx, domain.min.y + (j + 0.5) * hy});
  return sum * hx * hy;
}

DensityField::DensityField(std::size_t n, double phi0, DensityMode mode)
    : phi0_(phi0), mode_(mode), components_(n), cache_(n) {
  if (!(phi0 > 0.0) || !std::isfinite(phi0))
    throw std::invalid_argument("DensityField: phi0 must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    const Precision p = precision_of(components_[i].sigma);
    cache_[i] = {p.inv_xx, p.inv_xy, p.inv_yy, p.norm};
  }
}

double DensityField::evaluate(Point2 q) const {
  double value = phi0_;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto &c = components_[i];
    if (!c.rho)
      continue;
    const auto &k = cache_[i];
    const Point2 d = q - c.mu;
    value += k.norm * std::exp(-0.5 * mahalanobis_sq(k.inv_xx, k.inv_xy, k.inv_yy, d.x, d.y));
  }
  return value;
}

void DensityField::set_component(std::size_t i, Point2 mu, const Mat2 &sigma, bool rho) {
  if (i >= components_.size())
    throw std::out_of_range("DensityField::set_component: index out of range");
  if (!std::isfinite(mu.x) || !std::isfinite(mu.y))
    throw std::invalid_argument("DensityField::set_component: non-finite mean");
  Mat2 s = sigma;
  if (mode_ == DensityMode::axis_aligned)
    s.sxy = 0.0;
  s = regularize_covariance(s);
  components_[i] = {mu, s, rho};
  const Precision p = precision_of(s);
  cache_[i] = {p.inv_xx, p.inv_xy, p.inv_yy, p.norm};
}

std::size_t DensityField::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(components_.begin(), components_.end(), [](auto &c) { return c.rho; }));
}

void DensityField::accumulate_grid(const Rect &domain, int nx, int ny,
                                   std::vector<double> &values) const {
  const double hx = domain.width() / nx;
  const double hy = domain.height() / ny;
  for (std::size_t n = 0; n < components_.size(); ++n) {
    const auto &c = components_[n];
    if (!c.rho)
      continue;
    const auto &k = cache_[n];
    const double rx = kTruncationSigmas * std::sqrt(c.sigma.sxx);
    const double ry = kTruncationSigmas * std::sqrt(c.sigma.syy);
    const auto index_range = [](double lo, double hi, double origin, double h, int count) {
      const int first = std::max(0, static_cast<int>(std::floor((lo - origin) / h - 0.5)));
      const int last = std::min(count - 1, static_cast<int>(std::ceil((hi - origin) / h - 0.5)));
      return std::pair{first, last};
    };
    const auto [i0, i1] = index_range(c.mu.x - rx, c.mu.x + rx, domain.min.x, hx, nx);
    const auto [j0, j1] = index_range(c.mu.y - ry, c.mu.y + ry, domain.min.y, hy, ny);
    for (int j = j0; j <= j1; ++j) {
      const double dy = domain.min.y + (j + 0.5) * hy - c.mu.y;
      double *row = values.data() + static_cast<std::size_t>(j) * nx;
      for (int i = i0; i <= i1; ++i) {
        const double dx = domain.min.x + (i + 0.5) * hx - c.mu.x;
        row[i] += k.norm * std::exp(-0.5 * mahalanobis_sq(k.inv_xx, k.inv_xy, k.inv_yy, dx, dy));
      }
    }
  }
}

void write_density_pgm(const DensityField &field, const Rect &domain, int res, std::ostream &out) {
  const double hx = domain.width() / res;
  const double hy = domain.height() / res;
  std::vector<double> values(static_cast<std::size_t>(res) * res);
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i)
      values[static_cast<std::size_t>(j) * res + i] =
          field.evaluate({domain.min.x + (i + 0.5) * hx, domain.min.y + (j + 0.5) * hy});
  const double peak = *std::max_element(values.begin(), values.end());
  out << "P2\n" << res << ' ' << res << "\n65535\n";
  for (int j = res - 1; j >= 0; --j) {
    for (int i = 0; i < res; ++i) {
      const double v = values[static_cast<std::size_t>(j) * res + i];
      out << std::lround(65535.0 * v / peak) << (i + 1 < res ? ' ' : '\n');
    }
  }
}

} // namespace floodcover
