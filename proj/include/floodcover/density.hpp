#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "floodcover/geometry.hpp"

namespace floodcover {

inline constexpr double kDefaultPhi0 = 1e-3;
/// Added to the diagonal of any covariance whose determinant falls below kMinCovDet.
inline constexpr double kCovEpsilon = 1e-6;
inline constexpr double kMinCovDet = 1e-12;

/// Symmetric 2x2 matrix (m^2 when used as a covariance).
struct Mat2 {
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;

  constexpr double det() const { return sxx * syy - sxy * sxy; }
  constexpr double trace() const { return sxx + syy; }
  static constexpr Mat2 identity(double s = 1.0) { return {s, 0.0, s}; }
  friend constexpr bool operator==(const Mat2 &, const Mat2 &) = default;
};

/// Angle in (-pi/2, pi/2] of the eigenvector with the largest eigenvalue.
double principal_angle(const Mat2 &m);

/// Rejects matrices that are not positive semi-definite (up to rounding) and
/// lifts near-singular ones by kCovEpsilon * I.
Mat2 regularize_covariance(const Mat2 &m);

enum class DensityMode { full, axis_aligned };

std::string_view to_string(DensityMode mode);
/// Accepts "gmdf"/"full" and "axis"/"axis_aligned"; throws std::invalid_argument otherwise.
DensityMode parse_density_mode(std::string_view text);

struct GaussianComponent {
  Point2 mu;
  Mat2 sigma = Mat2::identity();
  bool rho = false;
};

/// Unit-mass bivariate normal pdf of one component, ignoring rho.
double gaussian_pdf(const GaussianComponent &c, Point2 q);

/// Midpoint-rule integral of rho * pdf over `domain` on a res x res grid.
double component_integral(const GaussianComponent &c, const Rect &domain, int res);

/// phi(q) = phi0 + sum_i rho_i N(q; mu_i, Sigma_i).
///
/// One component per agent. Covariances are stored already regularized (and,
/// in axis-aligned mode, with the cross term removed), so evaluate() never
/// fails.
class DensityField {
public:
  explicit DensityField(std::size_t n, double phi0 = kDefaultPhi0,
                        DensityMode mode = DensityMode::full);

  double evaluate(Point2 q) const;

  /// Replace component i. Throws std::out_of_range for a bad index and
  /// std::invalid_argument for a non-PSD covariance.
  void set_component(std::size_t i, Point2 mu, const Mat2 &sigma, bool rho);

  std::size_t size() const { return components_.size(); }
  double phi0() const { return phi0_; }
  DensityMode mode() const { return mode_; }
  const GaussianComponent &component(std::size_t i) const { return components_.at(i); }
  const std::vector<GaussianComponent> &components() const { return components_; }
  std::size_t active_count() const;

  /// Adds every active component into a row-major grid of midpoint samples
  /// (`values` must already hold phi0 or any base). Components are truncated
  /// beyond 12 standard deviations, where they fall far below phi0 * 1e-16.
  void accumulate_grid(const Rect &domain, int nx, int ny, std::vector<double> &values) const;

private:
  struct Cached {
    double inv_xx, inv_xy, inv_yy;
    double norm;
  };

  double phi0_;
  DensityMode mode_;
  std::vector<GaussianComponent> components_;
  std::vector<Cached> cache_;
};

/// 16-bit ASCII graymap (P2) of evaluate() at res x res cell midpoints,
/// north row first, scaled so the maximum sample maps to 65535.
void write_density_pgm(const DensityField &field, const Rect &domain, int res, std::ostream &out);

} // namespace floodcover
