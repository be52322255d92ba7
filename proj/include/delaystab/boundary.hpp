#pragma once

#include <complex>
#include <vector>

namespace delaystab {

/// Point (a, b) where the deterministic single-delay equation
/// x' = -a x(t-h) - b int_{t-h}^t x(s) ds has the root i*beta.
struct BoundaryPoint {
  double beta = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// omega + a e^{-h omega} + (b/omega)(1 - e^{-h omega}). Throws
/// std::invalid_argument for omega = 0.
std::complex<double> characteristic_residual(double a, double b, double h, std::complex<double> omega);

/// a = beta sin(h beta)/(1 - cos(h beta)), b = -beta^2 cos(h beta)/(1 - cos(h beta)).
/// Throws std::invalid_argument when 1 - cos(h beta) < 1e-12.
BoundaryPoint boundary_point(double beta, double h);

/// n_pts points at beta evenly spaced over [beta_lo, beta_hi], in order.
/// Requires 0 < beta_lo < beta_hi < 2 pi / h (beta_lo == beta_hi allowed
/// only for n_pts == 1). Each point is checked against the residual.
std::vector<BoundaryPoint> boundary_curve(double h, double beta_lo, double beta_hi, int n_pts);

/// Tolerance used by boundary_curve's residual self-check.
inline constexpr double kBoundaryResidualTol = 1e-9;

}  // namespace delaystab
