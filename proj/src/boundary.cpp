#include "delaystab/boundary.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace delaystab {
namespace {

// 1 - cos(x) without cancellation near 0 mod 2 pi.
double one_minus_cos(double x) {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

}  // namespace

std::complex<double> characteristic_residual(double a, double b, double h, std::complex<double> omega) {
  if (omega == std::complex<double>(0.0, 0.0)) throw std::invalid_argument("omega must be nonzero");
  const std::complex<double> e = std::exp(-h * omega);
  // 1 - e^{-h omega} evaluated as -expm1(-h omega) for accuracy near zero.
  const std::complex<double> z = -h * omega;
  std::complex<double> one_minus_e;
  if (z.real() == 0.0) {
    const double x = z.imag();
    one_minus_e = {one_minus_cos(x), -std::sin(x)};
  } else {
    one_minus_e = 1.0 - e;
  }
  return omega + a * e + (b / omega) * one_minus_e;
}

BoundaryPoint boundary_point(double beta, double h) {
  if (!(beta > 0.0) || !(h > 0.0)) throw std::invalid_argument("beta and h must be positive");
  const double x = h * beta;
  const double denom = one_minus_cos(x);
  if (denom < 1e-12) throw std::invalid_argument("1 - cos(h beta) vanishes at beta = " + std::to_string(beta));
  return {beta, beta * std::sin(x) / denom, -beta * beta * std::cos(x) / denom};
}

std::vector<BoundaryPoint> boundary_curve(double h, double beta_lo, double beta_hi, int n_pts) {
  const double top = 2.0 * std::numbers::pi / h;
  if (n_pts < 1) throw std::invalid_argument("n_pts must be positive");
  if (!(beta_lo > 0.0) || !(beta_hi < top) || beta_hi < beta_lo || (beta_hi == beta_lo && n_pts > 1)) {
    throw std::invalid_argument("beta range must satisfy 0 < lo < hi < 2 pi / h");
  }
  std::vector<BoundaryPoint> out;
  out.reserve(static_cast<std::size_t>(n_pts));
  for (int i = 0; i < n_pts; ++i) {
    const double beta = n_pts == 1 ? beta_lo
                        : i == n_pts - 1 ? beta_hi
                                         : beta_lo + (beta_hi - beta_lo) * i / (n_pts - 1);
    const BoundaryPoint p = boundary_point(beta, h);
    const double res = std::abs(characteristic_residual(p.a, p.b, h, {0.0, beta}));
    if (!(res < kBoundaryResidualTol)) {
      throw std::runtime_error("boundary residual " + std::to_string(res) + " at beta " + std::to_string(beta));
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace delaystab
