#pragma once

// Test-only oracles. These deliberately avoid the library's evaluation paths:
// symbols are integrated at delta scale (not the unit-ball reduction) with
// Boost tanh-sinh in radius nested inside Gauss-Kronrod in the angle, and the
// mode matrices are inverted by dense LU instead of the closed form.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "nlstokes/kernels.hpp"
#include "nlstokes/solver.hpp"

namespace oracle {

inline double one_minus_cos(double z) {
  const double h = std::sin(0.5 * z);
  return 2.0 * h * h;
}

// angular weight: d=2 lambda 1, b cos(phi); d=3 lambda sin(phi), b sin cos
enum class SymbolKind { diffusion, gradient, relaxation, mollifier };

inline double symbol(const nlstokes::KernelSet& ks, SymbolKind kind,
                     double xi_norm, double tol = 1e-13) {
  using nlstokes::KernelRole;
  if (xi_norm == 0.0) return 0.0;
  KernelRole role = KernelRole::diffusion;
  bool sine = false;
  switch (kind) {
    case SymbolKind::diffusion: role = KernelRole::diffusion; break;
    case SymbolKind::gradient: role = KernelRole::gradient; sine = true; break;
    case SymbolKind::relaxation: role = KernelRole::relaxation; break;
    case SymbolKind::mollifier: role = KernelRole::mollifier; break;
  }
  const int d = ks.dim;
  const double delta = ks.delta;

  const nlstokes::RadialKernelProfile* prof = &ks.diffusion;
  if (role == KernelRole::gradient) prof = &ks.gradient;
  if (role == KernelRole::relaxation) prof = &ks.relaxation;
  if (role == KernelRole::mollifier) prof = &*ks.mollifier;
  const bool fractional =
      prof->family() == nlstokes::KernelFamily::fractional_truncated;
  // merged radial exponent for the fractional family keeps the integrand
  // finite toward r = 0 (r^{d-1} * delta^{-p} A (r/delta)^{-(d+2a)})
  double frac_front = 0.0, frac_expo = 0.0, alpha = 0.0;
  if (fractional) {
    alpha = prof->singular_exponent();
    const int p = nlstokes::scaling_exponent(role, d);
    frac_front = prof->amplitude() * std::pow(delta, d + 2.0 * alpha - p);
    frac_expo = -1.0 - 2.0 * alpha;
  }

  auto radial = [&](double cos_phi) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double r) {
      const double z = r * cos_phi * xi_norm;
      if (fractional) {
        if (std::abs(z) < 1e-8) {
          // quadratic/linear head of the oscillation, exact to machine here
          return sine ? frac_front * cos_phi * xi_norm *
                            std::pow(r, frac_expo + 1.0)
                      : frac_front * 0.5 * cos_phi * cos_phi * xi_norm *
                            xi_norm * std::pow(r, frac_expo + 2.0);
        }
        const double osc = sine ? std::sin(z) : one_minus_cos(z);
        return frac_front * std::pow(r, frac_expo) * osc;
      }
      const double osc = sine ? std::sin(z) : one_minus_cos(z);
      const double w = (d == 2) ? r : r * r;
      return w * nlstokes::rescale_evaluate(ks, role, r) * osc;
    };
    return ts.integrate(f, 0.0, delta, tol);
  };

  auto angular = [&](double phi) {
    const double c = std::cos(phi);
    double w = 1.0;
    if (d == 3) w *= std::sin(phi);
    if (sine) w *= c;
    return w * radial(c);
  };

  const double outer =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          angular, 0.0, M_PI / 2.0, 12, tol);
  return ((d == 2) ? 4.0 : 4.0 * M_PI) * outer;
}

inline Eigen::MatrixXcd to_eigen(const nlstokes::ModeMatrix& m) {
  Eigen::MatrixXcd out(m.n, m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) out(i, j) = m.at(i, j);
  return out;
}

inline Eigen::MatrixXcd lu_inverse(const nlstokes::ModeMatrix& m) {
  return to_eigen(m).fullPivLu().inverse();
}

// determinant by cofactor expansion along the first row
inline std::complex<double> cofactor_determinant(const Eigen::MatrixXcd& m) {
  const auto n = m.rows();
  if (n == 1) return m(0, 0);
  std::complex<double> det{0.0, 0.0};
  double sign = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXcd minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    det += sign * m(0, j) * cofactor_determinant(minor);
    sign = -sign;
  }
  return det;
}

}  // namespace oracle
