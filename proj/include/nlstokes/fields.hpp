#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "nlstokes/errors.hpp"

namespace nlstokes {

// Lattice frequency; the third entry is 0 when dim == 2.
using Mode = std::array<int, 3>;
// Per-component coefficient values; entries beyond `components` stay zero.
using Coeff = std::array<std::complex<double>, 3>;

Mode negate_mode(const Mode& m);
std::int64_t mode_norm_sq(const Mode& m);
bool mode_is_canonical(const Mode& m);  // first nonzero entry positive

// Mean-zero real periodic field on (-pi, pi)^d stored as a sparse map of
// Fourier coefficients u_hat(xi) = \int u(x) e^{-i xi.x} dx. Hermitian
// symmetry u_hat(-xi) = conj(u_hat(xi)) is enforced on every write.
class SpectralField {
public:
  SpectralField(int dim, int components, int band);

  int dim() const { return dim_; }
  int components() const { return components_; }
  int band() const { return band_; }
  bool empty() const { return coeffs_.empty(); }
  std::size_t mode_count() const { return coeffs_.size(); }

  // Writes u_hat(xi) and u_hat(-xi) = conj. xi = 0 raises mean_not_zero,
  // out-of-band xi raises shape_mismatch.
  void set_mode(const Mode& xi, const Coeff& value);
  Coeff coeff(const Mode& xi) const;  // zero when absent
  const std::map<Mode, Coeff>& coeffs() const { return coeffs_; }

  // Checks Hermitian symmetry, zero mean and band membership.
  void validate() const;
  double max_abs() const;

private:
  int dim_;
  int components_;
  int band_;
  std::map<Mode, Coeff> coeffs_;
};

// Coefficient-wise a - b; bands may differ (result band is the max).
SpectralField subtract(const SpectralField& a, const SpectralField& b);

// Field restricted to the cube max_i |xi_i| <= band.
SpectralField truncate_to_band(const SpectralField& f, int band);

// ((2pi)^{-d} sum_{xi != 0} |xi|^{2s} |u_hat(xi)|^2)^{1/2}, component-wise
// squared magnitudes for vectors. s = 0 is the L2 norm by Plancherel.
double sobolev_norm(const SpectralField& f, double s);

// Evaluates the Fourier series on the uniform M^d grid of (-pi, pi)^d,
// x_j = -pi + 2 pi j / M. Requires M >= 2*band + 2 (aliasing_risk otherwise);
// raises non_real_result if the imaginary residue exceeds 1e-9 relative.
// Layout: grid point index lexicographic, components innermost.
std::vector<double> sample_on_grid(const SpectralField& f, int points_per_dim);

// Discrete Fourier analysis scaled to the integral convention
// (u_hat = (2 pi / M)^d sum_j u(x_j) e^{-i xi.x_j}) for all modes in the
// band cube. The mean must vanish to 1e-9 relative or mean_not_zero is
// raised. Hermitian symmetry holds by construction from real input.
SpectralField grid_to_coeffs(const std::vector<double>& samples, int dim,
                             int components, int band, int points_per_dim);

// Deterministic pseudo-random Hermitian field with |u_hat(xi)| = |xi|^{-decay}
// per component and uniformly random phases. Same seed, same field.
SpectralField random_field(std::uint64_t seed, int band, double decay_exponent,
                           int dim, int components);

}  // namespace nlstokes
