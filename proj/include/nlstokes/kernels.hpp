#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nlstokes/errors.hpp"

namespace nlstokes {

enum class KernelFamily { constant, polynomial_bump, fractional_truncated, custom };
enum class KernelRole { diffusion, gradient, relaxation, mollifier };

const char* kernel_family_name(KernelFamily f);
const char* kernel_role_name(KernelRole r);

// Radial profile supported on the unit ball: value(r) = amplitude * shape(r)
// for r in (0, 1], zero beyond. Shapes:
//   constant             1
//   polynomial_bump      (1 - r^2)^2
//   fractional_truncated r^{-(d+2*alpha)}, alpha in (0,1); dim-dependent
//   custom               piecewise-linear interpolation of a table on [0, 1]
class RadialKernelProfile {
public:
  static RadialKernelProfile constant(double amplitude = 1.0);
  static RadialKernelProfile polynomial_bump(double amplitude = 1.0);
  static RadialKernelProfile fractional(double alpha, int dim, double amplitude = 1.0);
  static RadialKernelProfile custom(std::vector<std::array<double, 2>> table,
                                    double amplitude = 1.0);

  KernelFamily family() const { return family_; }
  double amplitude() const { return amplitude_; }
  double support_radius() const { return 1.0; }
  // alpha for the fractional family; meaningless otherwise
  double singular_exponent() const { return alpha_; }
  int fractional_dim() const { return dim_; }
  bool bounded() const { return family_ != KernelFamily::fractional_truncated; }
  const std::vector<std::array<double, 2>>& table() const { return table_; }

  double value(double r) const;
  RadialKernelProfile with_amplitude(double amplitude) const;

private:
  RadialKernelProfile() = default;
  KernelFamily family_ = KernelFamily::constant;
  double amplitude_ = 1.0;
  double alpha_ = 0.0;
  int dim_ = 0;
  std::vector<std::array<double, 2>> table_;
};

// Surface measure of the unit sphere S^{d-1}: 2*pi for d=2, 4*pi for d=3.
double surface_measure(int dim);

// k-th moment over the unit ball:
//   \int_{B(0,1)} profile(|x|) |x|^k dx = S_{d-1} \int_0^1 profile(r) r^{k+d-1} dr.
// Closed form for constant / bump / fractional shapes, quadrature for custom.
// Throws Error(divergent_moment) when the integral does not converge
// (fractional shape with k <= 2*alpha).
double compute_moment(const RadialKernelProfile& profile, int k, int dim);

// Moment targets: diffusion (1/2) M2 = d, gradient M1 = d, relaxation M2 = d,
// mollifier M0 = 1. Returns the profile with the amplitude fixed accordingly.
RadialKernelProfile normalize(const RadialKernelProfile& shape, int dim, KernelRole role);

// Documented Sobolev smoothness index of a mollifier family (the gamma for
// which the unit profile, extended by zero, lies in H^gamma(R^d)):
//   constant         0.45  (ball indicator; in H^s for every s < 1/2)
//   polynomial_bump  1.0   (C^1 with bounded derivative)
//   custom           0.45  (conservative default for piecewise-linear tables)
double documented_smoothness(KernelFamily family);

// The four rescaled kernels at horizon delta plus the recorded relaxation
// moment bounds m < M and the mollifier smoothness index gamma.
struct KernelSet {
  int dim = 3;
  double delta = 0.1;
  RadialKernelProfile diffusion = RadialKernelProfile::constant();
  RadialKernelProfile gradient = RadialKernelProfile::constant();
  RadialKernelProfile relaxation = RadialKernelProfile::constant();
  std::optional<RadialKernelProfile> mollifier;
  double relaxation_moment_lower = 0.0;  // m
  double relaxation_moment_upper = 0.0;  // M
  double mollifier_smoothness = 0.0;     // gamma
};

// Normalizes each shape for its role and records m, M and gamma. The stored
// m, M are the constants certified against the symbol bounds: with
// M2 = second moment of the relaxation profile, m = 0.9*M2/d and M = M2/d.
KernelSet make_kernel_set(int dim, double delta,
                          const RadialKernelProfile& diffusion_shape,
                          const RadialKernelProfile& gradient_shape,
                          const RadialKernelProfile& relaxation_shape,
                          const std::optional<RadialKernelProfile>& mollifier_shape = {});

// Horizon-rescaling exponent p in  kernel_delta(r) = delta^{-p} kernel(r/delta):
//   diffusion d+2, gradient d+1, relaxation d+2, mollifier d.
// These keep the moment normalizations uniform in delta.
int scaling_exponent(KernelRole role, int dim);

// Value of the delta-rescaled kernel at radius r >= 0; zero beyond delta.
double rescale_evaluate(const KernelSet& ks, KernelRole role, double r);

// Recomputes all moment conditions; throws Error(validation) on mismatch.
void validate_normalization(const KernelSet& ks, double rel_tol = 1e-10);

}  // namespace nlstokes
