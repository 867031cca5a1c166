#include "nlstokes/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "nlstokes/quadrature.hpp"

namespace nlstokes {

const char* kernel_family_name(KernelFamily f) {
  switch (f) {
    case KernelFamily::constant: return "constant";
    case KernelFamily::polynomial_bump: return "polynomial_bump";
    case KernelFamily::fractional_truncated: return "fractional";
    case KernelFamily::custom: return "custom";
  }
  return "?";
}

const char* kernel_role_name(KernelRole r) {
  switch (r) {
    case KernelRole::diffusion: return "diffusion";
    case KernelRole::gradient: return "gradient";
    case KernelRole::relaxation: return "relaxation";
    case KernelRole::mollifier: return "mollifier";
  }
  return "?";
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation: return "Validation";
    case ErrorCode::divergent_moment: return "DivergentMoment";
    case ErrorCode::quadrature_failure: return "QuadratureFailure";
    case ErrorCode::missing_mollifier: return "MissingMollifier";
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::aliasing_risk: return "AliasingRisk";
    case ErrorCode::non_real_result: return "NonRealResult";
    case ErrorCode::mean_not_zero: return "MeanNotZero";
    case ErrorCode::zero_frequency: return "ZeroFrequency";
    case ErrorCode::singular_mode: return "SingularMode";
    case ErrorCode::degenerate_fit: return "DegenerateFit";
  }
  return "Unknown";
}

RadialKernelProfile RadialKernelProfile::constant(double amplitude) {
  RadialKernelProfile p;
  p.family_ = KernelFamily::constant;
  p.amplitude_ = amplitude;
  return p;
}

RadialKernelProfile RadialKernelProfile::polynomial_bump(double amplitude) {
  RadialKernelProfile p;
  p.family_ = KernelFamily::polynomial_bump;
  p.amplitude_ = amplitude;
  return p;
}

RadialKernelProfile RadialKernelProfile::fractional(double alpha, int dim,
                                                    double amplitude) {
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorCode::validation, "fractional exponent alpha must lie in (0,1)");
  if (dim != 2 && dim != 3)
    fail(ErrorCode::validation, "dimension must be 2 or 3");
  RadialKernelProfile p;
  p.family_ = KernelFamily::fractional_truncated;
  p.amplitude_ = amplitude;
  p.alpha_ = alpha;
  p.dim_ = dim;
  return p;
}

RadialKernelProfile RadialKernelProfile::custom(
    std::vector<std::array<double, 2>> table, double amplitude) {
  if (table.size() < 2)
    fail(ErrorCode::validation, "custom profile table needs at least 2 points");
  std::sort(table.begin(), table.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  for (const auto& row : table) {
    if (row[0] < 0.0 || row[0] > 1.0)
      fail(ErrorCode::validation, "custom profile radii must lie in [0,1]");
    if (row[1] < 0.0)
      fail(ErrorCode::validation, "custom profile values must be non-negative");
  }
  RadialKernelProfile p;
  p.family_ = KernelFamily::custom;
  p.amplitude_ = amplitude;
  p.table_ = std::move(table);
  return p;
}

double RadialKernelProfile::value(double r) const {
  if (r > 1.0) return 0.0;
  switch (family_) {
    case KernelFamily::constant:
      return amplitude_;
    case KernelFamily::polynomial_bump: {
      const double t = 1.0 - r * r;
      return amplitude_ * t * t;
    }
    case KernelFamily::fractional_truncated:
      return amplitude_ * std::pow(r, -(dim_ + 2.0 * alpha_));
    case KernelFamily::custom: {
      if (r < table_.front()[0] || r > table_.back()[0]) return 0.0;
      auto it = std::lower_bound(
          table_.begin(), table_.end(), r,
          [](const auto& row, double x) { return row[0] < x; });
      if (it == table_.begin()) return amplitude_ * (*it)[1];
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (hi[0] > lo[0]) ? (r - lo[0]) / (hi[0] - lo[0]) : 0.0;
      return amplitude_ * (lo[1] + w * (hi[1] - lo[1]));
    }
  }
  return 0.0;
}

RadialKernelProfile RadialKernelProfile::with_amplitude(double amplitude) const {
  RadialKernelProfile p = *this;
  p.amplitude_ = amplitude;
  return p;
}

double surface_measure(int dim) {
  if (dim == 2) return 2.0 * M_PI;
  if (dim == 3) return 4.0 * M_PI;
  fail(ErrorCode::validation, "dimension must be 2 or 3");
}

double compute_moment(const RadialKernelProfile& profile, int k, int dim) {
  if (k < 0) fail(ErrorCode::validation, "moment order must be >= 0");
  const double S = surface_measure(dim);
  const double p = k + dim - 1;  // radial weight exponent
  switch (profile.family()) {
    case KernelFamily::constant:
      return S * profile.amplitude() / (p + 1.0);
    case KernelFamily::polynomial_bump:
      // integral of (1-r^2)^2 r^p = 1/(p+1) - 2/(p+3) + 1/(p+5)
      return S * profile.amplitude() *
             (1.0 / (p + 1.0) - 2.0 / (p + 3.0) + 1.0 / (p + 5.0));
    case KernelFamily::fractional_truncated: {
      const double alpha = profile.singular_exponent();
      const double expo = p - (dim + 2.0 * alpha);  // r^expo under the integral
      if (!(expo > -1.0))
        fail(ErrorCode::divergent_moment,
             "fractional profile moment diverges: k must exceed 2*alpha");
      return S * profile.amplitude() / (expo + 1.0);
    }
    case KernelFamily::custom: {
      QuadratureOptions opt;
      opt.rel_tol = 1e-13;
      auto integrand = [&](double r) {
        return profile.value(r) * std::pow(r, p);
      };
      return S * integrate_adaptive(integrand, 0.0, 1.0, opt).value;
    }
  }
  return 0.0;
}

namespace {

struct MomentTarget {
  int order;
  double target;
  double half;  // factor applied to the moment before matching
};

MomentTarget moment_target(KernelRole role, int dim) {
  switch (role) {
    case KernelRole::diffusion: return {2, static_cast<double>(dim), 0.5};
    case KernelRole::gradient: return {1, static_cast<double>(dim), 1.0};
    case KernelRole::relaxation: return {2, static_cast<double>(dim), 1.0};
    case KernelRole::mollifier: return {0, 1.0, 1.0};
  }
  fail(ErrorCode::validation, "bad kernel role");
}

}  // namespace

RadialKernelProfile normalize(const RadialKernelProfile& shape, int dim,
                              KernelRole role) {
  if (role == KernelRole::mollifier && !shape.bounded())
    fail(ErrorCode::divergent_moment,
         "mollifier profiles must be bounded; the fractional family is not");
  const MomentTarget t = moment_target(role, dim);
  const RadialKernelProfile unit = shape.with_amplitude(1.0);
  const double m = compute_moment(unit, t.order, dim);
  if (!(m > 0.0))
    fail(ErrorCode::divergent_moment,
         "profile has vanishing moment; cannot normalize");
  return shape.with_amplitude(t.target / (t.half * m));
}

double documented_smoothness(KernelFamily family) {
  switch (family) {
    case KernelFamily::constant: return 0.45;
    case KernelFamily::polynomial_bump: return 1.0;
    case KernelFamily::custom: return 0.45;
    case KernelFamily::fractional_truncated:
      fail(ErrorCode::validation, "fractional profiles are not mollifiers");
  }
  return 0.0;
}

KernelSet make_kernel_set(int dim, double delta,
                          const RadialKernelProfile& diffusion_shape,
                          const RadialKernelProfile& gradient_shape,
                          const RadialKernelProfile& relaxation_shape,
                          const std::optional<RadialKernelProfile>& mollifier_shape) {
  if (dim != 2 && dim != 3)
    fail(ErrorCode::validation, "dimension must be 2 or 3");
  if (!(delta > 0.0 && delta < 1.0))
    fail(ErrorCode::validation, "horizon delta must lie in (0,1)");
  KernelSet ks;
  ks.dim = dim;
  ks.delta = delta;
  ks.diffusion = normalize(diffusion_shape, dim, KernelRole::diffusion);
  ks.gradient = normalize(gradient_shape, dim, KernelRole::gradient);
  ks.relaxation = normalize(relaxation_shape, dim, KernelRole::relaxation);
  // m, M sandwich the second moment (m <= M2 <= M) and double as the
  // constants the symbol bounds are certified against. With kappa = M2/(2d)
  // the relaxation symbol satisfies
  //   kappa (1 - s^2/20) |xi|^2 <= c <= kappa |xi|^2   (s = delta |xi| <= 1),
  // so m = 0.9 * M2/d keeps m/2 strictly under the low-frequency dip while
  // M = M2 dominates kappa outright.
  const double m2 = compute_moment(ks.relaxation, 2, dim);
  ks.relaxation_moment_lower = 0.9 * m2 / dim;
  ks.relaxation_moment_upper = m2;
  if (mollifier_shape) {
    ks.mollifier = normalize(*mollifier_shape, dim, KernelRole::mollifier);
    ks.mollifier_smoothness = documented_smoothness(mollifier_shape->family());
  }
  return ks;
}

int scaling_exponent(KernelRole role, int dim) {
  switch (role) {
    case KernelRole::diffusion: return dim + 2;
    case KernelRole::gradient: return dim + 1;
    case KernelRole::relaxation: return dim + 2;
    case KernelRole::mollifier: return dim;
  }
  fail(ErrorCode::validation, "bad kernel role");
}

double rescale_evaluate(const KernelSet& ks, KernelRole role, double r) {
  if (r < 0.0) fail(ErrorCode::validation, "radius must be >= 0");
  if (r > ks.delta) return 0.0;
  const RadialKernelProfile* p = nullptr;
  switch (role) {
    case KernelRole::diffusion: p = &ks.diffusion; break;
    case KernelRole::gradient: p = &ks.gradient; break;
    case KernelRole::relaxation: p = &ks.relaxation; break;
    case KernelRole::mollifier:
      if (!ks.mollifier)
        fail(ErrorCode::missing_mollifier, "kernel set has no mollifier");
      p = &*ks.mollifier;
      break;
  }
  const double scale = std::pow(ks.delta, -scaling_exponent(role, ks.dim));
  return scale * p->value(r / ks.delta);
}

void validate_normalization(const KernelSet& ks, double rel_tol) {
  auto check = [&](const RadialKernelProfile& p, KernelRole role) {
    const MomentTarget t = moment_target(role, ks.dim);
    const double got = t.half * compute_moment(p, t.order, ks.dim);
    if (std::abs(got - t.target) > rel_tol * std::abs(t.target))
      fail(ErrorCode::validation,
           std::string("kernel normalization violated for role ") +
               kernel_role_name(role));
  };
  check(ks.diffusion, KernelRole::diffusion);
  check(ks.gradient, KernelRole::gradient);
  if (ks.mollifier) check(*ks.mollifier, KernelRole::mollifier);
  const double m2 = compute_moment(ks.relaxation, 2, ks.dim);
  if (!(ks.relaxation_moment_lower > 0.0) ||
      !(ks.relaxation_moment_lower < ks.relaxation_moment_upper))
    fail(ErrorCode::validation, "relaxation moment bounds must satisfy 0 < m < M");
  if (ks.relaxation_moment_lower > m2 * (1.0 + rel_tol) ||
      m2 > ks.relaxation_moment_upper * (1.0 + rel_tol))
    fail(ErrorCode::validation,
         "relaxation second moment falls outside the recorded [m, M]");
}

}  // namespace nlstokes
