#include "nlstokes/symbols.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

#include "nlstokes/quadrature.hpp"

namespace nlstokes {

namespace {

// 1 - cos(z) without cancellation
inline double one_minus_cos(double z) {
  const double h = std::sin(0.5 * z);
  return 2.0 * h * h;
}

struct RadialPart {
  double value = 0.0;
  double error = 0.0;
};

// Power series of the singular head of a fractional radial integral on
// [0, a]:  A * int_0^a r^{-1-2alpha} osc(freq r) dr  with freq*a <= 1/2.
double fractional_head(double amplitude, double alpha, double freq, double a,
                       bool sine_kind) {
  double sum = 0.0;
  if (sine_kind) {
    // sin(z) = sum_j (-1)^j z^{2j+1} / (2j+1)!
    double coeff = freq;  // freq^{2j+1} / (2j+1)!
    for (int j = 0; j <= 8; ++j) {
      const double expo = 2.0 * j + 1.0 - 2.0 * alpha;
      sum += coeff * std::pow(a, expo) / expo;
      coeff *= -freq * freq / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
    }
  } else {
    // 1 - cos(z) = sum_{j>=1} (-1)^{j+1} z^{2j} / (2j)!
    double coeff = 0.5 * freq * freq;
    for (int j = 1; j <= 9; ++j) {
      const double expo = 2.0 * j - 2.0 * alpha;
      sum += coeff * std::pow(a, expo) / expo;
      coeff *= -freq * freq / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
    }
  }
  return amplitude * sum;
}

// int_0^1 r^{dim-1} profile(r) osc(freq r) dr with osc = sin or 1 - cos.
// The fractional singularity is tamed analytically on [0, a] and the
// remainder integrated on a mesh graded toward a.
RadialPart radial_symbol_integral(const RadialKernelProfile& profile, int dim,
                                  double freq, bool sine_kind, double rel_tol,
                                  int budget) {
  RadialPart out;
  if (freq == 0.0) return out;

  auto integrand = [&](double r) {
    const double z = freq * r;
    const double osc = sine_kind ? std::sin(z) : one_minus_cos(z);
    return std::pow(r, dim - 1) * profile.value(r) * osc;
  };

  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  opt.panel_budget = budget;

  if (profile.family() == KernelFamily::fractional_truncated) {
    const double alpha = profile.singular_exponent();
    if (sine_kind && !(2.0 * alpha < 1.0))
      fail(ErrorCode::divergent_moment,
           "fractional gradient kernel requires alpha < 1/2");
    const double a = std::min(0.25, 0.5 / std::max(freq, 2.0));
    out.value = fractional_head(profile.amplitude(), alpha, freq, a, sine_kind);
    QuadratureResult tail = integrate_graded(integrand, a, 1.0, 0.5, 60, opt);
    out.value += tail.value;
    out.error = tail.error_estimate;
    return out;
  }

  opt.initial_panels = 1 + static_cast<int>(freq / 6.0);
  QuadratureResult r = integrate_adaptive(integrand, 0.0, 1.0, opt);
  out.value = r.value;
  out.error = r.error_estimate;
  return out;
}

int angle_order(double s) {
  const int n = 24 + static_cast<int>(0.75 * s);
  return std::min(n, 600);
}

}  // namespace

SymbolTable::SymbolTable(KernelSet kernels, double rel_tol, int panel_budget)
    : kernels_(std::move(kernels)), rel_tol_(rel_tol), panel_budget_(panel_budget) {
  if (kernels_.dim != 2 && kernels_.dim != 3)
    fail(ErrorCode::validation, "dimension must be 2 or 3");
  if (!(kernels_.delta > 0.0 && kernels_.delta < 1.0))
    fail(ErrorCode::validation, "horizon delta must lie in (0,1)");
}

SymbolTuple SymbolTable::compute(double xi_norm) const {
  SymbolTuple out;
  if (kernels_.mollifier) out.mollifier = 0.0;
  if (!(xi_norm > 0.0)) return out;

  const int d = kernels_.dim;
  const double delta = kernels_.delta;
  const double s = delta * xi_norm;
  const GaussRule& rule = gauss_legendre(angle_order(s));

  double q_diff = 0.0, q_grad = 0.0, q_relax = 0.0, q_moll = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double t, w;  // t = cos(angle), w = angular weight incl. jacobian
    if (d == 2) {
      const double phi = (rule.nodes[i] + 1.0) * (M_PI / 4.0);
      t = std::cos(phi);
      w = rule.weights[i] * (M_PI / 4.0);
    } else {
      t = (rule.nodes[i] + 1.0) * 0.5;
      w = rule.weights[i] * 0.5;
    }
    const double freq = t * s;
    RadialPart rp;
    rp = radial_symbol_integral(kernels_.diffusion, d, freq, false, rel_tol_, panel_budget_);
    q_diff += w * rp.value;
    err += w * rp.error;
    rp = radial_symbol_integral(kernels_.gradient, d, freq, true, rel_tol_, panel_budget_);
    q_grad += w * t * rp.value;
    err += w * t * rp.error;
    rp = radial_symbol_integral(kernels_.relaxation, d, freq, false, rel_tol_, panel_budget_);
    q_relax += w * rp.value;
    err += w * rp.error;
    if (kernels_.mollifier) {
      rp = radial_symbol_integral(*kernels_.mollifier, d, freq, false, rel_tol_, panel_budget_);
      q_moll += w * rp.value;
      err += w * rp.error;
    }
  }

  const double front = (d == 2) ? 4.0 : 4.0 * M_PI;
  out.diffusion = front / (delta * delta) * q_diff;
  out.gradient = front / delta * q_grad;
  out.relaxation = front / (delta * delta) * q_relax;
  if (kernels_.mollifier) out.mollifier = front * q_moll;
  out.quadrature_error_estimate = front / (delta * delta) * err;
  return out;
}

SymbolTuple SymbolTable::at_lattice(std::int64_t xi_sq) const {
  if (xi_sq < 0) fail(ErrorCode::validation, "|xi|^2 must be >= 0");
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(xi_sq);
    if (it != cache_.end()) return it->second;
  }
  SymbolTuple value = compute(std::sqrt(static_cast<double>(xi_sq)));
  std::unique_lock lock(mutex_);
  return cache_.emplace(xi_sq, value).first->second;
}

SymbolTuple SymbolTable::evaluate(double xi_norm) const {
  if (xi_norm < 0.0) fail(ErrorCode::validation, "|xi| must be >= 0");
  const double xn2 = xi_norm * xi_norm;
  const auto key = static_cast<std::int64_t>(std::llround(xn2));
  if (std::abs(xn2 - static_cast<double>(key)) <= 1e-9 * std::max(1.0, xn2))
    return at_lattice(key);
  return compute(xi_norm);
}

double SymbolTable::diffusion_symbol(double xi_norm) const {
  return evaluate(xi_norm).diffusion;
}
double SymbolTable::gradient_symbol(double xi_norm) const {
  return evaluate(xi_norm).gradient;
}
double SymbolTable::relaxation_symbol(double xi_norm) const {
  return evaluate(xi_norm).relaxation;
}
double SymbolTable::mollifier_symbol(double xi_norm) const {
  if (!kernels_.mollifier)
    fail(ErrorCode::missing_mollifier, "kernel set has no mollifier");
  return *evaluate(xi_norm).mollifier;
}

void SymbolTable::precompute(const std::vector<std::int64_t>& keys,
                             int threads) const {
  const int n = std::max(1, threads);
  if (n == 1 || keys.size() < 2) {
    for (auto k : keys) at_lattice(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int i = 0; i < n; ++i) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= keys.size()) return;
        try {
          at_lattice(keys[idx]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::size_t SymbolTable::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

std::vector<std::int64_t> lattice_magnitudes(int dim, int xi_max) {
  if (dim != 2 && dim != 3) fail(ErrorCode::validation, "dimension must be 2 or 3");
  std::set<std::int64_t> keys;
  const std::int64_t cap = static_cast<std::int64_t>(xi_max) * xi_max;
  for (std::int64_t i = 0; i <= xi_max; ++i) {
    for (std::int64_t j = i; j <= xi_max; ++j) {
      const std::int64_t q2 = i * i + j * j;
      if (q2 > cap) break;
      if (dim == 2) {
        if (q2 > 0) keys.insert(q2);
        continue;
      }
      for (std::int64_t k = j; k <= xi_max; ++k) {
        const std::int64_t q3 = q2 + k * k;
        if (q3 > cap) break;
        if (q3 > 0) keys.insert(q3);
      }
    }
  }
  return {keys.begin(), keys.end()};
}

bool BoundReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck& c) { return c.pass; });
}

std::vector<BoundCheck> BoundReport::failures() const {
  std::vector<BoundCheck> out;
  for (const auto& c : checks)
    if (!c.pass) out.push_back(c);
  return out;
}

std::map<std::string, double> BoundReport::worst_margins() const {
  std::map<std::string, double> out;
  for (const auto& c : checks) {
    auto it = out.find(c.check_name);
    if (it == out.end() || c.margin < it->second) out[c.check_name] = c.margin;
  }
  return out;
}

BoundReport certify_bounds(const KernelSet& base, int xi_max,
                           const std::vector<double>& deltas, int threads,
                           double slack, double rel_tol) {
  BoundReport report;
  report.slack = slack;
  if (xi_max <= 0) return report;

  const std::vector<std::int64_t> keys = lattice_magnitudes(base.dim, xi_max);
  const double m = base.relaxation_moment_lower;
  const double M = base.relaxation_moment_upper;
  const bool fractional =
      base.diffusion.family() == KernelFamily::fractional_truncated;

  for (double delta : deltas) {
    KernelSet ks = base;
    ks.delta = delta;
    SymbolTable table(ks, rel_tol);
    table.precompute(keys, threads);

    for (std::int64_t key : keys) {
      const SymbolTuple t = table.at_lattice(key);
      const double xn2 = static_cast<double>(key);
      const double xn = std::sqrt(xn2);
      const double s = delta * xn;
      const double q = t.saddle_term(delta);

      auto add = [&](const std::string& name, double bound, double margin,
                     bool strict = false) {
        BoundCheck c;
        c.delta = delta;
        c.xi_sq = key;
        c.lambda = t.diffusion;
        c.b = t.gradient;
        c.c = t.relaxation;
        c.q = q;
        c.d_moll = t.mollifier;
        c.check_name = name;
        c.bound_value = bound;
        c.margin = margin;
        c.pass = strict ? (margin > 0.0) : (margin >= -slack);
        report.checks.push_back(std::move(c));
      };

      add("q_positive", 0.0, q, /*strict=*/true);
      if (s > 1.0) {
        add("lambda_lower_high", 1.0 / (16.0 * delta * delta),
            t.diffusion - 1.0 / (16.0 * delta * delta));
        add("lambda_upper_high", xn2, xn2 - t.diffusion);
        add("c_lower_high", m / (16.0 * delta * delta),
            t.relaxation - m / (16.0 * delta * delta));
        add("c_upper_high", M * xn2, M * xn2 - t.relaxation);
        if (fractional) {
          const double alpha = base.diffusion.singular_exponent();
          const double c1 = base.diffusion.amplitude();
          const double bound = std::min(1.0, c1 / 6.0) *
                               std::pow(delta, 2.0 * alpha - 2.0) *
                               std::pow(xn, 2.0 * alpha);
          add("lambda_fractional_growth", bound, t.diffusion - bound);
        }
      } else {
        add("lambda_lower_low", xn2 * (1.0 - s * s / 20.0),
            t.diffusion - xn2 * (1.0 - s * s / 20.0));
        add("lambda_upper_low", xn2, xn2 - t.diffusion);
        add("b_lower_low", xn * (1.0 - s * s / 10.0),
            t.gradient - xn * (1.0 - s * s / 10.0));
        add("b_upper_low", xn, xn - t.gradient);
        add("c_lower_low", 0.5 * m * xn2, t.relaxation - 0.5 * m * xn2);
        add("c_upper_low", M * xn2, M * xn2 - t.relaxation);
      }
      if (t.mollifier) {
        add("moll_upper_2", 2.0, 2.0 - *t.mollifier);
        if (s < 1.0) {
          const double bound = s * s / (2.0 * base.dim);
          add("moll_lowfreq", bound, bound - *t.mollifier);
        }
      }
    }
  }
  return report;
}

}  // namespace nlstokes
