#include "nlstokes/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "nlstokes/errors.hpp"

namespace nlstokes {

namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n from the Chebyshev initial guess
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p0 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = -z;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

namespace {

constexpr int kPanelOrder = 15;

struct PanelSum {
  double value = 0.0;
  double l1 = 0.0;  // integral of |f|, the rounding-floor scale
};

PanelSum gl_panel(const std::function<double(double)>& f, double a, double b,
                  const GaussRule& rule) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  PanelSum out;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = f(c + h * rule.nodes[i]);
    out.value += rule.weights[i] * v;
    out.l1 += rule.weights[i] * std::abs(v);
  }
  out.value *= h;
  out.l1 *= h;
  return out;
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    const QuadratureOptions& opt) {
  const GaussRule& rule = gauss_legendre(kPanelOrder);
  const double length = hi - lo;
  if (!(length > 0.0)) return {0.0, 0.0, 0};

  struct Panel {
    double a, b;
    PanelSum coarse;
  };
  std::vector<Panel> stack;
  const int n0 = std::max(1, opt.initial_panels);
  double rough = 0.0;
  stack.reserve(static_cast<std::size_t>(n0) + 64);
  for (int k = 0; k < n0; ++k) {
    double a = lo + length * k / n0;
    double b = (k + 1 == n0) ? hi : lo + length * (k + 1) / n0;
    PanelSum coarse = gl_panel(f, a, b, rule);
    rough += coarse.value;
    stack.push_back({a, b, coarse});
  }

  constexpr double kEps = 2.220446049250313e-16;
  double scale = std::abs(rough);
  double total = 0.0;
  double err_total = 0.0;
  int used = n0;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    const PanelSum left = gl_panel(f, p.a, mid, rule);
    const PanelSum right = gl_panel(f, mid, p.b, rule);
    const double fine = left.value + right.value;
    const double e = std::abs(fine - p.coarse.value);
    const double tol = std::max(opt.rel_tol * scale, opt.abs_tol);
    // the L1 term is the rounding floor: cancellation-heavy panels cannot be
    // resolved below it no matter how far they are split
    const double floor = 64.0 * kEps * (left.l1 + right.l1);
    if (e <= tol * (p.b - p.a) / length + floor ||
        (p.b - p.a) <= 1e-14 * length) {
      total += fine;
      err_total += e;
      scale = std::max(scale, std::abs(total));
    } else {
      if (used + 2 > opt.panel_budget)
        fail(ErrorCode::quadrature_failure,
             "adaptive quadrature exhausted its panel budget of " +
                 std::to_string(opt.panel_budget));
      used += 2;
      stack.push_back({p.a, mid, left});
      stack.push_back({mid, p.b, right});
    }
  }
  return {total, err_total, used};
}

QuadratureResult integrate_graded(const std::function<double(double)>& f,
                                  double lo, double hi, double ratio,
                                  int levels, const QuadratureOptions& opt) {
  if (!(ratio > 0.0 && ratio < 1.0))
    fail(ErrorCode::validation, "grading ratio must lie in (0,1)");
  const double length = hi - lo;
  if (!(length > 0.0)) return {0.0, 0.0, 0};

  QuadratureResult out;
  double right = hi;
  for (int k = 0; k < levels; ++k) {
    const double left = lo + length * std::pow(ratio, k + 1);
    if (!(right - left > 0.0)) break;
    QuadratureOptions inner = opt;
    inner.initial_panels = 1;
    QuadratureResult r = integrate_adaptive(f, left, right, inner);
    out.value += r.value;
    out.error_estimate += r.error_estimate;
    out.panels_used += r.panels_used;
    right = left;
  }
  return out;
}

}  // namespace nlstokes
